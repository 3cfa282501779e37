"""
Canonical forms and linear systems over the chain ring R_N.

Every nonzero element is p^v times a unit, so elimination picks the entry of
least valuation as pivot and clears the others with exact quotients. The
precision certificate: results are certified exact over O when every nonzero
pivot valuation is at most floor(N/2).
"""
import logging
from dataclasses import dataclass

from app.exceptions import NotUnit, PrecisionExhausted
from app.services.linalg.matrix import RMatrix, vector_matrix
from app.services.witt.context import ArithmeticContext

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class HowellForm:
    H: RMatrix
    U: RMatrix
    pivots: tuple  # (column, valuation) pairs

    @property
    def certified(self) -> bool:
        limit = self.H.ctx.N // 2
        return all(v <= limit for _, v in self.pivots)

    def nonzero_rows(self) -> RMatrix:
        return vector_matrix(self.H.ctx, [self.H.row(i) for i in range(len(self.pivots))], self.H.cols)


@dataclass(frozen=True)
class Elimination:
    """Result of full-pivot elimination: U·A·P is upper triangular with pivots p^v on the diagonal."""
    T: list
    U: list
    column_order: list
    pivots: list  # valuations, in elimination order

    @property
    def rank(self) -> int:
        return len(self.pivots)


# ---------- Row helpers ----------

def _axpy(target: list, factor, source: list) -> list:
    # target - factor * source
    return [a - factor * b if not b.is_zero() else a for a, b in zip(target, source)]


def _scale(row: list, factor) -> list:
    return [factor * a for a in row]


def certify(pivots, N: int, what: str = "computation"):
    """Raise PrecisionExhausted unless every nonzero pivot valuation is <= N//2."""
    limit = N // 2
    worst = max((v for v in pivots if 0 < v < N), default=0)
    if worst > limit:
        raise PrecisionExhausted(
            f"{what}: pivot valuation {worst} exceeds certificate bound {limit} at precision {N}", N
        )


def eliminate(A: RMatrix, transform: bool = True) -> Elimination:
    """Full-pivot elimination; the pivot valuations are the elementary divisors of A."""
    N = A.ctx.N
    T = A.row_lists()
    U = RMatrix.identity(A.ctx, A.rows).row_lists() if transform else None
    order = list(range(A.cols))
    pivots = []
    r = 0
    while r < A.rows and r < A.cols:
        best = None
        for i in range(r, A.rows):
            row = T[i]
            for j in range(r, A.cols):
                v = row[j].valuation()
                if v < N and (best is None or v < best[0]):
                    best = (v, i, j)
                    if v == 0:
                        break
            if best is not None and best[0] == 0:
                break
        if best is None:
            break
        v, i, j = best
        if i != r:
            T[r], T[i] = T[i], T[r]
            if transform:
                U[r], U[i] = U[i], U[r]
        if j != r:
            for row in T:
                row[r], row[j] = row[j], row[r]
            order[r], order[j] = order[j], order[r]
        unit_inverse = T[r][r].shift_down(v).inverse()
        T[r] = _scale(T[r], unit_inverse)
        if transform:
            U[r] = _scale(U[r], unit_inverse)
        for i2 in range(r + 1, A.rows):
            e = T[i2][r]
            if e.is_zero():
                continue
            factor = e.shift_down(v)
            T[i2] = _axpy(T[i2], factor, T[r])
            if transform:
                U[i2] = _axpy(U[i2], factor, U[r])
        pivots.append(v)
        r += 1
    return Elimination(T, U, order, pivots)


# ---------- Public operations ----------

def howell_form(A: RMatrix) -> HowellForm:
    """
    Howell form of the row span of A: echelon rows with pivots p^v, entries above
    each pivot reduced mod p^v, and the completion rows p^(N-v)·row folded in so
    that spans are equal iff forms are identical.
    """
    ctx = A.ctx
    N = ctx.N
    H = A.row_lists()
    U = RMatrix.identity(ctx, A.rows).row_lists()
    profile = []
    r = 0
    for j in range(A.cols):
        best = None
        for i in range(r, len(H)):
            v = H[i][j].valuation()
            if v < N and (best is None or v < best[0]):
                best = (v, i)
                if v == 0:
                    break
        if best is None:
            continue
        v, i = best
        H[r], H[i] = H[i], H[r]
        U[r], U[i] = U[i], U[r]
        unit_inverse = H[r][j].shift_down(v).inverse()
        H[r] = _scale(H[r], unit_inverse)
        U[r] = _scale(U[r], unit_inverse)
        for i2 in range(r + 1, len(H)):
            e = H[i2][j]
            if e.is_zero():
                continue
            factor = e.shift_down(v)
            H[i2] = _axpy(H[i2], factor, H[r])
            U[i2] = _axpy(U[i2], factor, U[r])
        if v > 0:
            completion = ctx.p_power(N - v)
            H.append(_scale(H[r], completion))
            U.append(_scale(U[r], completion))
        profile.append((j, v))
        r += 1

    for k, (j, v) in enumerate(profile):
        for i in range(k):
            e = H[i][j]
            remainder = e.reduce_mod_p_power(v)
            if remainder == e:
                continue
            factor = (e - remainder).shift_down(v)
            H[i] = _axpy(H[i], factor, H[k])
            U[i] = _axpy(U[i], factor, U[k])

    total = max(A.rows, r)
    H_rows = H[:r] + H[r:][: total - r]
    U_rows = U[:r] + U[r:][: total - r]
    H_matrix = vector_matrix(ctx, H_rows, A.cols)
    U_matrix = vector_matrix(ctx, U_rows, A.rows)
    logger.debug(f"Howell form: pivot profile {profile}")
    return HowellForm(H_matrix, U_matrix, tuple(profile))


def kernel(A: RMatrix, saturated: bool = True) -> RMatrix:
    """
    Rows generating {v : v·A ≡ 0 mod p^N}.

    With saturated=True (default) only the rows that lift to the O-kernel are
    returned; they form part of an O-basis. With saturated=False the torsion
    rows p^(N-v)·u are included as well.

    Raises:
        PrecisionExhausted: when the pivot certificate fails
    """
    ctx = A.ctx
    elim = eliminate(A)
    certify(elim.pivots, ctx.N, "kernel")
    rows = [elim.U[i] for i in range(elim.rank, A.rows)]
    if not saturated:
        for i, v in enumerate(elim.pivots):
            if v > 0:
                rows.append(_scale(elim.U[i], ctx.p_power(ctx.N - v)))
    return vector_matrix(ctx, rows, A.rows)


def det_valuation(A: RMatrix) -> int:
    """ν_p(det A), capped at N (N means '≥ N')."""
    if not A.is_square():
        raise ValueError("det_valuation needs a square matrix")
    N = A.ctx.N
    elim = eliminate(A, transform=False)
    if elim.rank < A.rows:
        return N
    return min(sum(elim.pivots), N)


def smith_invariants(A: RMatrix) -> list:
    """Elementary-divisor valuations of A, sorted, zero divisors reported as N."""
    N = A.ctx.N
    elim = eliminate(A, transform=False)
    size = min(A.rows, A.cols)
    return sorted(elim.pivots) + [N] * (size - elim.rank)


def rank(A: RMatrix) -> int:
    """Number of nonzero elementary divisors (the rank when the context is a field)."""
    return eliminate(A, transform=False).rank


def invert(A: RMatrix) -> RMatrix:
    """
    Exact inverse mod p^N by Gauss-Jordan with unit pivots.

    Raises:
        NotUnit: when det_valuation(A) > 0
    """
    if not A.is_square():
        raise ValueError("invert needs a square matrix")
    ctx = A.ctx
    n = A.rows
    T = A.row_lists()
    U = RMatrix.identity(ctx, n).row_lists()
    for c in range(n):
        pivot_row = next((i for i in range(c, n) if T[i][c].is_unit()), None)
        if pivot_row is None:
            raise NotUnit("Matrix is not invertible over R_N (positive determinant valuation)")
        T[c], T[pivot_row] = T[pivot_row], T[c]
        U[c], U[pivot_row] = U[pivot_row], U[c]
        inv = T[c][c].inverse()
        T[c] = _scale(T[c], inv)
        U[c] = _scale(U[c], inv)
        for i in range(n):
            if i != c and not T[i][c].is_zero():
                factor = T[i][c]
                T[i] = _axpy(T[i], factor, T[c])
                U[i] = _axpy(U[i], factor, U[c])
    return RMatrix.from_rows(ctx, U, n)


def solve_left(B: RMatrix, C: RMatrix) -> RMatrix:
    """X with X·B = C for invertible B."""
    return C @ invert(B)


def _columns(A: RMatrix, columns: list) -> RMatrix:
    return RMatrix.from_rows(A.ctx, [[A[i, j] for j in columns] for i in range(A.rows)], len(columns))


def saturated_echelon(K: RMatrix) -> tuple:
    """
    Canonical basis of a saturated row span (a direct summand of R_N^n).

    The pivot columns are the first columns independent mod p, and the basis
    restricted to them is the identity. Unlike the Howell form no p-power
    completion rows appear, so the row count is the O-rank of the span.
    Returns (basis, pivot_columns).

    Raises:
        ValueError: the rows are not part of an O-basis
    """
    if not K.rows:
        return K, []
    residue = K.change_precision(1)
    chosen = []
    for j in range(K.cols):
        trial = chosen + [j]
        if rank(_columns(residue, trial)) == len(trial):
            chosen = trial
            if len(chosen) == K.rows:
                break
    if len(chosen) < K.rows:
        raise ValueError("Rows do not span a direct summand")
    return invert(_columns(K, chosen)) @ K, chosen


def residue_rank(A: RMatrix) -> int:
    """Rank of A mod p over the residue field."""
    return rank(A.change_precision(1))


def standard_basis(ctx: ArithmeticContext, n: int) -> RMatrix:
    return RMatrix.identity(ctx, n)
