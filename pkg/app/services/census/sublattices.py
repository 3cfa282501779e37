"""
Λ-stable sublattices of full rank, in canonical upper-triangular form.

A sublattice L' ≤ L is stored by the Howell form B of its basis in the
coordinates of L: diagonal p^{v_1}, ..., p^{v_m}, entries above each pivot
reduced mod p^{v_j}. Its colength is Σ v_j.
"""
import itertools
import logging
from dataclasses import dataclass
from typing import Union

from app.constants import ENUMERATION_LIMIT
from app.exceptions import EnumerationCapExceeded, NotStable, PrecisionExhausted
from app.services.lattices import Lattice
from app.services.linalg import RMatrix, howell_form, kernel, rank, vector_matrix

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class SublatticeBasis:
    parent: Lattice
    B: RMatrix

    @property
    def valuations(self) -> tuple:
        return tuple(self.B[i, i].valuation() for i in range(self.B.rows))

    @property
    def colength(self) -> int:
        return sum(self.valuations)

    @property
    def key(self) -> tuple:
        return tuple(e.coeffs for e in self.B.entries)

    def sort_key(self) -> tuple:
        return (self.colength, self.valuations, self.key)


def identity_basis(L: Lattice) -> SublatticeBasis:
    return SublatticeBasis(L, RMatrix.identity(L.ctx, L.rank))


# ---------- Canonical form and stability ----------

def _triangular(L: Lattice, generators: RMatrix) -> RMatrix:
    form = howell_form(generators)
    pivots = form.pivots
    if len(pivots) != L.rank or any(col != i for i, (col, _) in enumerate(pivots)):
        raise NotStable("Generators do not span a full-rank sublattice")
    return form.nonzero_rows()


def _back_substitute(B: RMatrix, C: RMatrix) -> RMatrix:
    """X with X·B = C for upper-triangular B with diagonal p^{v_j}."""
    ctx = B.ctx
    m = B.rows
    valuations = [B[j, j].valuation() for j in range(m)]
    rows = []
    for i in range(C.rows):
        row = []
        for j in range(m):
            numerator = C[i, j]
            for k in range(j):
                if not B[k, j].is_zero() and not row[k].is_zero():
                    numerator = numerator - row[k] * B[k, j]
            try:
                row.append(numerator.shift_down(valuations[j]))
            except ValueError:
                raise NotStable(f"Row span is not stable: entry ({i}, {j}) is not integral")
        rows.append(row)
    return RMatrix.from_rows(ctx, rows, m)


def sublattice_representation(L: Lattice, B: Union[SublatticeBasis, RMatrix]) -> Lattice:
    """
    The lattice L' spanned by the rows of B, with Δ'(λ) = B·Δ(λ)·B⁻¹.

    Entries are known modulo p^(N - colength), which is the precision of the
    returned lattice.

    Raises:
        NotStable: some Δ'(λ) is not integral
        PrecisionExhausted: colength >= N
    """
    if isinstance(B, SublatticeBasis):
        B = B.B
    valuations = [B[j, j].valuation() for j in range(B.rows)]
    colength = sum(valuations)
    N = L.ctx.N
    if colength >= N:
        raise PrecisionExhausted(f"Sublattice of colength {colength} needs precision above {N}", N)
    reduced = N - colength
    matrices = tuple(
        _back_substitute(B, B @ M).change_precision(reduced) for M in L.matrices
    )
    return Lattice(
        order=L.order.with_precision(reduced),
        rank=L.rank,
        matrices=matrices,
        name=f"sublattice of colength {colength}",
    )


def canonical_basis(basis: Union[SublatticeBasis, RMatrix], parent: Lattice = None) -> SublatticeBasis:
    """
    Howell-canonical representative of a stable full-rank row span.

    Raises:
        NotStable: the span is not Λ-stable or not of full rank
    """
    if isinstance(basis, SublatticeBasis):
        parent, generators = basis.parent, basis.B
    else:
        generators = basis
    if parent is None:
        raise ValueError("A parent lattice is required for a bare generator matrix")
    B = _triangular(parent, generators)
    for g in parent.order.generator_indices:
        _back_substitute(B, B @ parent.matrices[g])
    return SublatticeBasis(parent, B)


# ---------- Maximal sublattices ----------

def _projective_points(field, dimension: int, limit: int):
    if field.q ** dimension > limit:
        raise EnumerationCapExceeded(
            f"Residue space of size {field.q}^{dimension} exceeds enumeration limit {limit}"
        )
    for point in itertools.product(list(field.elements()), repeat=dimension):
        leading = next((c for c in point if not c.is_zero()), None)
        if leading is not None and leading == field.one():
            yield list(point)


def _spin(vector: list, actions: list, dimension: int) -> RMatrix:
    """Smallest subspace containing vector and stable under the actions, in echelon form."""
    field = actions[0].ctx if actions else vector[0].ctx
    span = vector_matrix(field, [vector], dimension)
    queue = [vector]
    while queue:
        v = queue.pop()
        row = vector_matrix(field, [v], dimension)
        for A in actions:
            image = list((row @ A).row(0))
            candidate = vector_matrix(field, span.row_lists() + [image], dimension)
            if rank(candidate) > span.rows:
                span = candidate
                queue.append(image)
    return howell_form(span).nonzero_rows()


def _contains(big: RMatrix, small: RMatrix) -> bool:
    stacked = vector_matrix(big.ctx, big.row_lists() + small.row_lists(), big.cols)
    return rank(stacked) == big.rows


def maximal_submodules_mod_p(L: Lattice, limit: int = ENUMERATION_LIMIT) -> list:
    """
    Maximal Λ-stable subspaces of L/pL, as residue-field row bases.

    They are the annihilators of the minimal submodules of the dual module,
    on which Λ acts through the transposed matrices.
    """
    field = L.ctx.residue_field()
    m = L.rank
    dual_actions = [A.change_precision(1).transpose() for A in L.generator_actions()]
    spans = {}
    for point in _projective_points(field, m, limit):
        S = _spin(point, dual_actions, m)
        spans.setdefault(tuple(e.coeffs for e in S.entries), S)
    candidates = sorted(spans.values(), key=lambda S: (S.rows, tuple(e.coeffs for e in S.entries)))
    minimal = [
        S for S in candidates
        if not any(T.rows < S.rows and _contains(S, T) for T in candidates)
    ]
    return [kernel(S.transpose()) for S in minimal]


def maximal_sublattices(L: Lattice, basis: SublatticeBasis = None, limit: int = ENUMERATION_LIMIT) -> list:
    """
    Maximal Λ-stable sublattices of L' (the span of basis, default L itself),
    in canonical form in the coordinates of L.
    """
    basis = basis or identity_basis(L)
    current = sublattice_representation(L, basis) if basis.colength else L
    ctx = L.ctx
    B = basis.B
    p_rows = B.scale(ctx.p).row_lists()
    children = []
    for W in maximal_submodules_mod_p(current, limit):
        lifted = vector_matrix(ctx, [[ctx.element(e.coeffs) for e in W.row(i)] for i in range(W.rows)], L.rank)
        generators = vector_matrix(ctx, (lifted @ B).row_lists() + p_rows, L.rank)
        children.append(SublatticeBasis(L, _triangular(L, generators)))
    return children


def enumerate_by_colength(L: Lattice, l_max: int, limit: int = ENUMERATION_LIMIT) -> dict:
    """
    All stable sublattices of colength 0..l_max, breadth-first through maximal
    sublattices, each level deduplicated and sorted.
    """
    if l_max >= L.ctx.N:
        raise PrecisionExhausted(f"Colength {l_max} needs precision above {L.ctx.N}", L.ctx.N)
    levels = {c: {} for c in range(l_max + 1)}
    root = identity_basis(L)
    levels[0][root.key] = root
    for colength in range(l_max):
        for basis in sorted(levels[colength].values(), key=SublatticeBasis.sort_key):
            for child in maximal_sublattices(L, basis, limit):
                if child.colength <= l_max:
                    levels[child.colength].setdefault(child.key, child)
        logger.debug(f"Colength {colength + 1}: {len(levels[colength + 1])} sublattices so far")
    return {
        c: sorted(found.values(), key=SublatticeBasis.sort_key)
        for c, found in levels.items()
    }


def enumerate_sublattices(L: Lattice, l: int, limit: int = ENUMERATION_LIMIT) -> list:
    """
    Every Λ-sublattice of L with O-length(L/L') = l, once each, in canonical form.

    Raises:
        PrecisionExhausted: l >= N
    """
    if l < 0:
        raise ValueError("Colength must be non-negative")
    found = enumerate_by_colength(L, l, limit)[l]
    logger.info(f"{len(found)} sublattices of colength {l} in {L.describe()}")
    return found
