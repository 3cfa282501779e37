"""
The enveloping order Λᵉ = Λᵒᵖ ⊗ Λ and the HH¹ probe.

HH¹(Λ) = Ext¹_Λᵉ(Λ, Λ), so HH¹ vanishes iff Λ is rigid as a Λᵉ-lattice.
The derivation oracle computes HH¹ = Der(Λ)/Inn(Λ) directly instead.
"""
import logging
from dataclasses import dataclass

from app.constants import ENVELOPING_DIMENSION_CAP
from app.exceptions import DimensionCapExceeded
from app.services.lattices import Lattice, Order, is_rigid, make_order
from app.services.linalg import RMatrix, kernel, saturated_echelon, smith_invariants

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class EnvelopingOrder:
    base: Order
    order: Order
    diagonal: Lattice


@dataclass(frozen=True)
class DerivationReport:
    derivation_rank: int
    inner_invariants: tuple  # elementary divisors of Inn in Der
    vanishes: bool


def _pair_label(order: Order, i: int, j: int) -> str:
    return f"{order.labels[i]}|{order.labels[j]}"


def enveloping_order(base: Order, cap: int = ENVELOPING_DIMENSION_CAP) -> EnvelopingOrder:
    """
    Λᵉ with (b_i⊗b_j)(b_k⊗b_l) = (b_k·b_i)⊗(b_j·b_l), and Λ as a right
    Λᵉ-lattice via x·(a⊗b) = a·x·b.

    Raises:
        DimensionCapExceeded: (dim Λ)² > cap
    """
    d = base.dimension
    D = d * d
    if D > cap:
        raise DimensionCapExceeded(f"Enveloping order of dimension {D} exceeds the cap of {cap}")
    ctx = base.ctx

    structure = {}
    for i in range(d):
        for j in range(d):
            for k in range(d):
                left = base.basis_product(k, i)
                if not left:
                    continue
                for l in range(d):
                    terms = {}
                    for r, c1 in left:
                        for s, c2 in base.basis_product(j, l):
                            index = r * d + s
                            terms[index] = terms.get(index, ctx.zero()) + c1 * c2
                    structure[(i * d + j, k * d + l)] = terms

    identity = [base.identity[r] * base.identity[s] for r in range(d) for s in range(d)]
    unit = base.identity_index()
    if unit is not None:
        generators = sorted(
            {g * d + unit for g in base.generator_indices} | {unit * d + g for g in base.generator_indices}
        )
    else:
        generators = list(range(D))
    # associativity is inherited from Λ
    order = make_order(
        ctx,
        structure,
        identity,
        labels=[_pair_label(base, i, j) for i in range(d) for j in range(d)],
        generator_indices=generators,
        group_size=base.group_size ** 2 if base.group_size else None,
        check_associativity=False,
    )

    left = [base.left_multiplication(i) for i in range(d)]
    right = [base.right_multiplication(j) for j in range(d)]
    matrices = tuple(left[i] @ right[j] for i in range(d) for j in range(d))
    diagonal = Lattice(order=order, rank=d, matrices=matrices, name="diagonal")
    logger.info(f"Enveloping order of dimension {D} built")
    return EnvelopingOrder(base, order, diagonal)


def hochschild1_vanishes(base: Order, cap: int = ENVELOPING_DIMENSION_CAP) -> bool:
    """HH¹(Λ) = 0, decided as rigidity of the diagonal Λᵉ-lattice."""
    return is_rigid(enveloping_order(base, cap).diagonal)


def derivation_system(base: Order) -> RMatrix:
    """
    Rows index the unknowns D[a][b] (D(b_a) = Σ_b D[a][b]·b_b); columns the
    Leibniz equations D(b_i·b_j) = D(b_i)·b_j + b_i·D(b_j), component s, for
    every i and every algebra generator j.
    """
    d = base.dimension
    ctx = base.ctx
    unit = base.identity_index()
    js = sorted(set(base.generator_indices) | ({unit} if unit is not None else set(range(d))))
    left = [base.left_multiplication(i) for i in range(d)]
    right = {j: base.right_multiplication(j) for j in js}
    pairs = [(i, j) for i in range(d) for j in js]
    zero = ctx.zero()
    grid = [[zero] * (len(pairs) * d) for _ in range(d * d)]
    for col_base, (i, j) in enumerate(pairs):
        base_col = col_base * d
        for k, c in base.basis_product(i, j):
            for s in range(d):
                grid[k * d + s][base_col + s] = grid[k * d + s][base_col + s] + c
        R, L = right[j], left[i]
        for b in range(d):
            for s in range(d):
                r = R[b, s]
                if not r.is_zero():
                    grid[i * d + b][base_col + s] = grid[i * d + b][base_col + s] - r
                lv = L[b, s]
                if not lv.is_zero():
                    grid[j * d + b][base_col + s] = grid[j * d + b][base_col + s] - lv
    return RMatrix.from_rows(ctx, grid, len(pairs) * d)


def hochschild1_via_derivations(base: Order) -> DerivationReport:
    """HH¹(Λ) = Der(Λ)/Inn(Λ), computed without the enveloping order."""
    d = base.dimension
    ctx = base.ctx
    derivations = kernel(derivation_system(base))
    if not derivations.rows:
        return DerivationReport(0, (), True)
    basis, pivot_columns = saturated_echelon(derivations)
    e = basis.rows

    # coordinates of ad(b_k) = L_k - R_k in the echelon basis are its pivot-column entries
    coordinates = []
    for k in range(d):
        ad = (base.left_multiplication(k) - base.right_multiplication(k)).flatten()
        coordinates.append([ad[c] for c in pivot_columns])
    inner = RMatrix.from_rows(ctx, coordinates, e)
    invariants = smith_invariants(inner)
    vanishes = e <= d and len(invariants) == e and all(v == 0 for v in invariants)
    logger.info(f"Der(Λ) has rank {e}; HH¹ {'vanishes' if vanishes else 'does not vanish'}")
    return DerivationReport(e, tuple(invariants), vanishes)
