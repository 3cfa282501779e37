"""
Hom and Ext¹ between lattices.

Hom_Λ(L, M) is the kernel of the intertwiner system: unknowns X (m_L × m_M)
with Δ_L(λ)·X = X·Δ_M(λ) for each algebra generator λ. Its elementary
divisors p^{a_i} also give Ext¹: Ext¹_Λ(L, M) ≅ ⊕ O/p^{min(a_i, c)} over the
divisors with 0 < a_i < N, where p^c annihilates Ext¹.
"""
import logging
from dataclasses import dataclass
from typing import Optional

from sympy import multiplicity

from app.constants import EXT_STABILIZATION_START
from app.exceptions import StabilizationFailure
from app.services.lattices.lattice import Lattice, align
from app.services.linalg import RMatrix, certify, eliminate, kernel, rank, saturated_echelon

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class HomBasis:
    source: Lattice
    target: Lattice
    basis: tuple  # RMatrix, m_source × m_target

    @property
    def rank(self) -> int:
        return len(self.basis)

    def flattened(self) -> RMatrix:
        cols = self.source.rank * self.target.rank
        return RMatrix.from_rows(self.source.ctx, [X.flatten() for X in self.basis], cols) if self.basis \
            else RMatrix(self.source.ctx, 0, cols, ())


@dataclass(frozen=True)
class RigidityProfile:
    end_rank: int
    image_rank: int  # rank of the image of End_Λ(L) in End(L/pL)
    residue_end_dim: int  # dim End_Λ(L/pL)

    @property
    def rigid(self) -> bool:
        return self.image_rank == self.residue_end_dim


@dataclass(frozen=True)
class ExtInvariants:
    invariants: tuple  # sorted exponents e_i with Ext¹ ≅ ⊕ O/p^{e_i}
    exponent: int
    certified: bool
    policy: str  # "group-order", "given" or "stabilized"

    @property
    def vanishes(self) -> bool:
        return not self.invariants


# ---------- Intertwiner system ----------

def intertwiner_system(L: Lattice, M: Lattice) -> RMatrix:
    """
    Rows index unknowns (a, b) of X, columns index equations (λ, i, j).
    Entry = Δ_L(λ)[i][a]·[b == j] − [i == a]·Δ_M(λ)[b][j].
    """
    L, M = align(L, M)
    ctx = L.ctx
    mL, mM = L.rank, M.rank
    generators = L.order.generator_indices
    n_eq = len(generators) * mL * mM
    zero = ctx.zero()
    grid = [[zero] * n_eq for _ in range(mL * mM)]
    for g_pos, g in enumerate(generators):
        A, B = L.matrices[g], M.matrices[g]
        base = g_pos * mL * mM
        for i in range(mL):
            for a in range(mL):
                entry = A[i, a]
                if entry.is_zero():
                    continue
                for j in range(mM):
                    # unknown (a, j), equation (i, j)
                    col = base + i * mM + j
                    grid[a * mM + j][col] = grid[a * mM + j][col] + entry
        for b in range(mM):
            for j in range(mM):
                entry = B[b, j]
                if entry.is_zero():
                    continue
                for i in range(mL):
                    # unknown (i, b), equation (i, j)
                    col = base + i * mM + j
                    grid[i * mM + b][col] = grid[i * mM + b][col] - entry
    return RMatrix.from_rows(ctx, grid, n_eq)


def hom_basis(L: Lattice, M: Lattice) -> HomBasis:
    """
    O-basis of Hom_Λ(L, M), canonicalized to reduced echelon form.

    Raises:
        PrecisionExhausted: the elimination certificate fails
    """
    L, M = align(L, M)
    system = intertwiner_system(L, M)
    K, _ = saturated_echelon(kernel(system))
    basis = tuple(
        RMatrix.from_rows(L.ctx, [K.row(r)[a * M.rank:(a + 1) * M.rank] for a in range(L.rank)], M.rank)
        for r in range(K.rows)
    )
    logger.debug(f"Hom({L.describe()}, {M.describe()}) has rank {len(basis)}")
    return HomBasis(L, M, basis)


def rigidity_profile(L: Lattice) -> RigidityProfile:
    basis = hom_basis(L, L)
    image_rank = rank(basis.flattened().change_precision(1)) if basis.rank else 0
    residue_system = intertwiner_system(L, L).change_precision(1)
    residue_dim = residue_system.rows - rank(residue_system)
    return RigidityProfile(end_rank=basis.rank, image_rank=image_rank, residue_end_dim=residue_dim)


def end_reduction_surjective(L: Lattice) -> bool:
    """Whether End_Λ(L) → End_Λ(L/pL) is onto."""
    return rigidity_profile(L).rigid


def is_rigid(L: Lattice) -> bool:
    """Rigid means Ext¹_Λ(L, L) = 0, equivalently End_Λ(L) → End_Λ(L/pL) is onto."""
    rigid = end_reduction_surjective(L)
    logger.info(f"{L.describe()} is {'rigid' if rigid else 'not rigid'}")
    return rigid


# ---------- Ext¹ ----------

def _truncated(divisors: list, c: int) -> tuple:
    return tuple(sorted(min(a, c) for a in divisors))


def annihilating_exponent(L: Lattice) -> Optional[int]:
    """ν_p(|G|) for group orders (at least 1), None when no bound is known."""
    size = L.order.group_size
    if not size:
        return None
    return max(1, multiplicity(L.ctx.p, size))


def ext1_invariants(L: Lattice, M: Lattice, c: Optional[int] = None) -> ExtInvariants:
    """
    Elementary divisors of Ext¹_Λ(L, M).

    Args:
        L, M: lattices over the same order
        c: exponent with p^c·Ext¹ = 0; defaults to ν_p(|G|) for group orders,
           otherwise c is increased from 1 until the invariants stabilize.

    Raises:
        PrecisionExhausted: the elimination certificate fails
        StabilizationFailure: no stable exponent below N
    """
    L, M = align(L, M)
    N = L.ctx.N
    elim = eliminate(intertwiner_system(L, M), transform=False)
    certify(elim.pivots, N, "Ext¹")
    divisors = [a for a in elim.pivots if 0 < a < N]

    if c is not None:
        return ExtInvariants(_truncated(divisors, c), c, True, "given")

    bound = annihilating_exponent(L)
    if bound is not None:
        return ExtInvariants(_truncated(divisors, bound), bound, True, "group-order")

    for c in range(EXT_STABILIZATION_START, N):
        if _truncated(divisors, c) == _truncated(divisors, c + 1):
            logger.debug(f"Ext¹ invariants stabilized at exponent {c}")
            return ExtInvariants(_truncated(divisors, c), c, False, "stabilized")
    raise StabilizationFailure(f"Ext¹ invariants did not stabilize below precision {N}", N)
