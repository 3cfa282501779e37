"""
Isomorphism testing for lattices.

L ≅ M iff some element of Hom_Λ(L, M) has unit determinant, iff the
determinant polynomial det(Σ z_i·X̄_i) is nonzero on the residue reductions of a
Hom basis. The polynomial has degree rank(L) in each variable, so it is
nonzero iff it has a non-root in any field with more than rank(L) elements.
"""
import itertools
import logging
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from app.constants import ENUMERATION_LIMIT, ISOMORPHISM_FAILURE_BITS, ISOMORPHISM_SWEEP_MAX_RANK
from app.services.lattices.homology import hom_basis
from app.services.lattices.lattice import Lattice, align
from app.services.linalg import RMatrix, det_valuation
from app.services.witt import extend_context, teichmuller

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class IsomorphismResult:
    isomorphic: bool
    method: str  # "identical", "rank", "empty-hom", "base-sweep", "sweep" or "random"
    witness: Optional[RMatrix] = None
    extension_degree: int = 1
    points_tried: int = 0

    @property
    def exact(self) -> bool:
        return self.method != "random" or self.isomorphic


def _combination(matrices: list, point: tuple) -> RMatrix:
    total = None
    for coefficient, X in zip(point, matrices):
        if coefficient.is_zero():
            continue
        term = X.scale(coefficient)
        total = term if total is None else total + term
    return total


def _nonsingular(matrices: list, point: tuple) -> bool:
    combination = _combination(matrices, point)
    return combination is not None and det_valuation(combination) == 0


def _lift_witness(basis: tuple, point: tuple) -> RMatrix:
    ctx = basis[0].ctx
    lifted = [teichmuller(z, ctx) for z in point]
    return _combination(list(basis), tuple(lifted))


def find_isomorphism(
    L: Lattice,
    M: Lattice,
    seed: int = 0,
    failure_bits: int = ISOMORPHISM_FAILURE_BITS,
    enumeration_limit: int = ENUMERATION_LIMIT,
) -> IsomorphismResult:
    """
    Decide L ≅ M; returns a witness over O when one is found over the base field.

    Hom ranks up to two are swept exhaustively over a residue field with more
    than rank(L) elements, so the answer is exact. Larger Hom ranks fall back
    to random evaluation with failure probability below 2^-failure_bits.
    """
    L, M = align(L, M)
    if L.rank != M.rank:
        return IsomorphismResult(False, "rank")
    if L.same_matrices(M):
        return IsomorphismResult(True, "identical", witness=RMatrix.identity(L.ctx, L.rank))

    basis = hom_basis(L, M).basis
    if not basis:
        return IsomorphismResult(False, "empty-hom")
    d = len(basis)
    n = L.rank
    residue = L.ctx.residue_field()
    reduced = [X.change_precision(1) for X in basis]

    # base field sweep, which yields a witness over O
    tried = 0
    if residue.q ** d <= enumeration_limit:
        for point in itertools.product(list(residue.elements()), repeat=d):
            tried += 1
            if _nonsingular(reduced, point):
                witness = _lift_witness(basis, point)
                logger.debug(f"Isomorphism witness found after {tried} base-field points")
                return IsomorphismResult(True, "base-sweep", witness=witness, points_tried=tried)
        if residue.q > n:
            return IsomorphismResult(False, "base-sweep", points_tried=tried)

    k = 1
    while residue.q ** k <= n:
        k += 1
    embedding = extend_context(residue, k)
    field = embedding.target
    extended = [X.map(embedding, field) for X in reduced]
    elements = list(field.elements())

    if d <= ISOMORPHISM_SWEEP_MAX_RANK:
        for point in itertools.product(elements, repeat=d):
            tried += 1
            if _nonsingular(extended, point):
                return IsomorphismResult(True, "sweep", extension_degree=k, points_tried=tried)
        return IsomorphismResult(False, "sweep", extension_degree=k, points_tried=tried)

    trials = math.ceil(failure_bits / math.log2(field.q / n))
    rng = np.random.default_rng(seed)
    for _ in range(trials):
        tried += 1
        point = tuple(elements[i] for i in rng.integers(0, len(elements), size=d))
        if _nonsingular(extended, point):
            return IsomorphismResult(True, "random", extension_degree=k, points_tried=tried)
    logger.info(f"No invertible homomorphism in {trials} random trials over F_{field.q}")
    return IsomorphismResult(False, "random", extension_degree=k, points_tried=tried)


def is_isomorphic(L: Lattice, M: Lattice, seed: int = 0) -> bool:
    return find_isomorphism(L, M, seed=seed).isomorphic
