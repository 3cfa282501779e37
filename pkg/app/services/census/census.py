"""
Census of sublattices up to a colength bound, grouped into isomorphism classes
and annotated with rigidity, End rank and Ext¹ invariants.
"""
import logging
import time
from dataclasses import dataclass, field
from typing import Optional

from app.constants import ENUMERATION_LIMIT, ISOMORPHISM_FAILURE_BITS
from app.exceptions import PrecisionExhausted
from app.services.census.sublattices import (
    SublatticeBasis,
    enumerate_by_colength,
    sublattice_representation,
)
from app.services.lattices import (
    ExtInvariants,
    Lattice,
    ext1_invariants,
    find_isomorphism,
    rigidity_profile,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SublatticeInvariants:
    end_rank: int
    residue_end_dim: int
    rigid: bool
    ext1: ExtInvariants

    @property
    def bucket(self) -> tuple:
        return (self.end_rank, self.residue_end_dim, self.rigid, self.ext1.invariants)


@dataclass
class CensusClass:
    representative: SublatticeBasis
    lattice: Lattice
    invariants: SublatticeInvariants
    multiplicities: dict = field(default_factory=dict)  # colength -> count

    @property
    def rigid(self) -> bool:
        return self.invariants.rigid

    @property
    def end_rank(self) -> int:
        return self.invariants.end_rank

    @property
    def size(self) -> int:
        return sum(self.multiplicities.values())


@dataclass
class CensusReport:
    parent: Lattice
    max_colength: int
    precision: int
    classes: list
    level_counts: dict  # colength -> number of sublattices
    elapsed: Optional[float] = None

    @property
    def rigid_classes(self) -> list:
        return [c for c in self.classes if c.rigid]

    @property
    def total(self) -> int:
        return sum(self.level_counts.values())


def sublattice_invariants(L: Lattice) -> SublatticeInvariants:
    profile = rigidity_profile(L)
    ext = ext1_invariants(L, L)
    return SublatticeInvariants(
        end_rank=profile.end_rank,
        residue_end_dim=profile.residue_end_dim,
        rigid=profile.rigid,
        ext1=ext,
    )


def census_rigid(
    L0: Lattice,
    l_max: int,
    seed: int = 0,
    limit: int = ENUMERATION_LIMIT,
    failure_bits: int = ISOMORPHISM_FAILURE_BITS,
) -> CensusReport:
    """
    All sublattices of L0 of colength <= l_max, grouped into isomorphism classes.

    The enumeration runs on L0 lifted to precision N + l_max so that every
    sublattice representation is known to precision N.

    Raises:
        PrecisionExhausted: l_max >= N, or a certificate fails
    """
    start = time.perf_counter()
    N = L0.ctx.N
    if l_max >= N:
        raise PrecisionExhausted(f"Colength bound {l_max} needs precision above {N}", N)
    work = L0.with_precision(N + l_max)
    levels = enumerate_by_colength(work, l_max, limit)
    members = [basis for c in sorted(levels) for basis in levels[c]]
    lattices = [
        sublattice_representation(work, basis).with_precision(N) if basis.colength else L0
        for basis in members
    ]

    invariants = [sublattice_invariants(lattice) for lattice in lattices]

    classes = []
    buckets = {}
    for basis, lattice, inv in zip(members, lattices, invariants):
        target = None
        for candidate in buckets.get(inv.bucket, []):
            if find_isomorphism(
                candidate.lattice, lattice, seed=seed, failure_bits=failure_bits, enumeration_limit=limit
            ).isomorphic:
                target = candidate
                break
        if target is None:
            representative = SublatticeBasis(L0, basis.B.change_precision(N))
            target = CensusClass(representative, lattice, inv)
            buckets.setdefault(inv.bucket, []).append(target)
            classes.append(target)
        target.multiplicities[basis.colength] = target.multiplicities.get(basis.colength, 0) + 1

    level_counts = {c: len(levels[c]) for c in sorted(levels)}
    elapsed = time.perf_counter() - start
    logger.info(
        f"Census to colength {l_max}: {sum(level_counts.values())} sublattices, "
        f"{len(classes)} classes, {sum(1 for c in classes if c.rigid)} rigid ({elapsed:.2f}s)"
    )
    return CensusReport(
        parent=L0,
        max_colength=l_max,
        precision=N,
        classes=classes,
        level_counts=level_counts,
        elapsed=elapsed,
    )
