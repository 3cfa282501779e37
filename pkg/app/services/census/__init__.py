"""Sublattice enumeration and the rigid-lattice census."""
from app.services.census.sublattices import (
    SublatticeBasis,
    canonical_basis,
    enumerate_by_colength,
    enumerate_sublattices,
    identity_basis,
    maximal_sublattices,
    maximal_submodules_mod_p,
    sublattice_representation,
)
from app.services.census.census import (
    CensusClass,
    CensusReport,
    SublatticeInvariants,
    census_rigid,
    sublattice_invariants,
)
