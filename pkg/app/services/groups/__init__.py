"""Permutation groups, group orders, permutation lattices and the HH¹ probe."""
from app.services.groups.permutations import (
    CATALOG,
    CATALOG_ALIASES,
    GroupData,
    catalog_group,
    compose,
    format_permutation,
    make_group,
    parse_generators,
    parse_permutation,
)
from app.services.groups.algebra import (
    DoubleCosetPartition,
    double_cosets,
    group_order,
    permutation_lattice,
    right_cosets,
    sign_lattice,
    trivial_lattice,
)
from app.services.groups.hochschild import (
    DerivationReport,
    EnvelopingOrder,
    derivation_system,
    enveloping_order,
    hochschild1_vanishes,
    hochschild1_via_derivations,
)
