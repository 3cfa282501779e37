"""Orders, lattices and the Hom / Ext¹ / isomorphism machinery."""
from app.services.lattices.order import Order, make_order, scalar_order
from app.services.lattices.lattice import (
    FiniteModule,
    Lattice,
    align,
    change_basis,
    direct_sum,
    make_lattice,
    reduce_mod,
    regular_lattice,
)
from app.services.lattices.homology import (
    ExtInvariants,
    HomBasis,
    RigidityProfile,
    end_reduction_surjective,
    ext1_invariants,
    hom_basis,
    intertwiner_system,
    is_rigid,
    rigidity_profile,
)
from app.services.lattices.isomorphism import IsomorphismResult, find_isomorphism, is_isomorphic
