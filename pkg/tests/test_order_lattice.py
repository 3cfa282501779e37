from __future__ import annotations

import pytest

from app.exceptions import (
    AssociativityFailure,
    ContextMismatch,
    IdentityFailure,
    MultiplicativityFailure,
    SeparabilityUnverified,
)
from app.services.groups import catalog_group, group_order, trivial_lattice
from app.services.lattices import (
    change_basis,
    direct_sum,
    ext1_invariants,
    find_isomorphism,
    hom_basis,
    is_isomorphic,
    is_rigid,
    make_lattice,
    make_order,
    reduce_mod,
    regular_lattice,
    rigidity_profile,
    scalar_order,
)
from app.services.linalg import RMatrix, det_valuation
from app.services.witt import make_context


# ---------- orders ----------

def test_group_order_structure(oc2) -> None:
    assert oc2.dimension == 2
    assert oc2.labels == ("()", "(1 2)")
    assert oc2.group_size == 2
    assert oc2.identity_index() == 0
    assert oc2.separability_verified
    g = oc2.basis_vector(1)
    assert oc2.multiply(g, g) == oc2.basis_vector(0)


def test_non_associative_constants_are_rejected(ctx2) -> None:
    # basis 1, a, b with a·a = b, a·b = a, b·a = b·b = 0
    constants = {(0, j): {j: 1} for j in range(3)}
    constants.update({(j, 0): {j: 1} for j in range(3)})
    constants[(1, 1)] = {2: 1}
    constants[(1, 2)] = {1: 1}
    with pytest.raises(AssociativityFailure):
        make_order(ctx2, constants, [1, 0, 0], labels=["1", "a", "b"])


def test_wrong_identity_is_rejected(ctx2) -> None:
    with pytest.raises(IdentityFailure):
        make_order(ctx2, [[[1, 0], [0, 1]], [[0, 1], [1, 0]]], [0, 1])


def test_structure_constants_shape_is_checked(ctx2) -> None:
    with pytest.raises(ValueError):
        make_order(ctx2, [[[1, 0]], [[0, 1]]], [1, 0])


def test_separability_warning_at_low_precision(c2) -> None:
    with pytest.warns(SeparabilityUnverified):
        order = group_order(c2, make_context(2, 1, 2))
    assert not order.separability_verified


def test_trace_form_of_group_order(oc2) -> None:
    T = oc2.trace_form()
    assert T == RMatrix.from_rows(oc2.ctx, [[2, 0], [0, 2]])
    assert det_valuation(T) == 2


def test_order_precision_change_keeps_structure(oc2) -> None:
    lifted = oc2.with_precision(10)
    assert lifted.ctx.N == 10
    assert lifted.compatible(oc2)
    lowered = lifted.with_precision(6)
    assert lowered.ctx == oc2.ctx
    assert lowered.structure_constants() == oc2.structure_constants()


# ---------- lattices ----------

def test_non_multiplicative_action_is_rejected(oc2) -> None:
    ctx = oc2.ctx
    with pytest.raises(MultiplicativityFailure):
        make_lattice(oc2, [RMatrix.identity(ctx, 1), RMatrix.from_rows(ctx, [[2]])])


def test_identity_must_act_trivially(oc2) -> None:
    ctx = oc2.ctx
    with pytest.raises(MultiplicativityFailure):
        make_lattice(oc2, [RMatrix.from_rows(ctx, [[3]]), RMatrix.identity(ctx, 1)])


def test_lattice_accepts_matrices_by_label(oc2) -> None:
    L = make_lattice(oc2, {"()": [[1]], "(1 2)": [[-1]]}, name="sign")
    assert L.rank == 1
    assert L.action("(1 2)")[0, 0] == -oc2.ctx.one()


def test_direct_sum_of_characters_is_the_diagonal_lattice(plus, minus, diagonal) -> None:
    L = direct_sum(plus, minus)
    assert L.rank == 2
    assert L.same_matrices(diagonal)


def test_lattices_over_different_orders_do_not_mix(regular) -> None:
    C3 = group_order(catalog_group("C3"), make_context(2, 1, 6))
    with pytest.raises(ContextMismatch):
        hom_basis(regular, trivial_lattice(C3))


def test_reduce_mod(regular) -> None:
    quotient = reduce_mod(regular, 1)
    assert quotient.ctx.N == 1
    assert quotient.rank == 2
    with pytest.raises(ValueError):
        reduce_mod(regular, 7)


# ---------- Hom and rigidity ----------

def test_hom_ranks(regular, plus, minus) -> None:
    assert hom_basis(plus, minus).rank == 0
    assert hom_basis(regular, regular).rank == 2
    assert hom_basis(plus, regular).rank == 1


def test_hom_basis_intertwines(regular, diagonal) -> None:
    for X in hom_basis(regular, diagonal).basis:
        for A, B in zip(regular.matrices, diagonal.matrices):
            assert A @ X == X @ B


def test_rigidity(regular, plus, diagonal) -> None:
    assert is_rigid(regular)
    assert is_rigid(plus)
    assert is_rigid(direct_sum(plus, plus))
    assert not is_rigid(diagonal)


def test_rigidity_profile_of_diagonal_lattice(diagonal) -> None:
    profile = rigidity_profile(diagonal)
    assert profile.end_rank == 2
    assert profile.image_rank == 2
    assert profile.residue_end_dim == 4
    assert not profile.rigid


def test_rigidity_survives_precision_lift(regular, diagonal) -> None:
    assert is_rigid(regular.with_precision(10))
    assert not is_rigid(diagonal.with_precision(10))


@pytest.fixture
def twisted(c2):
    """Δ(g) = [[1, 0], [4, -1]] over Z/256, a split extension of the sign character by the trivial one."""
    order = group_order(c2, make_context(2, 1, 8))
    return make_lattice(order, {"()": [[1, 0], [0, 1]], "(1 2)": [[1, 0], [4, -1]]}, name="L_t")


def test_hom_rank_of_twisted_lattice_is_its_k_dimension(twisted) -> None:
    hom = hom_basis(twisted, twisted)
    assert hom.rank == 2
    ctx = twisted.ctx
    assert hom.basis[0] == RMatrix.from_rows(ctx, [[1, 0], [2, 0]])
    assert hom.basis[1] == RMatrix.from_rows(ctx, [[0, 0], [-2, 1]])
    for X in hom.basis:
        for A in twisted.matrices:
            assert A @ X == X @ A


def test_twisted_lattice_splits(twisted, diagonal) -> None:
    profile = rigidity_profile(twisted)
    assert (profile.end_rank, profile.image_rank, profile.residue_end_dim) == (2, 2, 4)
    assert not profile.rigid
    assert ext1_invariants(twisted, twisted).invariants == (1, 1)
    assert find_isomorphism(twisted, diagonal).isomorphic


def test_end_rank_is_stable_under_precision_lift(regular, diagonal, twisted) -> None:
    for L in (regular, diagonal, twisted):
        assert hom_basis(L.with_precision(L.ctx.N + 2), L.with_precision(L.ctx.N + 2)).rank == 2


# ---------- Ext¹ ----------

def test_ext1_between_characters(plus, minus) -> None:
    given = ext1_invariants(plus, minus, c=1)
    assert given.invariants == (1,)
    assert given.policy == "given"
    default = ext1_invariants(plus, minus)
    assert default.invariants == (1,)
    assert default.policy == "group-order"
    assert default.exponent == 1
    assert default.certified


def test_ext1_vanishes_for_rigid_lattices(plus, regular) -> None:
    assert ext1_invariants(plus, plus).vanishes
    assert ext1_invariants(regular, regular).vanishes


def test_ext1_of_diagonal_lattice(diagonal) -> None:
    assert ext1_invariants(diagonal, diagonal).invariants == (1, 1)


def test_ext1_is_stable_under_precision_lift(plus, minus, regular, diagonal) -> None:
    for L, M in ((plus, minus), (minus, plus), (regular, regular), (diagonal, diagonal), (regular, diagonal)):
        N = L.ctx.N
        lifted = ext1_invariants(L.with_precision(N + 2), M.with_precision(N + 2))
        assert lifted.invariants == ext1_invariants(L, M).invariants


def test_ext1_over_general_order_stabilizes(ctx2) -> None:
    order = scalar_order(ctx2)
    L = make_lattice(order, [RMatrix.identity(ctx2, 2)])
    result = ext1_invariants(L, L)
    assert result.vanishes
    assert result.policy == "stabilized"
    assert not result.certified


# ---------- isomorphism ----------

def test_regular_and_diagonal_lattices_are_not_isomorphic(regular, diagonal) -> None:
    result = find_isomorphism(regular, diagonal)
    assert not result.isomorphic
    assert result.exact


def test_change_of_basis_gives_isomorphic_lattice(regular) -> None:
    S = RMatrix.from_rows(regular.ctx, [[1, 1], [0, 1]])
    M = change_basis(regular, S)
    result = find_isomorphism(regular, M)
    assert result.isomorphic
    W = result.witness
    assert det_valuation(W) == 0
    for A, B in zip(regular.matrices, M.matrices):
        assert A @ W == W @ B


def test_isomorphism_shortcuts(regular, plus) -> None:
    assert find_isomorphism(regular, regular).method == "identical"
    assert find_isomorphism(regular, plus).method == "rank"
    assert not is_isomorphic(regular, plus)


def test_characters_are_not_isomorphic(plus, minus) -> None:
    result = find_isomorphism(plus, minus)
    assert not result.isomorphic
    assert result.method == "empty-hom"


def test_regular_lattice_of_c3_at_p3() -> None:
    ctx = make_context(3, 1, 4)
    order = group_order(catalog_group("C3"), ctx)
    L = regular_lattice(order)
    assert is_rigid(L)
    assert hom_basis(L, L).rank == 3
