from __future__ import annotations

import pytest

from app.exceptions import DimensionCapExceeded, GroupTooLarge, InputValidationError, NotSubgroup
from app.services.groups import (
    catalog_group,
    compose,
    derivation_system,
    double_cosets,
    enveloping_order,
    format_permutation,
    group_order,
    hochschild1_vanishes,
    hochschild1_via_derivations,
    make_group,
    parse_generators,
    parse_permutation,
    permutation_lattice,
    right_cosets,
    sign_lattice,
)
from app.services.lattices import hom_basis, is_rigid, make_lattice
from app.services.witt import make_context


@pytest.fixture
def s3():
    return catalog_group("S3")


# ---------- permutations ----------

def test_parse_permutation() -> None:
    assert parse_permutation("(1 2)(3 4)") == (1, 0, 3, 2)
    assert parse_permutation("(1,2,3)") == (1, 2, 0)
    assert parse_permutation("()") == ()
    assert parse_permutation("()", degree=3) == (0, 1, 2)
    assert parse_permutation("(2 3)", degree=4) == (0, 2, 1, 3)


@pytest.mark.parametrize("text", ["(1 1)", "(1 a)", "1 2", "(0 1)", "(1 2)(2 3)"])
def test_malformed_permutations(text: str) -> None:
    with pytest.raises(InputValidationError):
        parse_permutation(text)


def test_parse_generators() -> None:
    assert parse_generators("(1 2),(1 2 3)") == ["(1 2)", "(1 2 3)"]
    assert parse_generators("(1,2)(3,4); (1 3)") == ["(1,2)(3,4)", "(1 3)"]
    with pytest.raises(InputValidationError):
        parse_generators("(1 2")


def test_format_and_compose() -> None:
    assert format_permutation((1, 0, 2)) == "(1 2)"
    assert format_permutation((0, 1, 2)) == "()"
    a, b = parse_permutation("(1 2)", 3), parse_permutation("(1 2 3)", 3)
    # a first, then b
    assert compose(a, b) == (2, 1, 0)


# ---------- groups ----------

@pytest.mark.parametrize(
    "name,order",
    [("C1", 1), ("C2", 2), ("C3", 3), ("C4", 4), ("C2xC2", 4), ("V4", 4), ("S3", 6), ("D4", 8), ("d8", 8)],
)
def test_catalog_orders(name: str, order: int) -> None:
    assert catalog_group(name).order == order


def test_unknown_catalog_name() -> None:
    with pytest.raises(InputValidationError):
        catalog_group("A5")


def test_group_table_is_a_group(s3) -> None:
    assert s3.elements[0] == (0, 1, 2)
    for i in range(s3.order):
        assert s3.multiply(i, s3.inverse(i)) == 0
        assert s3.multiply(0, i) == i
    assert len(s3.all_subgroups()) == 6


def test_group_cap() -> None:
    with pytest.raises(GroupTooLarge):
        make_group(["(1 2 3 4 5)", "(1 2)"], cap=64)
    assert make_group(["(1 2 3 4 5)", "(1 2)"], cap=120).order == 120


def test_subgroup_membership(s3) -> None:
    assert len(s3.subgroup(["(1 2)"])) == 2
    assert len(s3.subgroup(["(1 2 3)"])) == 3
    with pytest.raises(NotSubgroup):
        s3.subgroup(["(1 2 3 4)"])


# ---------- cosets ----------

def test_double_cosets_of_transposition_subgroup(s3) -> None:
    partition = double_cosets(s3, s3.subgroup(["(1 2)"]))
    assert len(partition) == 2
    assert partition.sizes == [2, 4]


def test_double_cosets_extremes(s3) -> None:
    whole = double_cosets(s3, frozenset(range(s3.order)))
    assert whole.sizes == [6]
    trivial = double_cosets(s3, frozenset({0}))
    assert len(trivial) == 6


def test_double_cosets_reject_non_subgroup() -> None:
    c3 = catalog_group("C3")
    with pytest.raises(NotSubgroup):
        double_cosets(c3, frozenset({0, 1}))


def test_right_cosets(s3) -> None:
    cosets = right_cosets(s3, s3.subgroup(["(1 2)"]))
    assert len(cosets) == 3
    assert frozenset().union(*cosets) == frozenset(range(6))


# ---------- permutation lattices ----------

def test_end_rank_counts_double_cosets(s3) -> None:
    ctx = make_context(3, 1, 4)
    H = s3.subgroup(["(1 2)"])
    L = permutation_lattice(s3, H, ctx)
    assert L.rank == 3
    assert hom_basis(L, L).rank == len(double_cosets(s3, H)) == 2


def test_coprime_stabilizer_gives_rigid_lattice(s3) -> None:
    ctx = make_context(3, 1, 4)
    order = group_order(s3, ctx)
    assert is_rigid(permutation_lattice(s3, s3.subgroup(["(1 2)"]), ctx, order))
    assert is_rigid(permutation_lattice(s3, frozenset(range(6)), ctx, order))


def test_sign_lattice_is_multiplicative(s3) -> None:
    order = group_order(s3, make_context(2, 1, 4))
    L = sign_lattice(s3, order)
    assert L.rank == 1
    assert L.action("(1 2)")[0, 0] == -order.ctx.one()
    assert L.action("(1 2 3)")[0, 0] == order.ctx.one()


def test_permutation_lattices_of_c4() -> None:
    G = catalog_group("C4")
    ctx = make_context(2, 1, 6)
    order = group_order(G, ctx)
    for H in G.all_subgroups():
        L = permutation_lattice(G, H, ctx, order)
        assert hom_basis(L, L).rank == len(double_cosets(G, H)) == 4 // len(H)
        assert is_rigid(L)


@pytest.mark.slow
@pytest.mark.parametrize(
    "name,p",
    [("C2", 2), ("C3", 3), ("C4", 2), ("S3", 2), ("S3", 3), ("C2xC2", 2), ("D4", 2)],
)
def test_permutation_lattices_across_catalog(name: str, p: int) -> None:
    G = catalog_group(name)
    ctx = make_context(p, 1, 6)
    order = group_order(G, ctx)
    for H in G.all_subgroups():
        L = permutation_lattice(G, H, ctx, order)
        assert hom_basis(L, L).rank == len(double_cosets(G, H))
        assert is_rigid(L)


# ---------- enveloping order and HH¹ ----------

def test_enveloping_order_dimensions(oc2) -> None:
    env = enveloping_order(oc2)
    assert env.order.dimension == 4
    assert env.order.group_size == 4
    assert env.diagonal.rank == 2
    # the diagonal action is a genuine right action
    make_lattice(env.order, list(env.diagonal.matrices))


def test_enveloping_order_cap(oc2) -> None:
    with pytest.raises(DimensionCapExceeded):
        enveloping_order(oc2, cap=3)


def test_hh1_of_c2(oc2) -> None:
    report = hochschild1_via_derivations(oc2)
    assert report.vanishes
    assert report.derivation_rank == 0
    assert hochschild1_vanishes(oc2)


def test_derivation_system_shape(oc2) -> None:
    system = derivation_system(oc2)
    assert system.rows == 4
    assert system.cols == 8


def test_hh1_agrees_with_derivations_for_s3(s3) -> None:
    order = group_order(s3, make_context(3, 1, 8))
    oracle = hochschild1_via_derivations(order)
    assert hochschild1_vanishes(order) == oracle.vanishes
    assert oracle.vanishes


def test_hh1_of_c3() -> None:
    order = group_order(catalog_group("C3"), make_context(3, 1, 6))
    oracle = hochschild1_via_derivations(order)
    assert oracle.vanishes
    assert oracle.derivation_rank == 0
    assert hochschild1_vanishes(order)


@pytest.mark.slow
def test_hh1_of_klein_four_group() -> None:
    order = group_order(catalog_group("C2xC2"), make_context(2, 1, 6))
    oracle = hochschild1_via_derivations(order)
    assert oracle.vanishes
    assert hochschild1_vanishes(order) == oracle.vanishes


def test_group_invariants_are_stable_under_precision_lift(s3, c2) -> None:
    H = s3.subgroup(["(1 2)"])
    for N in (4, 6):
        ctx = make_context(3, 1, N)
        L = permutation_lattice(s3, H, ctx)
        assert hom_basis(L, L).rank == 2
        assert is_rigid(L)
    for N in (6, 8):
        order = group_order(c2, make_context(2, 1, N))
        assert hochschild1_vanishes(order)
        assert hochschild1_via_derivations(order).vanishes
