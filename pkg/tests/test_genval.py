from __future__ import annotations

import itertools

import pytest

from app.exceptions import ContextMismatch, InputValidationError, PrecisionExhausted
from app.services.genval import (
    common_witness,
    generic_valuation,
    lift_valuation,
    lifted_expansion,
    make_point,
    make_polynomial,
    naive_valuation,
    variety_membership,
    witness_lift,
)
from app.services.witt import extend_context, make_context, teichmuller


@pytest.fixture
def ctx4():
    return make_context(2, 1, 4)


@pytest.fixture
def needs_extension(ctx4):
    """X² + 2X: at x = 0 the residue polynomial Z² + Z vanishes on F_2 but not on F_4."""
    return make_polynomial(ctx4, 1, {(2,): 1, (1,): 2})


@pytest.fixture
def origin(ctx4):
    return make_point(ctx4, [[0]])


def test_variable_at_origin(ctx4, origin) -> None:
    f = make_polynomial(ctx4, 1, {(1,): 1})
    assert naive_valuation(f) == 0
    assert generic_valuation(f, origin) == 1


def test_lifted_expansion_of_variable() -> None:
    ctx = make_context(3, 1, 3)
    f = make_polynomial(ctx, 1, {(1,): 1})
    x = make_point(ctx, [[1]])
    assert lifted_expansion(f, x) == make_polynomial(ctx, 1, {(0,): 1, (1,): 3})


def test_two_variable_valuation() -> None:
    ctx = make_context(2, 1, 6)
    f = make_polynomial(ctx, 2, {(2, 0): 1, (0, 1): 1})
    x = make_point(ctx, [[1], [1]])
    # f(1 + 2Z₁, 1 + 2Z₂) = 2 + 2Z₂ + 4Z₁ + 4Z₁²
    assert generic_valuation(f, x) == 1
    assert variety_membership(f, x, 1)
    assert not variety_membership(f, x, 2)


def test_constant_polynomial_has_its_own_valuation(ctx4, origin) -> None:
    f = make_polynomial(ctx4, 1, {(0,): 4})
    assert naive_valuation(f) == 2
    assert generic_valuation(f, origin) == 2


def test_generic_valuation_is_multiplicative(rng) -> None:
    ctx = make_context(2, 1, 8)
    checked = 0
    for _ in range(200):
        f = make_polynomial(ctx, 2, {
            (i, j): int(rng.integers(0, ctx.pN)) for i in range(3) for j in range(3) if i + j <= 2
        })
        g = make_polynomial(ctx, 2, {
            (i, j): int(rng.integers(0, ctx.pN)) for i in range(2) for j in range(2)
        })
        x = make_point(ctx, [[int(rng.integers(0, 2)), int(rng.integers(0, 2))] for _ in range(2)])
        try:
            vf, vg = generic_valuation(f, x), generic_valuation(g, x)
        except PrecisionExhausted:
            continue
        if vf + vg >= ctx.N:
            continue
        assert generic_valuation(f * g, x) == vf + vg
        checked += 1
    assert checked > 0


def test_generic_valuation_matches_brute_force_over_extension(needs_extension, origin, ctx4) -> None:
    assert generic_valuation(needs_extension, origin) == 2
    # over the base field every lift 2z gives 4z(z + 1), which has valuation >= 3
    base = min(needs_extension.evaluate([2 * z]).valuation() for z in ctx4.elements())
    assert base == 3
    embedding = extend_context(ctx4, 2)
    extended = needs_extension.map_coefficients(embedding, embedding.target)
    brute = min(extended.evaluate([2 * z]).valuation() for z in embedding.target.elements())
    assert brute == 2


def test_generic_valuation_does_not_depend_on_extension(needs_extension, origin) -> None:
    assert generic_valuation(needs_extension, origin, extension_degree=2) == 2
    assert generic_valuation(needs_extension, origin, extension_degree=3) == 2


def test_witness_needs_degree_two_extension(needs_extension, origin) -> None:
    w = witness_lift(needs_extension, origin)
    assert w.valuation == 2
    assert w.extension_degree == 2
    assert w.method == "enumerate"
    assert lift_valuation(needs_extension, origin, w.lift) == 2


def test_witness_over_base_field(ctx4, origin) -> None:
    f = make_polynomial(ctx4, 1, {(1,): 1})
    w = witness_lift(f, origin)
    assert w.extension_degree == 1
    assert w.valuation == 1
    assert lift_valuation(f, origin, w.lift) == 1


def test_common_witness(ctx4, needs_extension, origin) -> None:
    unit = make_polynomial(ctx4, 1, {(1,): 1, (0,): 1})
    common = common_witness([needs_extension, unit], origin)
    assert common.valuations == (2, 0)
    assert common.witness.extension_degree == 2


def test_common_witness_needs_polynomials(origin) -> None:
    with pytest.raises(ValueError):
        common_witness([], origin)


def test_lift_must_reduce_to_point(ctx4, origin) -> None:
    f = make_polynomial(ctx4, 1, {(1,): 1})
    with pytest.raises(InputValidationError):
        lift_valuation(f, origin, [ctx4.one()])


def test_variety_membership_thresholds(needs_extension, origin) -> None:
    assert variety_membership(needs_extension, origin, 0)
    assert variety_membership(needs_extension, origin, 2)
    assert not variety_membership(needs_extension, origin, 3)
    with pytest.raises(ValueError):
        variety_membership(needs_extension, origin, -1)


def test_vanishing_expansion_exhausts_precision() -> None:
    ctx = make_context(2, 1, 2)
    f = make_polynomial(ctx, 1, {(1,): 2})
    x = make_point(ctx, [[0]])
    with pytest.raises(PrecisionExhausted):
        generic_valuation(f, x)
    assert variety_membership(f, x, 2)
    lifted = f.with_precision(4)
    assert generic_valuation(lifted, make_point(lifted.ctx, [[0]])) == 2


def test_point_and_polynomial_must_agree(ctx4) -> None:
    f = make_polynomial(ctx4, 1, {(1,): 1})
    with pytest.raises(ContextMismatch):
        generic_valuation(f, make_point(ctx4, [[0], [1]]))
    with pytest.raises(ContextMismatch):
        generic_valuation(f, make_point(make_context(3, 1, 4), [[0]]))


def test_point_digits_must_fit_precision() -> None:
    ctx = make_context(2, 1, 2)
    with pytest.raises(PrecisionExhausted):
        make_point(ctx, [[0, 1, 1]])
    with pytest.raises(ValueError):
        make_point(ctx, [[0], [0, 1]])


# ---------- random instances ----------

def _exponents(n: int, degree: int) -> list:
    return [e for e in itertools.product(range(degree + 1), repeat=n) if sum(e) <= degree]


def _vanishing_instance(rng, ctx, n: int, degree: int):
    """A random polynomial of the given degree with f(x̂) = 0 at a random level-one point."""
    digits = [[int(rng.integers(0, ctx.p))] for _ in range(n)]
    x = make_point(ctx, digits)
    coefficients = {e: int(rng.integers(0, ctx.pN)) for e in _exponents(n, degree)}
    value = make_polynomial(ctx, n, coefficients).evaluate([ctx.coerce(xi) for xi in x.lift()])
    constant = (0,) * n
    coefficients[constant] = (coefficients[constant] - value.coeffs[0]) % ctx.pN
    return make_polynomial(ctx, n, coefficients), digits


def test_generic_valuation_matches_brute_force_at_every_point(rng) -> None:
    ctx = make_context(2, 1, 3)
    embedding = extend_context(ctx, 2)
    ring = embedding.target
    teichmuller_lifts = [teichmuller(a, ring) for a in ring.residue_field().elements()]
    for n in (1, 2):
        points = [make_point(ctx, [[a] for a in digits]) for digits in itertools.product(range(2), repeat=n)]
        for _ in range(20):
            f = make_polynomial(ctx, n, {e: int(rng.choice([0, 1, 2, 4, 6])) for e in _exponents(n, 2)})
            for x in points:
                base = [ring.coerce(xi) for xi in x.embedded(embedding).lift()]
                brute = min(
                    lift_valuation(f, x, [b + 2 * z for b, z in zip(base, zs)], extension_degree=2)
                    for zs in itertools.product(teichmuller_lifts, repeat=n)
                )
                try:
                    expected = generic_valuation(f, x)
                except PrecisionExhausted:
                    expected = ctx.N
                assert brute == expected


def test_random_lifts_never_beat_the_generic_valuation(rng) -> None:
    ctx = make_context(3, 1, 5)
    checked = 0
    for _ in range(100):
        f, digits = _vanishing_instance(rng, ctx, 2, 3)
        x = make_point(ctx, digits)
        try:
            v = generic_valuation(f, x)
        except PrecisionExhausted:
            continue
        assert v >= 1
        lift = [ctx.coerce(xi) + 3 * ctx.element(int(z)) for xi, z in zip(x.lift(), rng.integers(0, ctx.pN, size=2))]
        assert lift_valuation(f, x, lift) >= v
        checked += 1
    assert checked > 0


@pytest.mark.slow
def test_witness_attains_the_generic_valuation(rng) -> None:
    ctx = make_context(3, 1, 5)
    checked = 0
    for _ in range(100):
        f, digits = _vanishing_instance(rng, ctx, 2, 3)
        x = make_point(ctx, digits)
        try:
            v = generic_valuation(f, x)
        except PrecisionExhausted:
            continue
        w = witness_lift(f, x)
        assert w.valuation == v
        assert lift_valuation(f, x, w.lift, w.extension_degree) == v
        checked += 1
    assert checked > 0


def test_generic_valuation_is_stable_under_precision_lift(rng) -> None:
    ctx = make_context(2, 1, 6)
    checked = 0
    for _ in range(30):
        f, digits = _vanishing_instance(rng, ctx, 2, 2)
        try:
            v = generic_valuation(f, make_point(ctx, digits))
        except PrecisionExhausted:
            continue
        lifted = f.with_precision(ctx.N + 2)
        assert generic_valuation(lifted, make_point(lifted.ctx, digits)) == v
        checked += 1
    assert checked > 0
