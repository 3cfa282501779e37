"""
Generic valuations at truncated Witt points.

ν_{p,x}(f) is the least valuation of f over all lifts of x. Writing every lift
as x̂ + p^l·Z with x̂ the zero-tail lift, it is the naive valuation of the
polynomial f(x̂ + p^l·Z) in the Z variables. A witness is a Teichmüller point
ẑ on which (f(x̂ + p^l·Z) / p^v) mod p does not vanish.
"""
import itertools
import logging
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from app.constants import ENUMERATION_LIMIT, MAX_EXTENSION_DEGREE, WITNESS_RANDOM_TRIALS
from app.exceptions import ContextMismatch, EnumerationCapExceeded, InputValidationError, PrecisionExhausted
from app.services.genval.polynomial import PolynomialO, WittPoint, naive_valuation
from app.services.witt import extend_context, teichmuller, to_witt_digits

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class WitnessResult:
    z: tuple  # Teichmüller entries ẑ_i over the extension
    lift: tuple  # x̂ + p^l·ẑ
    valuation: int
    extension_degree: int
    points_tried: int
    method: str  # "enumerate" or "random"


@dataclass(frozen=True)
class CommonWitness:
    witness: WitnessResult
    valuations: tuple  # per input polynomial


def _check_point(f: PolynomialO, x: WittPoint):
    if f.n != x.n:
        raise ContextMismatch(f"Polynomial has {f.n} variables, point has {x.n} coordinates")
    if f.ctx.p != x.ctx.p or f.ctx.modulus != x.ctx.modulus:
        raise ContextMismatch("Polynomial and point live over different rings")


def _extend(f: PolynomialO, x: WittPoint, k: int):
    if k == 1:
        return f, x
    embedding = extend_context(f.ctx, k)
    return f.map_coefficients(embedding, embedding.target), x.embedded(embedding)


def lifted_expansion(f: PolynomialO, x: WittPoint) -> PolynomialO:
    """f(x̂_1 + p^l·Z_1, ..., x̂_n + p^l·Z_n) as a polynomial in the Z_i."""
    _check_point(f, x)
    ctx = f.ctx
    shift = ctx.p_power(x.l)
    substitutions = [
        PolynomialO.constant(ctx, f.n, ctx.coerce(xi)) + PolynomialO.variable(ctx, f.n, i) * shift
        for i, xi in enumerate(x.lift())
    ]
    return f.substitute(substitutions)


def generic_valuation(f: PolynomialO, x: WittPoint, extension_degree: int = 1) -> int:
    """
    ν_{p,x}(f), optionally computed after extending the residue field.

    Raises:
        PrecisionExhausted: the value is >= N at the working precision
    """
    _check_point(f, x)
    f, x = _extend(f, x, extension_degree)
    v = naive_valuation(lifted_expansion(f, x))
    if v >= f.ctx.N:
        raise PrecisionExhausted(f"Generic valuation is >= {f.ctx.N}", f.ctx.N)
    return v


def _residue_polynomial(g: PolynomialO, v: int) -> PolynomialO:
    residue = g.ctx.residue_field()
    return g.shift_down(v).map_coefficients(lambda c: residue.element(c.coeffs), residue)


def _points(field, n: int, limit: int, rng, trials: int):
    elements = list(field.elements())
    if field.q ** n <= limit:
        yield "enumerate", None
        for point in itertools.product(elements, repeat=n):
            yield "point", point
        return
    yield "random", None
    for _ in range(trials):
        yield "point", tuple(elements[i] for i in rng.integers(0, len(elements), size=n))


def witness_lift(
    f: PolynomialO,
    x: WittPoint,
    seed: int = 0,
    limit: int = ENUMERATION_LIMIT,
    max_degree: int = MAX_EXTENSION_DEGREE,
) -> WitnessResult:
    """
    A lift of x realizing the generic valuation.

    Residue extensions are tried in increasing degree; within a degree every
    point is enumerated while q^(k·n) <= limit, otherwise points are sampled.

    Raises:
        PrecisionExhausted: generic valuation is >= N
        EnumerationCapExceeded: no witness up to max_degree
    """
    v = generic_valuation(f, x)
    g = lifted_expansion(f, x)
    h = _residue_polynomial(g, v)
    residue = f.ctx.residue_field()
    rng = np.random.default_rng(seed)
    tried = 0
    for k in range(1, max_degree + 1):
        residue_embedding = extend_context(residue, k)
        field = residue_embedding.target
        hk = h.map_coefficients(residue_embedding, field) if k > 1 else h
        method = "enumerate"
        for kind, point in _points(field, f.n, limit, rng, WITNESS_RANDOM_TRIALS):
            if kind != "point":
                method = kind
                continue
            tried += 1
            if hk.evaluate(list(point)).is_zero():
                continue
            fk, xk = _extend(f, x, k)
            ring = fk.ctx
            z = tuple(teichmuller(c, ring) for c in point)
            shift = ring.p_power(xk.l)
            lift = tuple(ring.coerce(xi) + shift * zi for xi, zi in zip(xk.lift(), z))
            achieved = fk.evaluate(list(lift)).valuation()
            if achieved != v:
                raise RuntimeError(f"Witness check failed: valuation {achieved} != {v}")
            logger.debug(f"Witness found in degree {k} after {tried} points")
            return WitnessResult(z, lift, v, k, tried, method)
        logger.debug(f"No witness over the degree-{k} residue extension")
    raise EnumerationCapExceeded(f"No witness found up to residue extension degree {max_degree}")


def variety_membership(f: PolynomialO, x: WittPoint, r: int) -> bool:
    """Whether ν_{p,x}(f) >= r."""
    if r < 0:
        raise ValueError("Threshold must be non-negative")
    if r == 0:
        return True
    try:
        return generic_valuation(f, x) >= r
    except PrecisionExhausted:
        if r <= f.ctx.N:
            return True
        raise


def common_witness(polys: Sequence[PolynomialO], x: WittPoint, seed: int = 0) -> CommonWitness:
    """One lift realizing the generic valuation of every polynomial, found through their product."""
    if not polys:
        raise ValueError("At least one polynomial is required")
    product = polys[0]
    for f in polys[1:]:
        product = product * f
    witness = witness_lift(product, x, seed=seed)
    valuations = []
    for f in polys:
        fk, _ = _extend(f, x, witness.extension_degree)
        achieved = fk.evaluate(list(witness.lift)).valuation()
        expected = generic_valuation(f, x)
        if achieved != expected:
            raise RuntimeError(f"Common witness misses a factor: {achieved} != {expected}")
        valuations.append(achieved)
    return CommonWitness(witness, tuple(valuations))


def lift_valuation(f: PolynomialO, x: WittPoint, lift: Sequence, extension_degree: Optional[int] = None) -> int:
    """
    ν_p(f(ŷ)) for an explicit lift ŷ of x.

    Raises:
        InputValidationError: ŷ does not reduce to x
    """
    _check_point(f, x)
    lift = list(lift)
    degree = extension_degree or (lift[0].ctx.m // f.ctx.m if lift else 1)
    fk, xk = _extend(f, x, degree)
    for i, (y, d) in enumerate(zip(lift, xk.coordinates)):
        if to_witt_digits(y, xk.l).digits != d.digits:
            raise InputValidationError(f"Coordinate {i} of the lift does not reduce to the point")
    return fk.evaluate(lift).valuation()
