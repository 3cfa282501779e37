"""
Polynomials over R_N in n variables and points of A^{n·l}(k) given by Witt digits.
"""
from dataclasses import dataclass
from typing import Callable, Mapping, Optional, Sequence

from app.exceptions import ContextMismatch, PrecisionExhausted
from app.services.witt import ArithmeticContext, RingElement, WittDigits, from_witt_digits, make_digits


@dataclass(frozen=True)
class PolynomialO:
    ctx: ArithmeticContext
    n: int
    terms: tuple  # sorted (exponents, coefficient) pairs, coefficients nonzero

    # ---------- Construction ----------

    @classmethod
    def from_dict(cls, ctx: ArithmeticContext, n: int, mapping: Mapping) -> "PolynomialO":
        collected = {}
        for exponents, value in mapping.items():
            exponents = tuple(int(e) for e in exponents)
            if len(exponents) != n or any(e < 0 for e in exponents):
                raise ValueError(f"Exponent vector {exponents} does not fit {n} variables")
            coefficient = ctx.coerce(value)
            collected[exponents] = collected.get(exponents, ctx.zero()) + coefficient
        terms = tuple(sorted((e, c) for e, c in collected.items() if not c.is_zero()))
        return cls(ctx, n, terms)

    @classmethod
    def constant(cls, ctx: ArithmeticContext, n: int, value) -> "PolynomialO":
        return cls.from_dict(ctx, n, {(0,) * n: value})

    @classmethod
    def variable(cls, ctx: ArithmeticContext, n: int, i: int) -> "PolynomialO":
        exponents = tuple(1 if k == i else 0 for k in range(n))
        return cls.from_dict(ctx, n, {exponents: 1})

    # ---------- Inspection ----------

    def as_dict(self) -> dict:
        return dict(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    @property
    def degree(self) -> int:
        return max((sum(e) for e, _ in self.terms), default=0)

    def coefficients(self) -> list:
        return [c for _, c in self.terms]

    def encode(self) -> dict:
        return {
            "n": self.n,
            "terms": [{"exponents": list(e), "coefficient": list(c.coeffs)} for e, c in self.terms],
        }

    # ---------- Arithmetic ----------

    def _check(self, other: "PolynomialO"):
        if other.n != self.n or other.ctx != self.ctx:
            raise ContextMismatch("Polynomials live in different rings")

    def __add__(self, other) -> "PolynomialO":
        if not isinstance(other, PolynomialO):
            other = PolynomialO.constant(self.ctx, self.n, other)
        self._check(other)
        merged = self.as_dict()
        for e, c in other.terms:
            merged[e] = merged.get(e, self.ctx.zero()) + c
        return PolynomialO.from_dict(self.ctx, self.n, merged)

    __radd__ = __add__

    def __neg__(self) -> "PolynomialO":
        return PolynomialO(self.ctx, self.n, tuple((e, -c) for e, c in self.terms))

    def __sub__(self, other) -> "PolynomialO":
        if not isinstance(other, PolynomialO):
            other = PolynomialO.constant(self.ctx, self.n, other)
        return self + (-other)

    def __mul__(self, other) -> "PolynomialO":
        if not isinstance(other, PolynomialO):
            factor = self.ctx.coerce(other)
            return PolynomialO.from_dict(self.ctx, self.n, {e: c * factor for e, c in self.terms})
        self._check(other)
        product = {}
        for e1, c1 in self.terms:
            for e2, c2 in other.terms:
                e = tuple(a + b for a, b in zip(e1, e2))
                product[e] = product.get(e, self.ctx.zero()) + c1 * c2
        return PolynomialO.from_dict(self.ctx, self.n, product)

    __rmul__ = __mul__

    def __pow__(self, exponent: int) -> "PolynomialO":
        if exponent < 0:
            raise ValueError("Negative powers of polynomials are not defined")
        result = PolynomialO.constant(self.ctx, self.n, 1)
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            base = base * base
            exponent >>= 1
        return result

    # ---------- Evaluation and change of ring ----------

    def evaluate(self, values: Sequence[RingElement]) -> RingElement:
        if len(values) != self.n:
            raise ValueError(f"Expected {self.n} values, got {len(values)}")
        ctx = values[0].ctx if values else self.ctx
        total = ctx.zero()
        for exponents, c in self.terms:
            term = ctx.coerce(c)
            for v, e in zip(values, exponents):
                if e:
                    term = term * v ** e
            total = total + term
        return total

    def substitute(self, polys: Sequence["PolynomialO"]) -> "PolynomialO":
        """f(g_1, ..., g_n) for polynomials g_i in a common ring."""
        if len(polys) != self.n:
            raise ValueError(f"Expected {self.n} substitutions, got {len(polys)}")
        target = polys[0]
        powers = [{0: PolynomialO.constant(target.ctx, target.n, 1)} for _ in polys]

        def power(i: int, e: int) -> PolynomialO:
            if e not in powers[i]:
                powers[i][e] = power(i, e - 1) * polys[i]
            return powers[i][e]

        result = PolynomialO.from_dict(target.ctx, target.n, {})
        for exponents, c in self.terms:
            term = PolynomialO.constant(target.ctx, target.n, target.ctx.coerce(c))
            for i, e in enumerate(exponents):
                if e:
                    term = term * power(i, e)
            result = result + term
        return result

    def map_coefficients(self, fn: Callable, ctx: ArithmeticContext) -> "PolynomialO":
        return PolynomialO.from_dict(ctx, self.n, {e: fn(c) for e, c in self.terms})

    def with_precision(self, N: int) -> "PolynomialO":
        ctx = self.ctx.with_precision(N)
        return self.map_coefficients(lambda c: c.to_precision(N), ctx)

    def shift_down(self, k: int) -> "PolynomialO":
        """Exact division of every coefficient by p^k."""
        return PolynomialO(self.ctx, self.n, tuple((e, c.shift_down(k)) for e, c in self.terms))


def naive_valuation(f: PolynomialO) -> int:
    """Least coefficient valuation; N stands for '>= N' (the zero polynomial)."""
    return min((c.valuation() for _, c in f.terms), default=f.ctx.N)


def make_polynomial(ctx: ArithmeticContext, n: int, terms: Mapping) -> PolynomialO:
    return PolynomialO.from_dict(ctx, n, terms)


@dataclass(frozen=True)
class WittPoint:
    ctx: ArithmeticContext
    coordinates: tuple  # WittDigits per variable

    @property
    def n(self) -> int:
        return len(self.coordinates)

    @property
    def l(self) -> int:
        return self.coordinates[0].l if self.coordinates else 0

    def lift(self) -> tuple:
        """The zero-tail lift x̂."""
        return tuple(from_witt_digits(d) for d in self.coordinates)

    def embedded(self, embedding) -> "WittPoint":
        """The same point seen over a residue extension."""
        target = embedding.target
        coordinates = tuple(
            WittDigits(target, tuple(embedding(digit) for digit in d.digits)) for d in self.coordinates
        )
        return WittPoint(target, coordinates)

    def encode(self) -> dict:
        return {"n": self.n, "l": self.l, "digits": [d.encode() for d in self.coordinates]}


def make_point(ctx: ArithmeticContext, digits: Sequence[Sequence], l: Optional[int] = None) -> WittPoint:
    """
    A Witt point from n lists of l residue digits.

    Raises:
        PrecisionExhausted: l > N
        ValueError: coordinates of different lengths
    """
    coordinates = tuple(make_digits(ctx, d) for d in digits)
    lengths = {c.l for c in coordinates}
    if len(lengths) > 1:
        raise ValueError("Every coordinate needs the same number of Witt digits")
    found = lengths.pop() if lengths else 0
    if l is not None and found != l:
        raise ValueError(f"Point has {found} digits per coordinate, expected {l}")
    if found > ctx.N:
        raise PrecisionExhausted(f"{found} Witt digits do not fit precision {ctx.N}", ctx.N)
    return WittPoint(ctx, coordinates)
