"""
Galois ring arithmetic R_N = Z[x]/(p^N, f) ≅ W_N(F_{p^m}).
Elements are coefficient vectors of length m; contexts fix (p, m, N, f).
"""
import itertools
import logging
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence, Union

from sympy import Poly, symbols, isprime

from app.exceptions import ContextMismatch, EnumerationCapExceeded, NotPrime, NotUnit

logger = logging.getLogger(__name__)

_x = symbols("x")


@dataclass(frozen=True)
class ArithmeticContext:
    """The triple (p, m, N) together with the defining modulus (low-to-high, monic)."""
    p: int
    m: int
    N: int
    modulus: tuple

    @property
    def q(self) -> int:
        return self.p ** self.m

    @property
    def pN(self) -> int:
        return self.p ** self.N

    # ---------- Construction helpers ----------

    def element(self, coeffs: Union[int, Sequence[int]]) -> "RingElement":
        if isinstance(coeffs, int):
            coeffs = [coeffs]
        coeffs = list(coeffs)
        if len(coeffs) > self.m:
            return RingElement(self, self._reduce(coeffs))
        coeffs = coeffs + [0] * (self.m - len(coeffs))
        pN = self.pN
        return RingElement(self, tuple(c % pN for c in coeffs))

    def coerce(self, value) -> "RingElement":
        """Accept ints, coefficient sequences, or elements of a same-modulus context."""
        if isinstance(value, RingElement):
            if value.ctx is self or value.ctx == self:
                return value
            if value.ctx.p == self.p and value.ctx.modulus == self.modulus:
                return self.element(value.coeffs)
            raise ContextMismatch(f"Cannot coerce element of {value.ctx} into {self}")
        return self.element(value)

    def zero(self) -> "RingElement":
        return RingElement(self, (0,) * self.m)

    def one(self) -> "RingElement":
        return self.element(1)

    def p_power(self, k: int) -> "RingElement":
        return self.element(self.p ** k if k < self.N else 0)

    def with_precision(self, N: int) -> "ArithmeticContext":
        if N == self.N:
            return self
        return _context(self.p, self.m, N, self.modulus)

    def residue_field(self) -> "ArithmeticContext":
        """F_q as the precision-1 context with the same modulus."""
        return self.with_precision(1)

    def elements(self) -> Iterable["RingElement"]:
        """All q^N elements, in lexicographic coefficient order."""
        for coeffs in itertools.product(range(self.pN), repeat=self.m):
            yield RingElement(self, coeffs)

    # ---------- Coefficient arithmetic ----------

    def _reduce(self, coeffs: list) -> tuple:
        m, pN, f = self.m, self.pN, self.modulus
        coeffs = list(coeffs)
        for k in range(len(coeffs) - 1, m - 1, -1):
            c = coeffs[k]
            if c:
                base = k - m
                for t in range(m):
                    if f[t]:
                        coeffs[base + t] -= c * f[t]
            coeffs[k] = 0
        return tuple(c % pN for c in coeffs[:m]) + (0,) * max(0, m - len(coeffs))

    def _mul(self, a: tuple, b: tuple) -> tuple:
        if self.m == 1:
            return ((a[0] * b[0]) % self.pN,)
        product = [0] * (2 * self.m - 1)
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    product[i + j] += ai * bj
        return self._reduce(product)

    def __repr__(self) -> str:
        return f"ArithmeticContext(p={self.p}, m={self.m}, N={self.N}, modulus={list(self.modulus)})"


@dataclass(frozen=True, slots=True)
class RingElement:
    ctx: ArithmeticContext
    coeffs: tuple

    def _check(self, other) -> "RingElement":
        if isinstance(other, int):
            return self.ctx.element(other)
        if other.ctx is not self.ctx and other.ctx != self.ctx:
            raise ContextMismatch(f"{self.ctx} vs {other.ctx}")
        return other

    def __add__(self, other) -> "RingElement":
        other = self._check(other)
        pN = self.ctx.pN
        return RingElement(self.ctx, tuple((a + b) % pN for a, b in zip(self.coeffs, other.coeffs)))

    __radd__ = __add__

    def __sub__(self, other) -> "RingElement":
        other = self._check(other)
        pN = self.ctx.pN
        return RingElement(self.ctx, tuple((a - b) % pN for a, b in zip(self.coeffs, other.coeffs)))

    def __rsub__(self, other) -> "RingElement":
        return self._check(other) - self

    def __neg__(self) -> "RingElement":
        pN = self.ctx.pN
        return RingElement(self.ctx, tuple((-a) % pN for a in self.coeffs))

    def __mul__(self, other) -> "RingElement":
        if isinstance(other, int):
            pN = self.ctx.pN
            return RingElement(self.ctx, tuple((a * other) % pN for a in self.coeffs))
        other = self._check(other)
        return RingElement(self.ctx, self.ctx._mul(self.coeffs, other.coeffs))

    __rmul__ = __mul__

    def __pow__(self, exponent: int) -> "RingElement":
        if exponent < 0:
            return self.inverse() ** (-exponent)
        result = self.ctx.one()
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            base = base * base
            exponent >>= 1
        return result

    def __bool__(self) -> bool:
        return any(self.coeffs)

    def __repr__(self) -> str:
        if self.ctx.m == 1:
            return f"{self.coeffs[0]}"
        return f"{list(self.coeffs)}"

    # ---------- Valuation and units ----------

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def valuation(self) -> int:
        """ν_p of the element, N for zero at this precision."""
        p, N = self.ctx.p, self.ctx.N
        best = N
        for c in self.coeffs:
            if c:
                v = 0
                while c % p == 0:
                    c //= p
                    v += 1
                if v < best:
                    best = v
                    if best == 0:
                        break
        return best

    def is_unit(self) -> bool:
        return self.valuation() == 0

    def inverse(self) -> "RingElement":
        if not self.is_unit():
            raise NotUnit(f"{self!r} has positive valuation")
        return _unit_inverse(self)

    def shift_down(self, k: int) -> "RingElement":
        """Exact division by p^k; the top k digits of the result are zero."""
        if k == 0:
            return self
        pk = self.ctx.p ** k
        if any(c % pk for c in self.coeffs):
            raise ValueError(f"{self!r} is not divisible by p^{k}")
        return RingElement(self.ctx, tuple(c // pk for c in self.coeffs))

    def reduce_mod_p_power(self, k: int) -> "RingElement":
        """Canonical representative of the class modulo p^k (coefficients in [0, p^k))."""
        if k >= self.ctx.N:
            return self
        pk = self.ctx.p ** k
        return RingElement(self.ctx, tuple(c % pk for c in self.coeffs))

    def residue(self) -> "RingElement":
        return self.ctx.residue_field().element(self.coeffs)

    def to_precision(self, N: int) -> "RingElement":
        """
        Reduction (N smaller) or canonical lift (N larger). The lift takes each
        coefficient's balanced representative in (-p^N/2, p^N/2], so small
        signed integers such as -1 survive a change of precision.
        """
        if N == self.ctx.N:
            return self
        pN = self.ctx.pN
        half = pN // 2
        return self.ctx.with_precision(N).element([c - pN if c > half else c for c in self.coeffs])


# ---------- Context construction ----------

def _is_irreducible_mod_p(modulus: Sequence[int], p: int) -> bool:
    poly = Poly(list(reversed(modulus)), _x, modulus=p)
    return poly.degree() == len(modulus) - 1 and poly.is_irreducible


@lru_cache(maxsize=None)
def _context(p: int, m: int, N: int, modulus: tuple) -> ArithmeticContext:
    return ArithmeticContext(p=p, m=m, N=N, modulus=modulus)


@lru_cache(maxsize=None)
def smallest_irreducible(p: int, m: int) -> tuple:
    """Lexicographically smallest monic irreducible of degree m over F_p (low-to-high tail order)."""
    for tail in itertools.product(range(p), repeat=m):
        modulus = tuple(tail) + (1,)
        if _is_irreducible_mod_p(modulus, p):
            return modulus
    raise RuntimeError(f"No irreducible polynomial of degree {m} over F_{p}")


def make_context(p: int, m: int = 1, N: int = 1) -> ArithmeticContext:
    """
    Build the arithmetic context for R_N ≅ W_N(F_{p^m}).

    Args:
        p: prime
        m: residue field degree
        N: working precision

    Raises:
        NotPrime: if p is not prime
        ValueError: if m or N is not positive
    """
    if not isprime(p):
        raise NotPrime(f"{p} is not prime")
    if m < 1 or N < 1:
        raise ValueError(f"Residue degree and precision must be positive (m={m}, N={N})")
    ctx = _context(p, m, N, smallest_irreducible(p, m))
    logger.debug(f"Context built: {ctx}")
    return ctx


def context_from_modulus(p: int, N: int, modulus: Sequence[int]) -> ArithmeticContext:
    """Context for a user-supplied monic modulus (validated for irreducibility)."""
    if not isprime(p):
        raise NotPrime(f"{p} is not prime")
    modulus = tuple(int(c) % p for c in modulus)
    if not modulus or modulus[-1] != 1:
        raise ValueError("Modulus must be monic (low-to-high coefficients, last entry 1)")
    if not _is_irreducible_mod_p(modulus, p):
        raise ValueError(f"Modulus {list(modulus)} is not irreducible mod {p}")
    return _context(p, len(modulus) - 1, N, modulus)


@lru_cache(maxsize=4096)
def _unit_inverse(u: RingElement) -> RingElement:
    ctx = u.ctx
    # residue inverse via u^(q-2), then Newton: y <- y(2 - uy)
    y = u.residue() ** (ctx.q - 2) if ctx.q > 2 else u.residue()
    y = ctx.element(y.coeffs)
    two = ctx.element(2)
    precision = 1
    while precision < ctx.N:
        y = y * (two - u * y)
        precision *= 2
    return y


# ---------- Residue extensions ----------

@dataclass(frozen=True)
class Embedding:
    """Ring homomorphism R_N(m) → R_N(mk) sending x to a root of the source modulus."""
    source: ArithmeticContext
    target: ArithmeticContext
    root: RingElement

    @property
    def degree(self) -> int:
        return self.target.m // self.source.m

    def __call__(self, value: RingElement) -> RingElement:
        if value.ctx.modulus != self.source.modulus or value.ctx.p != self.source.p:
            raise ContextMismatch(f"Embedding source is {self.source}, got {value.ctx}")
        target = self.target.with_precision(value.ctx.N)
        if self.degree == 1:
            return target.element(value.coeffs)
        root = self.root.to_precision(value.ctx.N)
        result = target.zero()
        power = target.one()
        for c in value.coeffs:
            if c:
                result = result + power * c
            power = power * root
        return result


def _evaluate_modulus(modulus: Sequence[int], y: RingElement) -> RingElement:
    result = y.ctx.zero()
    for c in reversed(modulus):
        result = result * y + c
    return result


def _derivative_at(modulus: Sequence[int], y: RingElement) -> RingElement:
    result = y.ctx.zero()
    for k in range(len(modulus) - 1, 0, -1):
        result = result * y + modulus[k] * k
    return result


@lru_cache(maxsize=None)
def extend_context(ctx: ArithmeticContext, k: int, cap: int = 2 ** 20) -> Embedding:
    """
    Degree-k unramified extension of ctx together with the embedding.

    The residue root of the source modulus is found by enumeration in F_{q^k}
    and Hensel-lifted to precision N.
    """
    target = make_context(ctx.p, ctx.m * k, ctx.N)
    if k == 1:
        return Embedding(ctx, ctx, ctx.element([0, 1]) if ctx.m > 1 else ctx.zero())
    if target.q > cap:
        raise EnumerationCapExceeded(f"Residue field of size {target.q} exceeds root-search cap {cap}")
    residue = target.residue_field()
    root = None
    for candidate in residue.elements():
        if _evaluate_modulus(ctx.modulus, candidate).is_zero():
            root = candidate
            break
    if root is None:
        raise RuntimeError(f"Modulus {list(ctx.modulus)} has no root in degree {k} extension")
    y = target.element(root.coeffs)
    for _ in range(ctx.N):
        fy = _evaluate_modulus(ctx.modulus, y)
        if fy.is_zero():
            break
        y = y - fy * _derivative_at(ctx.modulus, y).inverse()
    logger.debug(f"Embedded degree-{ctx.m} ring into degree-{target.m} ring (root {root!r})")
    return Embedding(ctx, target, y)
