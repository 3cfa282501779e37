"""
Witt sum and product polynomials from the ghost identities.
Used as an independent oracle for the Galois-ring arithmetic.
"""
import logging
from dataclasses import dataclass
from functools import lru_cache

from sympy import Poly, expand, symbols, ZZ

from app.services.witt.digits import WittDigits
from app.exceptions import ContextMismatch

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class GhostPolynomials:
    """S_0..S_i and P_0..P_i as integer polynomials in X_0..X_i, Y_0..Y_i."""
    index: int
    p: int
    variables: tuple
    sums: tuple
    products: tuple

    @property
    def sum_polynomial(self) -> Poly:
        return self.sums[self.index]

    @property
    def product_polynomial(self) -> Poly:
        return self.products[self.index]


def ghost_component(values, n: int, p: int):
    """w_n(Z) = Σ_{j≤n} p^j Z_j^{p^{n-j}}."""
    return sum(p ** j * values[j] ** (p ** (n - j)) for j in range(n + 1))


def _solve(target, n: int, p: int, previous: list):
    # S_n = (target - Σ_{j<n} p^j S_j^{p^{n-j}}) / p^n
    rest = sum(p ** j * previous[j] ** (p ** (n - j)) for j in range(n))
    return expand((target - rest) / p ** n)


@lru_cache(maxsize=None)
def ghost_oracle(i: int, p: int) -> GhostPolynomials:
    """
    Solve the ghost identities recursively up to index i.

    Raises:
        ValueError: if i is negative
    """
    if i < 0:
        raise ValueError("Ghost index must be non-negative")
    xs = symbols(f"X0:{i + 1}")
    ys = symbols(f"Y0:{i + 1}")
    gens = xs + ys
    sums, products = [], []
    for n in range(i + 1):
        wx = ghost_component(xs, n, p)
        wy = ghost_component(ys, n, p)
        sums.append(_solve(wx + wy, n, p, sums))
        products.append(_solve(expand(wx * wy), n, p, products))
    logger.debug(f"Ghost polynomials solved up to index {i} for p={p}")
    return GhostPolynomials(
        index=i,
        p=p,
        variables=gens,
        sums=tuple(Poly(s, *gens, domain=ZZ) for s in sums),
        products=tuple(Poly(s, *gens, domain=ZZ) for s in products),
    )


def _evaluate(poly: Poly, values: list):
    residue = values[0].ctx
    p = residue.p
    total = residue.zero()
    for monom, coeff in poly.terms():
        c = int(coeff) % p
        if not c:
            continue
        term = residue.element(c)
        for value, e in zip(values, monom):
            if e:
                term = term * value ** e
        total = total + term
    return total


def _digitwise(a: WittDigits, b: WittDigits, kind: str) -> WittDigits:
    if a.l != b.l or a.ctx != b.ctx:
        raise ContextMismatch("Digit vectors must share context and length")
    oracle = ghost_oracle(a.l - 1, a.ctx.p)
    polys = oracle.sums if kind == "sum" else oracle.products
    digits = []
    for n, poly in enumerate(polys):
        # variables are X0..X_{l-1}, Y0..Y_{l-1}
        values = list(a.digits) + list(b.digits)
        digits.append(_evaluate(poly, values))
    return WittDigits(a.ctx, tuple(digits))


def witt_add_digits(a: WittDigits, b: WittDigits) -> WittDigits:
    """Componentwise Witt addition through S_0..S_{l-1}."""
    return _digitwise(a, b, "sum")


def witt_mul_digits(a: WittDigits, b: WittDigits) -> WittDigits:
    """Componentwise Witt multiplication through P_0..P_{l-1}."""
    return _digitwise(a, b, "product")
