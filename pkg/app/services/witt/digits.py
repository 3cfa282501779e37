"""
Teichmüller lifts and the conversion between ring elements and Witt digits.
to_witt_digits implements ρ_l: x = Σ p^i τ(x_i^{p^{-i}}), digits are the x_i.
"""
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

from app.exceptions import ContextMismatch, PrecisionExhausted
from app.services.witt.context import ArithmeticContext, RingElement


@dataclass(frozen=True)
class WittDigits:
    ctx: ArithmeticContext
    digits: tuple  # residue-field RingElements

    @property
    def l(self) -> int:
        return len(self.digits)

    def encode(self) -> list:
        return [list(d.coeffs) for d in self.digits]


def residue_element(ctx: ArithmeticContext, value) -> RingElement:
    """Coerce ints / coefficient lists / elements into the residue field of ctx."""
    residue = ctx.residue_field()
    if isinstance(value, RingElement):
        if value.ctx.modulus != ctx.modulus or value.ctx.p != ctx.p:
            raise ContextMismatch(f"Residue element from {value.ctx} used with {ctx}")
        return residue.element(value.coeffs)
    return residue.element(value)


def frobenius_power(a: RingElement, i: int) -> RingElement:
    """a^{p^i} in the residue field; negative i gives the inverse Frobenius."""
    m = a.ctx.m
    i %= m
    return a ** (a.ctx.p ** i) if i else a


def teichmuller(a, ctx: ArithmeticContext) -> RingElement:
    """
    The unique lift of a fixed by x -> x^q, at the precision of ctx.

    Args:
        a: residue field element (element of ctx.residue_field(), int or coefficient list)
        ctx: target context
    """
    a = residue_element(ctx, a)
    return _teichmuller(ctx, a.coeffs)


@lru_cache(maxsize=None)
def _teichmuller(ctx: ArithmeticContext, coeffs: tuple) -> RingElement:
    x = ctx.element(coeffs)
    if x.is_zero() or ctx.N == 1:
        return x
    q = ctx.q
    for _ in range(ctx.N):
        y = x ** q
        if y == x:
            break
        x = y
    return x


def to_witt_digits(x: RingElement, l: int) -> WittDigits:
    """ρ_l(x): the first l Witt components of x."""
    ctx = x.ctx
    if l > ctx.N:
        raise PrecisionExhausted(f"Need precision {l} to read {l} Witt digits, have {ctx.N}", ctx.N)
    digits = []
    y = x
    for i in range(l):
        b = y.residue()
        digits.append(frobenius_power(b, i))
        y = (y - teichmuller(b, ctx)).shift_down(1)
    return WittDigits(ctx, tuple(digits))


def from_witt_digits(d: WittDigits) -> RingElement:
    """The zero-tail lift: Witt components beyond index l are zero."""
    ctx = d.ctx
    if d.l > ctx.N:
        raise PrecisionExhausted(f"{d.l} digits do not fit precision {ctx.N}", ctx.N)
    result = ctx.zero()
    for i, digit in enumerate(d.digits):
        if digit.is_zero():
            continue
        result = result + teichmuller(frobenius_power(digit, -i), ctx) * (ctx.p ** i)
    return result


def make_digits(ctx: ArithmeticContext, digits: Sequence) -> WittDigits:
    return WittDigits(ctx, tuple(residue_element(ctx, d) for d in digits))
