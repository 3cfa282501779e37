"""Truncated Witt rings W_N(F_{p^m}) realized as Galois rings."""
from app.services.witt.context import (
    ArithmeticContext,
    Embedding,
    RingElement,
    context_from_modulus,
    extend_context,
    make_context,
)
from app.services.witt.digits import (
    WittDigits,
    from_witt_digits,
    make_digits,
    residue_element,
    teichmuller,
    to_witt_digits,
)
from app.services.witt.ghost import GhostPolynomials, ghost_oracle, witt_add_digits, witt_mul_digits


def ring_add(a: RingElement, b: RingElement) -> RingElement:
    return a + b


def ring_mul(a: RingElement, b: RingElement) -> RingElement:
    return a * b
