"""
O-orders given by structure constants b_i·b_j = Σ_k c[i][j][k]·b_k.
Constants are stored sparsely: products[i*d + j] lists the nonzero (k, c_ijk).
"""
import logging
import warnings
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Optional, Sequence

from app.exceptions import AssociativityFailure, IdentityFailure, SeparabilityUnverified
from app.services.linalg import RMatrix, det_valuation
from app.services.witt.context import ArithmeticContext, RingElement

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class Order:
    ctx: ArithmeticContext
    dimension: int
    products: tuple
    identity: tuple
    labels: tuple
    generator_indices: tuple
    group_size: Optional[int] = None
    separability_verified: bool = field(default=True, compare=False)

    # ---------- Multiplication ----------

    def basis_product(self, i: int, j: int) -> tuple:
        return self.products[i * self.dimension + j]

    def constant(self, i: int, j: int, k: int) -> RingElement:
        for kk, c in self.basis_product(i, j):
            if kk == k:
                return c
        return self.ctx.zero()

    def multiply(self, a: Sequence[RingElement], b: Sequence[RingElement]) -> list:
        """Product of two elements given by coordinates."""
        out = [self.ctx.zero()] * self.dimension
        for i, ai in enumerate(a):
            if ai.is_zero():
                continue
            for j, bj in enumerate(b):
                if bj.is_zero():
                    continue
                coeff = ai * bj
                for k, c in self.basis_product(i, j):
                    out[k] = out[k] + coeff * c
        return out

    def basis_vector(self, i: int) -> list:
        zero, one = self.ctx.zero(), self.ctx.one()
        return [one if k == i else zero for k in range(self.dimension)]

    def structure_constants(self) -> list:
        """Dense d×d×d constants."""
        d = self.dimension
        dense = [[[self.ctx.zero()] * d for _ in range(d)] for _ in range(d)]
        for i in range(d):
            for j in range(d):
                for k, c in self.basis_product(i, j):
                    dense[i][j][k] = c
        return dense

    def identity_index(self) -> Optional[int]:
        """Index of the basis vector equal to 1, when there is one."""
        nonzero = [k for k, e in enumerate(self.identity) if not e.is_zero()]
        if len(nonzero) == 1 and self.identity[nonzero[0]] == self.ctx.one():
            return nonzero[0]
        return None

    def index_of(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise KeyError(f"Unknown basis label {label!r}")

    # ---------- Matrices of multiplication ----------

    def right_multiplication(self, j: int) -> RMatrix:
        """Matrix of x ↦ x·b_j on row vectors (row t holds b_t·b_j)."""
        rows = [self.multiply(self.basis_vector(t), self.basis_vector(j)) for t in range(self.dimension)]
        return RMatrix.from_rows(self.ctx, rows, self.dimension)

    def left_multiplication(self, i: int) -> RMatrix:
        """Matrix of x ↦ b_i·x on row vectors (row t holds b_i·b_t)."""
        rows = [self.multiply(self.basis_vector(i), self.basis_vector(t)) for t in range(self.dimension)]
        return RMatrix.from_rows(self.ctx, rows, self.dimension)

    def trace_form(self) -> RMatrix:
        d = self.dimension
        traces = []
        for k in range(d):
            total = self.ctx.zero()
            for l in range(d):
                total = total + self.constant(k, l, l)
            traces.append(total)
        rows = []
        for i in range(d):
            row = []
            for j in range(d):
                value = self.ctx.zero()
                for k, c in self.basis_product(i, j):
                    value = value + c * traces[k]
                row.append(value)
            rows.append(row)
        return RMatrix.from_rows(self.ctx, rows, d)

    def with_precision(self, N: int) -> "Order":
        if N == self.ctx.N:
            return self
        return _order_at_precision(self, N)

    def compatible(self, other: "Order") -> bool:
        return (
            self is other
            or (
                self.dimension == other.dimension
                and self.labels == other.labels
                and self.ctx.p == other.ctx.p
                and self.ctx.modulus == other.ctx.modulus
            )
        )


@lru_cache(maxsize=None)
def _order_at_precision(order: Order, N: int) -> Order:
    ctx = order.ctx.with_precision(N)
    products = tuple(
        tuple((k, c.to_precision(N)) for k, c in terms if not c.to_precision(N).is_zero())
        for terms in order.products
    )
    return Order(
        ctx=ctx,
        dimension=order.dimension,
        products=products,
        identity=tuple(e.to_precision(N) for e in order.identity),
        labels=order.labels,
        generator_indices=order.generator_indices,
        group_size=order.group_size,
        separability_verified=order.separability_verified,
    )


# ---------- Validation ----------

def _check_identity(order: Order):
    e = list(order.identity)
    for j in range(order.dimension):
        b = order.basis_vector(j)
        if order.multiply(e, b) != b or order.multiply(b, e) != b:
            raise IdentityFailure(f"Identity does not act as a two-sided unit on basis element {order.labels[j]}")


def _check_associativity(order: Order):
    d = order.dimension
    for i in range(d):
        bi = order.basis_vector(i)
        for j in range(d):
            bij = order.multiply(bi, order.basis_vector(j))
            for l in range(d):
                bl = order.basis_vector(l)
                left = order.multiply(bij, bl)
                right = order.multiply(bi, order.multiply(order.basis_vector(j), bl))
                if left != right:
                    raise AssociativityFailure(
                        f"(b{i}·b{j})·b{l} != b{i}·(b{j}·b{l}) "
                        f"({order.labels[i]}, {order.labels[j]}, {order.labels[l]})"
                    )


def _check_separability(order: Order) -> bool:
    v = det_valuation(order.trace_form())
    if v >= order.ctx.N:
        message = (
            f"Trace form determinant has valuation >= {order.ctx.N}; "
            "separability could not be verified at this precision"
        )
        logger.warning(message)
        warnings.warn(message, SeparabilityUnverified, stacklevel=3)
        return False
    logger.debug(f"Trace form determinant valuation {v}")
    return True


def make_order(
    ctx: ArithmeticContext,
    structure_constants,
    identity: Sequence,
    labels: Optional[Sequence[str]] = None,
    generator_indices: Optional[Sequence[int]] = None,
    group_size: Optional[int] = None,
    check_associativity: bool = True,
) -> Order:
    """
    Validate and build an order.

    Args:
        ctx: arithmetic context
        structure_constants: dense d×d×d values, or a dict {(i, j): {k: value}}
        identity: coordinates of 1
        labels: basis labels (default b0, b1, ...)
        generator_indices: basis indices generating the order as an algebra
        group_size: |G| when the order is a group algebra
        check_associativity: skip only for orders derived from validated ones

    Raises:
        AssociativityFailure, IdentityFailure, ValueError
    """
    if isinstance(structure_constants, dict):
        d = len(identity)
        products = []
        for i in range(d):
            for j in range(d):
                terms = structure_constants.get((i, j), {})
                products.append(tuple(
                    (k, ctx.coerce(v)) for k, v in sorted(terms.items()) if not ctx.coerce(v).is_zero()
                ))
    else:
        d = len(structure_constants)
        products = []
        for i in range(d):
            if len(structure_constants[i]) != d:
                raise ValueError("Structure constants must have shape d×d×d")
            for j in range(d):
                row = structure_constants[i][j]
                if len(row) != d:
                    raise ValueError("Structure constants must have shape d×d×d")
                values = [ctx.coerce(v) for v in row]
                products.append(tuple((k, v) for k, v in enumerate(values) if not v.is_zero()))
    if len(identity) != d:
        raise ValueError(f"Identity has {len(identity)} coordinates, expected {d}")
    labels = tuple(labels) if labels is not None else tuple(f"b{i}" for i in range(d))
    if len(labels) != d:
        raise ValueError("One label per basis element is required")
    generators = tuple(generator_indices) if generator_indices is not None else tuple(range(d))
    order = Order(
        ctx=ctx,
        dimension=d,
        products=tuple(products),
        identity=tuple(ctx.coerce(v) for v in identity),
        labels=labels,
        generator_indices=generators,
        group_size=group_size,
    )
    _check_identity(order)
    if check_associativity:
        _check_associativity(order)
    verified = _check_separability(order)
    if not verified:
        object.__setattr__(order, "separability_verified", False)
    logger.info(f"Order of dimension {d} validated over {ctx}")
    return order


def scalar_order(ctx: ArithmeticContext) -> Order:
    """Λ = O itself."""
    return make_order(ctx, [[[1]]], [1], labels=["1"])
