"""
Λ-lattices: free O-modules of finite rank with a right Λ-action, given by one
representation matrix per basis element of Λ.
"""
import logging
from dataclasses import dataclass
from functools import lru_cache
from typing import Mapping, Optional, Sequence, Union

from app.exceptions import ContextMismatch, MultiplicativityFailure
from app.services.lattices.order import Order
from app.services.linalg import RMatrix, invert

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class Lattice:
    order: Order
    rank: int
    matrices: tuple  # RMatrix per basis index of the order
    name: str = ""

    @property
    def ctx(self):
        return self.order.ctx

    def action(self, index: Union[int, str]) -> RMatrix:
        if isinstance(index, str):
            index = self.order.index_of(index)
        return self.matrices[index]

    def generator_actions(self) -> list:
        return [self.matrices[i] for i in self.order.generator_indices]

    def act(self, vector: Sequence, element: Sequence) -> list:
        """v·λ for a row vector v and an element λ of Λ given by coordinates."""
        ctx = self.ctx
        out = [ctx.zero()] * self.rank
        for k, coefficient in enumerate(element):
            if coefficient.is_zero():
                continue
            row = (RMatrix.from_rows(ctx, [list(vector)], self.rank) @ self.matrices[k]).row(0)
            out = [a + coefficient * b for a, b in zip(out, row)]
        return out

    def with_precision(self, N: int) -> "Lattice":
        if N == self.ctx.N:
            return self
        return _lattice_at_precision(self, N)

    def same_matrices(self, other: "Lattice") -> bool:
        return self.rank == other.rank and all(
            a.entries == b.entries for a, b in zip(self.matrices, other.matrices)
        )

    def describe(self) -> str:
        return self.name or f"lattice of rank {self.rank}"


@lru_cache(maxsize=None)
def _lattice_at_precision(lattice: Lattice, N: int) -> Lattice:
    return Lattice(
        order=lattice.order.with_precision(N),
        rank=lattice.rank,
        matrices=tuple(M.change_precision(N) for M in lattice.matrices),
        name=lattice.name,
    )


def align(*lattices: Lattice) -> list:
    """Bring lattices over the same order to their common (minimal) precision."""
    first = lattices[0]
    for other in lattices[1:]:
        if not first.order.compatible(other.order):
            raise ContextMismatch("Lattices are defined over different orders")
    N = min(L.ctx.N for L in lattices)
    return [L.with_precision(N) for L in lattices]


def _check_multiplicativity(order: Order, matrices: Sequence[RMatrix]):
    ctx = order.ctx
    n = matrices[0].rows
    d = order.dimension
    identity = RMatrix.zero(ctx, n, n)
    for k, e in enumerate(order.identity):
        if not e.is_zero():
            identity = identity + matrices[k].scale(e)
    if identity.entries != RMatrix.identity(ctx, n).entries:
        raise MultiplicativityFailure("Δ(1) is not the identity matrix")
    for i in range(d):
        for j in range(d):
            expected = RMatrix.zero(ctx, n, n)
            for k, c in order.basis_product(i, j):
                expected = expected + matrices[k].scale(c)
            if (matrices[i] @ matrices[j]).entries != expected.entries:
                raise MultiplicativityFailure(
                    f"Δ({order.labels[i]})·Δ({order.labels[j]}) != Δ({order.labels[i]}·{order.labels[j]})"
                )


def make_lattice(
    order: Order,
    matrices: Union[Sequence, Mapping[str, object]],
    name: str = "",
    check: bool = True,
) -> Lattice:
    """
    Validate and build a lattice from one representation matrix per basis element.

    Raises:
        MultiplicativityFailure: Δ is not multiplicative or Δ(1) != I
        ValueError: shapes are inconsistent
    """
    ctx = order.ctx
    if isinstance(matrices, Mapping):
        matrices = [matrices[label] for label in order.labels]
    if len(matrices) != order.dimension:
        raise ValueError(f"Expected {order.dimension} representation matrices, got {len(matrices)}")
    built = []
    for M in matrices:
        if isinstance(M, RMatrix):
            M = M if M.ctx == ctx else M.change_precision(ctx.N)
        else:
            M = RMatrix.from_rows(ctx, M)
        built.append(M)
    n = built[0].rows
    if any(M.rows != n or M.cols != n for M in built):
        raise ValueError("Representation matrices must all be square of the same size")
    if check:
        _check_multiplicativity(order, built)
    logger.debug(f"Lattice of rank {n} validated")
    return Lattice(order=order, rank=n, matrices=tuple(built), name=name)


def regular_lattice(order: Order) -> Lattice:
    """Λ_Λ: Λ acting on itself by right multiplication."""
    matrices = tuple(order.right_multiplication(j) for j in range(order.dimension))
    return Lattice(order=order, rank=order.dimension, matrices=matrices, name="regular")


def direct_sum(*lattices: Lattice) -> Lattice:
    lattices = align(*lattices)
    order = lattices[0].order
    matrices = tuple(
        RMatrix.block_diagonal([L.matrices[k] for L in lattices]) for k in range(order.dimension)
    )
    name = " ⊕ ".join(L.describe() for L in lattices)
    return Lattice(order=order, rank=sum(L.rank for L in lattices), matrices=matrices, name=name)


def change_basis(lattice: Lattice, basis_change: RMatrix, name: Optional[str] = None) -> Lattice:
    """The lattice with basis given by the rows of an invertible matrix S: Δ' = S Δ S^-1."""
    inverse = invert(basis_change)
    matrices = tuple(basis_change @ M @ inverse for M in lattice.matrices)
    return Lattice(order=lattice.order, rank=lattice.rank, matrices=matrices, name=name or lattice.name)


# ---------- Finite quotients ----------

@dataclass(frozen=True, eq=False)
class FiniteModule:
    """L/p^c L, carried as the action matrices at precision c."""
    parent: Lattice
    exponent: int
    matrices: tuple

    @property
    def ctx(self):
        return self.matrices[0].ctx

    @property
    def rank(self) -> int:
        return self.parent.rank


def reduce_mod(lattice: Lattice, c: int) -> FiniteModule:
    if not 1 <= c <= lattice.ctx.N:
        raise ValueError(f"Exponent {c} outside 1..{lattice.ctx.N}")
    return FiniteModule(lattice, c, tuple(M.change_precision(c) for M in lattice.matrices))
