"""
Group algebras O G, permutation lattices O[H\\G] and double cosets H\\G/H.
"""
import logging
from dataclasses import dataclass
from typing import Iterable, Optional, Union

from app.exceptions import NotSubgroup
from app.services.groups.permutations import GroupData
from app.services.lattices import Lattice, Order, make_lattice, make_order
from app.services.linalg import RMatrix
from app.services.witt import ArithmeticContext

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class DoubleCosetPartition:
    group: GroupData
    subgroup: frozenset
    cosets: tuple  # sorted element-index tuples

    @property
    def sizes(self) -> list:
        return [len(c) for c in self.cosets]

    def __len__(self) -> int:
        return len(self.cosets)


def _as_subgroup(G: GroupData, H: Union[frozenset, Iterable]) -> frozenset:
    if isinstance(H, (frozenset, set)):
        members = frozenset(H)
        if not G.is_subgroup(members):
            raise NotSubgroup("Index set is not closed under multiplication")
        return members
    return G.subgroup(list(H))


def group_order(G: GroupData, ctx: ArithmeticContext) -> Order:
    """O G with basis the group elements (identity first) and generators those of G."""
    structure = {
        (i, j): {G.table[i][j]: 1} for i in range(G.order) for j in range(G.order)
    }
    identity = [1] + [0] * (G.order - 1)
    labels = [G.label(i) for i in range(G.order)]
    # group multiplication is associative by construction
    return make_order(
        ctx,
        structure,
        identity,
        labels=labels,
        generator_indices=G.generator_indices,
        group_size=G.order,
        check_associativity=False,
    )


def double_cosets(G: GroupData, H) -> DoubleCosetPartition:
    """
    The partition H\\G/H.

    Raises:
        NotSubgroup: H is not a subgroup of G
    """
    H = _as_subgroup(G, H)
    unseen = set(range(G.order))
    cosets = []
    for g in range(G.order):
        if g not in unseen:
            continue
        coset = {G.table[G.table[h1][g]][h2] for h1 in H for h2 in H}
        unseen -= coset
        cosets.append(tuple(sorted(coset)))
    logger.debug(f"{len(cosets)} double cosets of a subgroup of order {len(H)}")
    return DoubleCosetPartition(G, H, tuple(cosets))


def right_cosets(G: GroupData, H) -> list:
    """Right cosets Hg in order of their smallest element index."""
    H = _as_subgroup(G, H)
    seen, cosets = set(), []
    for g in range(G.order):
        if g in seen:
            continue
        coset = frozenset(G.table[h][g] for h in H)
        seen |= coset
        cosets.append(coset)
    return cosets


def permutation_lattice(G: GroupData, H, ctx: ArithmeticContext, order: Optional[Order] = None) -> Lattice:
    """
    O[H\\G]: basis the right cosets, g acting by Hx ↦ Hxg.

    Raises:
        NotSubgroup: H is not a subgroup of G
    """
    order = order or group_order(G, ctx)
    cosets = right_cosets(G, H)
    where = {g: c for c, coset in enumerate(cosets) for g in coset}
    n = len(cosets)
    one = order.ctx.one()
    matrices = []
    for k in range(G.order):
        grid = [[0] * n for _ in range(n)]
        for c, coset in enumerate(cosets):
            representative = min(coset)
            grid[c][where[G.table[representative][k]]] = one
        matrices.append(RMatrix.from_rows(order.ctx, grid, n))
    return make_lattice(order, matrices, name=f"permutation lattice of rank {n}")


def trivial_lattice(order: Order) -> Lattice:
    """Rank-one lattice on which every group element acts as 1."""
    ctx = order.ctx
    return make_lattice(order, [RMatrix.identity(ctx, 1)] * order.dimension, name="trivial")


def sign_lattice(G: GroupData, order: Order) -> Lattice:
    """Rank-one lattice on which g acts by the sign of the permutation."""
    ctx = order.ctx
    matrices = []
    for perm in G.elements:
        seen, transpositions = set(), 0
        for start in range(len(perm)):
            length, point = 0, start
            while point not in seen:
                seen.add(point)
                point = perm[point]
                length += 1
            transpositions += max(length - 1, 0)
        matrices.append(RMatrix.from_rows(ctx, [[1 if transpositions % 2 == 0 else -1]], 1))
    return make_lattice(order, matrices, name="sign")
