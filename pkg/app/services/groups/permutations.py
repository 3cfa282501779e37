"""
Finite permutation groups in cycle notation.

Permutations are 0-based image tuples acting on the right: the product a·b
applies a first, so (a·b)[i] = b[a[i]].
"""
import logging
import re
from collections import deque
from dataclasses import dataclass
from typing import Iterable, Sequence, Union

from app.constants import GROUP_ORDER_CAP
from app.exceptions import GroupTooLarge, InputValidationError, NotSubgroup

logger = logging.getLogger(__name__)

_CYCLE = re.compile(r"\(([^()]*)\)")

CATALOG = {
    "C1": ["()"],
    "C2": ["(1 2)"],
    "C3": ["(1 2 3)"],
    "C4": ["(1 2 3 4)"],
    "C2xC2": ["(1 2)(3 4)", "(1 3)(2 4)"],
    "S3": ["(1 2)", "(1 2 3)"],
    "D4": ["(1 2 3 4)", "(1 3)"],
}
CATALOG_ALIASES = {"V4": "C2xC2", "D8": "D4"}


# ---------- Parsing ----------

def parse_permutation(text: str, degree: int = 0) -> tuple:
    """'(1 2)(3 4)' or '(1,2)(3,4)' → 0-based images; '()' is the identity."""
    text = text.strip()
    if not text or _CYCLE.sub("", text).strip():
        raise InputValidationError(f"Malformed permutation {text!r}")
    cycles = []
    for body in _CYCLE.findall(text):
        tokens = [t for t in re.split(r"[\s,]+", body.strip()) if t]
        try:
            points = [int(t) for t in tokens]
        except ValueError:
            raise InputValidationError(f"Non-integer point in cycle ({body})")
        if any(pt < 1 for pt in points):
            raise InputValidationError(f"Points are numbered from 1 in ({body})")
        cycles.append(points)
    seen = [pt for cycle in cycles for pt in cycle]
    if len(seen) != len(set(seen)):
        raise InputValidationError(f"Cycles of {text!r} are not disjoint")
    size = max([degree] + seen)
    images = list(range(size))
    for cycle in cycles:
        for a, b in zip(cycle, cycle[1:] + cycle[:1]):
            images[a - 1] = b - 1
    return tuple(images)


def parse_generators(text: str) -> list:
    """Split '(1 2),(1 2 3)' at commas outside parentheses."""
    parts, depth, current = [], 0, []
    for ch in text:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
            if depth < 0:
                raise InputValidationError(f"Unbalanced parentheses in {text!r}")
        if (ch == "," or ch == ";") and depth == 0:
            parts.append("".join(current))
            current = []
        else:
            current.append(ch)
    if depth:
        raise InputValidationError(f"Unbalanced parentheses in {text!r}")
    parts.append("".join(current))
    return [p.strip() for p in parts if p.strip()]


def format_permutation(perm: Sequence[int]) -> str:
    seen, cycles = set(), []
    for start in range(len(perm)):
        if start in seen or perm[start] == start:
            continue
        cycle, point = [], start
        while point not in seen:
            seen.add(point)
            cycle.append(str(point + 1))
            point = perm[point]
        cycles.append("(" + " ".join(cycle) + ")")
    return "".join(cycles) or "()"


def compose(a: Sequence[int], b: Sequence[int]) -> tuple:
    return tuple(b[i] for i in a)


def _pad(perm: Sequence[int], degree: int) -> tuple:
    return tuple(perm) + tuple(range(len(perm), degree))


# ---------- Groups ----------

@dataclass(frozen=True)
class GroupData:
    degree: int
    generators: tuple
    elements: tuple  # elements[0] is the identity
    table: tuple  # table[i][j] = index of elements[i]·elements[j]

    @property
    def order(self) -> int:
        return len(self.elements)

    def index(self, perm: Sequence[int]) -> int:
        try:
            return self._positions()[_pad(perm, self.degree)]
        except KeyError:
            raise NotSubgroup(f"{format_permutation(perm)} is not an element of the group")

    def _positions(self) -> dict:
        cached = self.__dict__.get("_position_cache")
        if cached is None:
            cached = {perm: i for i, perm in enumerate(self.elements)}
            object.__setattr__(self, "_position_cache", cached)
        return cached

    def multiply(self, i: int, j: int) -> int:
        return self.table[i][j]

    def inverse(self, i: int) -> int:
        return self.table[i].index(0)

    @property
    def generator_indices(self) -> tuple:
        indices = sorted({self.index(g) for g in self.generators} - {0})
        return tuple(indices) or (0,)

    def label(self, i: int) -> str:
        return format_permutation(self.elements[i])

    def closure(self, indices: Iterable[int]) -> frozenset:
        """Subgroup generated by the given element indices."""
        members = {0}
        frontier = deque([0])
        gens = list(indices)
        while frontier:
            current = frontier.popleft()
            for g in gens:
                product = self.table[current][g]
                if product not in members:
                    members.add(product)
                    frontier.append(product)
        return frozenset(members)

    def subgroup(self, generators: Iterable[Union[str, Sequence[int]]]) -> frozenset:
        """
        Subgroup generated by permutations (strings or image tuples).

        Raises:
            NotSubgroup: a generator is not in the group
        """
        indices = []
        for g in generators:
            perm = parse_permutation(g, self.degree) if isinstance(g, str) else tuple(g)
            if len(perm) > self.degree:
                raise NotSubgroup(f"{format_permutation(perm)} moves points outside the group's degree")
            indices.append(self.index(perm))
        return self.closure(indices)

    def is_subgroup(self, members: Iterable[int]) -> bool:
        members = frozenset(members)
        return 0 in members and all(self.table[a][b] in members for a in members for b in members)

    def all_subgroups(self) -> list:
        """Every subgroup, as index sets sorted by (size, members)."""
        cyclic = {self.closure([g]) for g in range(self.order)}
        found = set(cyclic)
        frontier = set(cyclic)
        while frontier:
            fresh = set()
            for H in frontier:
                for C in cyclic:
                    if C <= H:
                        continue
                    joined = self.closure(sorted(H | C))
                    if joined not in found:
                        fresh.add(joined)
            found |= fresh
            frontier = fresh
        return sorted(found, key=lambda H: (len(H), sorted(H)))


def make_group(generators: Sequence[Union[str, Sequence[int]]], cap: int = GROUP_ORDER_CAP) -> GroupData:
    """
    Enumerate the group generated by permutations.

    Raises:
        GroupTooLarge: |G| exceeds cap
        InputValidationError: malformed permutations
    """
    perms = [parse_permutation(g) if isinstance(g, str) else tuple(g) for g in generators]
    for perm in perms:
        if sorted(perm) != list(range(len(perm))):
            raise InputValidationError(f"{list(perm)} is not a permutation")
    degree = max([1] + [len(p) for p in perms])
    perms = [_pad(p, degree) for p in perms]
    identity = tuple(range(degree))
    elements = [identity]
    positions = {identity: 0}
    queue = deque([identity])
    while queue:
        current = queue.popleft()
        for g in perms:
            product = compose(current, g)
            if product not in positions:
                if len(elements) >= cap:
                    raise GroupTooLarge(f"Group order exceeds the cap of {cap}")
                positions[product] = len(elements)
                elements.append(product)
                queue.append(product)
    table = tuple(
        tuple(positions[compose(a, b)] for b in elements) for a in elements
    )
    logger.info(f"Group of order {len(elements)} on {degree} points enumerated")
    return GroupData(degree=degree, generators=tuple(perms), elements=tuple(elements), table=table)


def catalog_group(name: str, cap: int = GROUP_ORDER_CAP) -> GroupData:
    normalized = name.strip().upper()
    key = CATALOG_ALIASES.get(normalized) or {k.upper(): k for k in CATALOG}.get(normalized)
    if key is None:
        raise InputValidationError(f"Unknown catalog group {name!r}; known: {sorted(CATALOG)}")
    return make_group(CATALOG[key], cap)
