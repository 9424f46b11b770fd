"""Finite graded posets stored as Hasse diagrams.

Elements are strings. Everything that iterates over elements does so in the
canonical order ``(rank, id)``, so chains, triplets and intervals come out in
a reproducible lexicographic order.
"""

from __future__ import annotations

from collections.abc import Iterable, Mapping
from dataclasses import dataclass
from functools import cached_property
from itertools import combinations

import numpy as np

__all__ = [
    "PosetError",
    "NotGraded",
    "NotBounded",
    "DuplicateElement",
    "DanglingCover",
    "InvalidRank",
    "RankMismatch",
    "RankTooSmall",
    "NotComparable",
    "GradedPoset",
    "Interval",
    "from_cover_relations",
    "chain",
    "butterfly",
    "glue",
    "glued_butterfly",
    "boolean_lattice",
    "interval",
    "maximal_chains",
    "triplets",
    "is_eulerian",
]

Triplet = tuple[str, str, str]
Chain = tuple[str, ...]


class PosetError(ValueError):
    pass


class NotGraded(PosetError):
    pass


class NotBounded(PosetError):
    pass


class DuplicateElement(PosetError):
    pass


class DanglingCover(PosetError):
    pass


class InvalidRank(PosetError):
    pass


class RankMismatch(PosetError):
    pass


class RankTooSmall(PosetError):
    pass


class NotComparable(PosetError):
    pass


class GradedPoset:
    """Immutable bounded graded poset.

    Build one with :func:`from_cover_relations` or a generator; the
    constructor assumes its inputs were already validated.
    """

    def __init__(self, rank: Mapping[str, int], covers: Iterable[tuple[str, str]]):
        self.elements: tuple[str, ...] = tuple(sorted(rank, key=lambda e: (rank[e], e)))
        self.rank: dict[str, int] = {e: rank[e] for e in self.elements}
        self.index: dict[str, int] = {e: i for i, e in enumerate(self.elements)}
        self.covers: tuple[tuple[str, str], ...] = tuple(
            sorted(set(covers), key=lambda c: (self.index[c[0]], self.index[c[1]]))
        )
        up: dict[str, list[str]] = {e: [] for e in self.elements}
        down: dict[str, list[str]] = {e: [] for e in self.elements}
        for x, y in self.covers:
            up[x].append(y)
            down[y].append(x)
        key = self.index.__getitem__
        self.up = {e: tuple(sorted(v, key=key)) for e, v in up.items()}
        self.down = {e: tuple(sorted(v, key=key)) for e, v in down.items()}

    @property
    def bottom(self) -> str:
        return self.elements[0]

    @property
    def top(self) -> str:
        return self.elements[-1]

    @property
    def n(self) -> int:
        """Rank of the poset, i.e. the rank of its top element."""
        return self.rank[self.top]

    def __len__(self) -> int:
        return len(self.elements)

    def __contains__(self, element: object) -> bool:
        return element in self.rank

    def __iter__(self):
        return iter(self.elements)

    def __repr__(self) -> str:
        return f"GradedPoset(n={self.n}, elements={len(self)}, covers={len(self.covers)})"

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, GradedPoset):
            return NotImplemented
        return self.rank == other.rank and self.covers == other.covers

    def __hash__(self) -> int:
        return hash((tuple(self.rank.items()), self.covers))

    def rank_profile(self) -> tuple[int, ...]:
        counts = [0] * (self.n + 1)
        for e in self.elements:
            counts[self.rank[e]] += 1
        return tuple(counts)

    def at_rank(self, r: int) -> tuple[str, ...]:
        return tuple(e for e in self.elements if self.rank[e] == r)

    @cached_property
    def zeta(self) -> np.ndarray:
        """Boolean reachability matrix, ``zeta[i, j]`` iff element i <= element j."""
        size = len(self.elements)
        z = np.eye(size, dtype=bool)
        idx = self.index
        # elements are rank-sorted, so sweeping downward closes transitively
        for i in range(size - 1, -1, -1):
            for y in self.up[self.elements[i]]:
                z[i] |= z[idx[y]]
        z.setflags(write=False)
        return z

    def leq(self, x: str, y: str) -> bool:
        return bool(self.zeta[self.index[x], self.index[y]])

    def between(self, x: str, y: str) -> tuple[str, ...]:
        """Elements z with x <= z <= y, in canonical order."""
        i, j = self.index[x], self.index[y]
        mask = self.zeta[i] & self.zeta[:, j]
        return tuple(self.elements[k] for k in np.flatnonzero(mask))


@dataclass(frozen=True)
class Interval:
    """Closed interval [x, y] re-ranked so that x has rank 0.

    Identifiers are kept, so ``parent_ids`` is the identity on the interval's
    elements; it is stored explicitly for callers that relabel.
    """

    poset: GradedPoset
    lower: str
    upper: str
    parent_ids: Mapping[str, str]


def from_cover_relations(
    ranked_elements: Mapping[str, int] | Iterable[tuple[str, int]],
    cover_pairs: Iterable[tuple[str, str]],
) -> GradedPoset:
    """Validate a ranked Hasse diagram and return it as a :class:`GradedPoset`."""
    if isinstance(ranked_elements, Mapping):
        items = list(ranked_elements.items())
    else:
        items = [tuple(item) for item in ranked_elements]
    rank: dict[str, int] = {}
    for element, r in items:
        if element in rank:
            raise DuplicateElement(f"element {element!r} declared twice")
        if not isinstance(r, int) or isinstance(r, bool) or r < 0:
            raise InvalidRank(f"element {element!r} has invalid rank {r!r}")
        rank[element] = r
    if not rank:
        raise NotBounded("a graded poset needs at least one element")

    covers = []
    for pair in cover_pairs:
        x, y = pair
        for e in (x, y):
            if e not in rank:
                raise DanglingCover(f"cover ({x!r}, {y!r}) references undeclared {e!r}")
        if rank[y] != rank[x] + 1:
            raise NotGraded(f"cover ({x!r}, {y!r}) goes from rank {rank[x]} to {rank[y]}")
        covers.append((x, y))

    bottoms = [e for e, r in rank.items() if r == 0]
    if len(bottoms) != 1:
        raise NotBounded(f"expected exactly one element of rank 0, found {sorted(bottoms)}")
    has_down = {y for _, y in covers}
    has_up = {x for x, _ in covers}
    maxima = sorted(e for e in rank if e not in has_up)
    if len(maxima) != 1:
        raise NotBounded(f"expected exactly one maximal element, found {maxima}")
    top = maxima[0]
    if rank[top] != max(rank.values()):
        raise NotBounded(f"maximal element {top!r} is not of top rank")
    for e, r in rank.items():
        if r > 0 and e not in has_down:
            raise NotBounded(f"element {e!r} of rank {r} has no lower cover")
    return GradedPoset(rank, covers)


# generators


def chain(n: int) -> GradedPoset:
    """Totally ordered poset of rank n: bot < c1 < ... < c(n-1) < top."""
    if n < 0:
        raise InvalidRank(f"chain rank must be >= 0, got {n}")
    if n == 0:
        return GradedPoset({"bot": 0}, [])
    names = ["bot"] + [f"c{i}" for i in range(1, n)] + ["top"]
    return GradedPoset({e: i for i, e in enumerate(names)}, zip(names, names[1:]))


def butterfly(n: int) -> GradedPoset:
    """The butterfly poset T_n: two elements per interior rank, all covers between
    adjacent ranks. Interior elements are ``x{i}`` and ``x{i}b``."""
    if n < 1:
        raise InvalidRank(f"butterfly rank must be >= 1, got {n}")
    levels = [["bot"]] + [[f"x{i}", f"x{i}b"] for i in range(1, n)] + [["top"]]
    rank = {e: r for r, level in enumerate(levels) for e in level}
    covers = [(x, y) for lo, hi in zip(levels, levels[1:]) for x in lo for y in hi]
    return GradedPoset(rank, covers)


def glue(p: GradedPoset, q: GradedPoset) -> GradedPoset:
    """Disjoint union of p and q with bottoms and tops identified.

    Interior elements get the prefixes ``L:`` and ``R:``; the shared bottom
    and top keep p's identifiers.
    """
    if p.n != q.n:
        raise RankMismatch(f"cannot glue posets of ranks {p.n} and {q.n}")
    if p.n < 2:
        raise RankTooSmall(f"gluing needs rank >= 2, got {p.n}")
    bot, top = p.bottom, p.top

    def rename(prefix: str, poset: GradedPoset):
        def f(e: str) -> str:
            if e == poset.bottom:
                return bot
            if e == poset.top:
                return top
            return prefix + e

        return f

    rank: dict[str, int] = {}
    covers = []
    for prefix, poset in (("L:", p), ("R:", q)):
        f = rename(prefix, poset)
        for e in poset.elements:
            rank[f(e)] = poset.rank[e]
        covers.extend((f(x), f(y)) for x, y in poset.covers)
    return GradedPoset(rank, covers)


def glued_butterfly(n: int) -> GradedPoset:
    """P_n: two copies of T_n sharing bottom and top."""
    return glue(butterfly(n), butterfly(n))


def boolean_lattice(n: int) -> GradedPoset:
    """Subsets of {1..n} under inclusion; ids look like ``{}``, ``{1,3}``."""
    if n < 0:
        raise InvalidRank(f"boolean lattice rank must be >= 0, got {n}")

    def name(s) -> str:
        return "{" + ",".join(map(str, s)) + "}"

    ground = range(1, n + 1)
    rank = {name(s): k for k in range(n + 1) for s in combinations(ground, k)}
    covers = [
        (name(s), name(tuple(sorted(s + (i,)))))
        for k in range(n)
        for s in combinations(ground, k)
        for i in ground
        if i not in s
    ]
    return GradedPoset(rank, covers)


# traversal


def interval(p: GradedPoset, x: str, y: str) -> Interval:
    for e in (x, y):
        if e not in p:
            raise NotComparable(f"{e!r} is not an element of the poset")
    if not p.leq(x, y):
        raise NotComparable(f"{x!r} is not below {y!r}")
    members = p.between(x, y)
    base = p.rank[x]
    keep = set(members)
    sub = GradedPoset(
        {e: p.rank[e] - base for e in members},
        [(a, b) for a, b in p.covers if a in keep and b in keep],
    )
    return Interval(sub, x, y, {e: e for e in members})


def maximal_chains(p: GradedPoset) -> list[Chain]:
    """All bottom-to-top chains, lexicographic in the canonical element order."""
    out: list[Chain] = []
    path = [p.bottom]

    def walk(e: str) -> None:
        if e == p.top:
            out.append(tuple(path))
            return
        for f in p.up[e]:
            path.append(f)
            walk(f)
            path.pop()

    walk(p.bottom)
    return out


def triplets(p: GradedPoset) -> list[Triplet]:
    """All (x, y, z) with x covered by y covered by z, lexicographically ordered."""
    return [(x, y, z) for x in p.elements for y in p.up[x] for z in p.up[y]]


def is_eulerian(p: GradedPoset) -> bool:
    """Every interval [x, y] with x < y has as many even-rank as odd-rank elements."""
    z = p.zeta.astype(np.int64)
    even = np.array([p.rank[e] % 2 == 0 for e in p.elements], dtype=np.int64)
    n_even = (z * even) @ z
    n_odd = (z * (1 - even)) @ z
    strict = p.zeta & ~np.eye(len(p), dtype=bool)
    return bool(np.all(n_even[strict] == n_odd[strict]))
