"""Triple assignments, R-labelings and the checks that relate them.

A triple assignment maps every cover triplet x < y < z to the letter "a"
or "b"; a maximal chain of an interval is rising when every triplet along it
is "a". The assignment is valid when every interval of rank >= 2 has exactly
one rising chain.
"""

from __future__ import annotations

import enum
from collections.abc import Callable, Hashable, Iterable, Mapping
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .flag import FlagVector
from .kernels import ChainSystem, count_rising
from .poset import GradedPoset, NotComparable, Triplet, boolean_lattice, interval, maximal_chains

__all__ = [
    "RisingStatus",
    "RisingResult",
    "AssignmentCheck",
    "TripleAssignment",
    "Labeling",
    "chain_system",
    "is_rising",
    "rising_chain_status",
    "is_triple_assignment",
    "locally_valid",
    "breakpoints",
    "labeling_to_assignment",
    "assignment_to_labeling",
    "is_r_labeling",
    "descent_distribution",
    "diamond_pairs",
    "standard_boolean_labeling",
]

LETTERS = ("a", "b")


class RisingStatus(enum.Enum):
    ZERO = "zero"
    UNIQUE = "unique"
    MANY = "many"

    @classmethod
    def of_count(cls, count: int) -> "RisingStatus":
        if count == 0:
            return cls.ZERO
        return cls.UNIQUE if count == 1 else cls.MANY


@dataclass(frozen=True)
class RisingResult:
    status: RisingStatus
    chain: tuple[str, ...] | None = None


@dataclass(frozen=True)
class AssignmentCheck:
    """Outcome of an interval-by-interval check; truthy when it passed."""

    ok: bool
    interval: tuple[str, str] | None = None
    status: RisingStatus | None = None

    def __bool__(self) -> bool:
        return self.ok


_SYSTEMS: dict[GradedPoset, ChainSystem] = {}


def chain_system(p: GradedPoset) -> ChainSystem:
    """Memoized :meth:`ChainSystem.build`."""
    system = _SYSTEMS.get(p)
    if system is None:
        system = _SYSTEMS[p] = ChainSystem.build(p)
    return system


class TripleAssignment:
    """A total function from the cover triplets of a poset to {"a", "b"}."""

    def __init__(self, poset: GradedPoset, values: Mapping[Triplet, str]):
        self.poset = poset
        system = chain_system(poset)
        domain = set(system.triplets)
        given = {tuple(t): v for t, v in values.items()}
        missing = domain - given.keys()
        extra = given.keys() - domain
        if missing or extra:
            raise ValueError(
                f"assignment domain mismatch: {len(missing)} triplets missing, "
                f"{len(extra)} not cover triplets"
            )
        bad = {v for v in given.values() if v not in LETTERS}
        if bad:
            raise ValueError(f"letters must be 'a' or 'b', got {sorted(bad)}")
        self.values: dict[Triplet, str] = {t: given[t] for t in system.triplets}
        self.vector = np.array([LETTERS.index(v) for v in self.values.values()], dtype=np.int8)
        self.vector.setflags(write=False)

    @classmethod
    def from_vector(cls, poset: GradedPoset, vector: Iterable[int]) -> "TripleAssignment":
        trips = chain_system(poset).triplets
        vector = list(vector)
        if len(vector) != len(trips):
            raise ValueError(f"expected {len(trips)} letters, got {len(vector)}")
        return cls(poset, {t: LETTERS[int(v)] for t, v in zip(trips, vector)})

    @classmethod
    def from_function(cls, poset: GradedPoset, fn: Callable[[str, str, str], str]) -> "TripleAssignment":
        return cls(poset, {t: fn(*t) for t in chain_system(poset).triplets})

    def __getitem__(self, triplet: Triplet) -> str:
        return self.values[tuple(triplet)]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, TripleAssignment):
            return NotImplemented
        return self.poset == other.poset and self.values == other.values

    def __hash__(self) -> int:
        return hash(self.vector.tobytes())

    def __repr__(self) -> str:
        return f"TripleAssignment({''.join(self.values.values())!r})"

    def word(self, chain: tuple[str, ...]) -> str:
        """Letters along a chain; the chain's weight as an ab-monomial."""
        return "".join(self.values[tuple(chain[i : i + 3])] for i in range(len(chain) - 2))


def is_rising(chain: tuple[str, ...], tau: TripleAssignment) -> bool:
    """All triplet letters along the chain are "a"; chains of length <= 1 qualify."""
    return all(ch == "a" for ch in tau.word(chain))


def _interval_index(system: ChainSystem, x: str, y: str) -> int | None:
    lookup = _interval_lookup(system)
    return lookup.get((x, y))


@lru_cache(maxsize=64)
def _interval_lookup(system: ChainSystem) -> dict[tuple[str, str], int]:
    return {ends: i for i, ends in enumerate(system.interval_ends)}


def rising_chain_status(p: GradedPoset, tau: TripleAssignment, x: str, y: str) -> RisingResult:
    """Classify the rising chains of [x, y] as none, exactly one, or several."""
    if x not in p or y not in p or x == y or not p.leq(x, y):
        raise NotComparable(f"{x!r} < {y!r} does not hold")
    if p.rank[y] - p.rank[x] == 1:
        return RisingResult(RisingStatus.UNIQUE, (x, y))
    system = chain_system(p)
    i = _interval_index(system, x, y)
    rising = [
        system.chain_elements(c)
        for c in range(system.iv_ptr[i], system.iv_ptr[i + 1])
        if not tau.vector[system.chain_trip[system.chain_ptr[c] : system.chain_ptr[c + 1]]].any()
    ]
    status = RisingStatus.of_count(len(rising))
    return RisingResult(status, rising[0] if status is RisingStatus.UNIQUE else None)


def _check(p: GradedPoset, tau: TripleAssignment, max_rank: int | None) -> AssignmentCheck:
    if tau.poset != p:
        raise ValueError("assignment belongs to a different poset")
    system = chain_system(p)
    counts = count_rising(system, tau.vector)
    bad = counts != 1
    if max_rank is not None:
        bad &= system.iv_rank <= max_rank
    hits = np.flatnonzero(bad)
    if not hits.size:
        return AssignmentCheck(True)
    i = int(hits[0])
    return AssignmentCheck(False, system.interval_ends[i], RisingStatus.of_count(int(counts[i])))


def is_triple_assignment(p: GradedPoset, tau: TripleAssignment) -> AssignmentCheck:
    """Every interval of rank >= 2 has a unique rising chain.

    On failure the result names the first offending interval in canonical
    order together with its status.
    """
    return _check(p, tau, None)


def locally_valid(p: GradedPoset, tau: TripleAssignment, max_rank: int = 3) -> AssignmentCheck:
    """Unique rising chains in every interval of rank 2 through ``max_rank``."""
    return _check(p, tau, max_rank)


def breakpoints(p: GradedPoset, tau: TripleAssignment) -> tuple[str, ...]:
    """Interior elements y whose letter tau(x, y, z) is the same for all x, z."""
    seen: dict[str, set[str]] = {}
    for (_, y, _), letter in tau.values.items():
        seen.setdefault(y, set()).add(letter)
    return tuple(y for y in p.elements[1:-1] if len(seen.get(y, ())) == 1)


def diamond_pairs(p: GradedPoset) -> list[tuple[Triplet, Triplet]]:
    """Triplet pairs of the rank-2 intervals with exactly two middle elements."""
    out = []
    for x in p.elements:
        tops: dict[str, list[str]] = {}
        for y in p.up[x]:
            for z in p.up[y]:
                tops.setdefault(z, []).append(y)
        for z, mids in sorted(tops.items(), key=lambda kv: p.index[kv[0]]):
            if len(mids) == 2:
                out.append(((x, mids[0], z), (x, mids[1], z)))
    return out


# labelings


@dataclass(frozen=True)
class Labeling:
    """Edge labels on the covers of a poset with an arbitrary relation on labels."""

    poset: GradedPoset
    labels: Mapping[tuple[str, str], Hashable]
    relation: frozenset[tuple[Hashable, Hashable]]

    def __post_init__(self):
        missing = set(self.poset.covers) - set(self.labels)
        if missing:
            raise ValueError(f"{len(missing)} covers have no label, e.g. {sorted(missing)[0]}")
        object.__setattr__(self, "relation", frozenset(self.relation))

    def related(self, x: str, y: str, z: str) -> bool:
        return (self.labels[(x, y)], self.labels[(y, z)]) in self.relation


def labeling_to_assignment(labeling: Labeling) -> TripleAssignment:
    """tau(x, y, z) = a exactly when label(x, y) ~ label(y, z)."""
    return TripleAssignment.from_function(
        labeling.poset, lambda x, y, z: "a" if labeling.related(x, y, z) else "b"
    )


def assignment_to_labeling(tau: TripleAssignment) -> Labeling:
    """Label each cover by itself, relating (x, y) ~ (y, z) when tau(x, y, z) = a.

    Labels are the strings ``"x->y"``.
    """
    p = tau.poset

    def name(x: str, y: str) -> str:
        return f"{x}->{y}"

    labels = {(x, y): name(x, y) for x, y in p.covers}
    relation = frozenset(
        (name(x, y), name(y, z)) for (x, y, z), letter in tau.values.items() if letter == "a"
    )
    return Labeling(p, labels, relation)


def is_r_labeling(labeling: Labeling) -> AssignmentCheck:
    """Check the R-labeling condition straight from the labels.

    Walks the maximal chains of every interval of rank >= 2 without going
    through triplet letters, so it is an independent check of
    :func:`labeling_to_assignment`.
    """
    p = labeling.poset
    for x in p.elements:
        for y in p.elements:
            if p.rank[y] - p.rank[x] < 2 or not p.leq(x, y):
                continue
            rising = 0
            for c in maximal_chains(interval(p, x, y).poset):
                if all(labeling.related(*c[i : i + 3]) for i in range(len(c) - 2)):
                    rising += 1
            if rising != 1:
                return AssignmentCheck(False, (x, y), RisingStatus.of_count(rising))
    return AssignmentCheck(True)


def standard_boolean_labeling(n: int) -> Labeling:
    """B_n with the cover S < S + {i} labelled i and i ~ j iff i < j."""
    p = boolean_lattice(n)

    def parse(e: str) -> set[int]:
        return {int(v) for v in e.strip("{}").split(",") if v}

    labels = {(x, y): (parse(y) - parse(x)).pop() for x, y in p.covers}
    relation = frozenset((i, j) for i in range(1, n + 1) for j in range(1, n + 1) if i < j)
    return Labeling(p, labels, relation)


def descent_distribution(p: GradedPoset, tau: TripleAssignment) -> FlagVector:
    """Number of maximal chains with each descent set.

    Position i (1 <= i <= n-1) is a descent of a chain when its i-th
    triplet carries the letter b.
    """
    n = p.n
    if n < 1:
        return FlagVector(n, ())
    counts = [0] * (1 << (n - 1))
    for c in maximal_chains(p):
        mask = 0
        for i, letter in enumerate(tau.word(c)):
            if letter == "b":
                mask |= 1 << i
        counts[mask] += 1
    return FlagVector(n, tuple(counts))
