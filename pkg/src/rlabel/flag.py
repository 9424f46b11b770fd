"""Flag f- and h-vectors.

A subset S of {1, ..., n-1} is encoded as a bitmask with bit i-1 standing
for rank i. Counts are Python ints throughout.
"""

from __future__ import annotations

from collections.abc import Iterable, Iterator
from dataclasses import dataclass

import numpy as np

from .poset import GradedPoset

__all__ = [
    "FlagVector",
    "mask_of",
    "subset_of",
    "flag_f_vector",
    "flag_h_vector",
    "flag_f_from_h",
]


def mask_of(ranks: Iterable[int]) -> int:
    mask = 0
    for r in ranks:
        mask |= 1 << (r - 1)
    return mask


def subset_of(mask: int) -> tuple[int, ...]:
    return tuple(i + 1 for i in range(mask.bit_length()) if mask >> i & 1)


@dataclass(frozen=True)
class FlagVector:
    """Integer entries indexed by rank subsets of a rank-n poset.

    ``entries[mask]`` holds the value for the subset encoded by ``mask``.
    Indexing also accepts an iterable of ranks: ``f[{1, 3}]``.
    """

    n: int
    entries: tuple[int, ...]

    def __post_init__(self):
        expected = 1 << (self.n - 1) if self.n >= 1 else 0
        if len(self.entries) != expected:
            raise ValueError(f"rank {self.n} needs {expected} entries, got {len(self.entries)}")

    def __getitem__(self, key) -> int:
        if not isinstance(key, int):
            key = mask_of(key)
        return self.entries[key]

    def __len__(self) -> int:
        return len(self.entries)

    def items(self) -> Iterator[tuple[int, int]]:
        return enumerate(self.entries)

    def total(self) -> int:
        return sum(self.entries)

    def to_json(self) -> dict[str, int]:
        return {str(mask): value for mask, value in self.items()}

    @classmethod
    def from_json(cls, n: int, data: dict[str, int]) -> "FlagVector":
        size = 1 << (n - 1) if n >= 1 else 0
        return cls(n, tuple(int(data[str(m)]) for m in range(size)))


def flag_f_vector(p: GradedPoset) -> FlagVector:
    """Chain counts through every rank selection of p.

    Works one rank at a time: for a subset with largest rank r, keep the
    vector of chain counts ending at each element of rank r and push it up
    through the comparability block to the next selected rank.
    """
    n = p.n
    if n < 1:
        return FlagVector(n, ())
    levels = [np.array([p.index[e] for e in p.at_rank(r)]) for r in range(n + 1)]
    zeta = p.zeta

    def block(r: int, s: int) -> np.ndarray:
        return zeta[np.ix_(levels[r], levels[s])].astype(object)

    size = 1 << (n - 1)
    entries = [0] * size
    # ends[mask] = counts of chains realising `mask` ending at each element of rank max(mask)
    ends: dict[int, tuple[int, np.ndarray]] = {0: (0, np.array([1], dtype=object))}
    for mask in range(size):
        last, vec = ends.pop(mask)
        entries[mask] = int((vec @ block(last, n)).sum())
        for r in range(last + 1, n):
            ends[mask | 1 << (r - 1)] = (r, vec @ block(last, r))
    return FlagVector(n, tuple(entries))


def _subset_transform(values: list[int], n: int, sign: int) -> list[int]:
    out = list(values)
    for i in range(n - 1):
        bit = 1 << i
        for mask in range(len(out)):
            if mask & bit:
                out[mask] += sign * out[mask ^ bit]
    return out


def flag_h_vector(f: FlagVector) -> FlagVector:
    """h_S = sum over T subset of S of (-1)^|S - T| f_T."""
    return FlagVector(f.n, tuple(_subset_transform(list(f.entries), f.n, -1)))


def flag_f_from_h(h: FlagVector) -> FlagVector:
    """Inverse of :func:`flag_h_vector`: f_S = sum over T subset of S of h_T."""
    return FlagVector(h.n, tuple(_subset_transform(list(h.entries), h.n, 1)))
