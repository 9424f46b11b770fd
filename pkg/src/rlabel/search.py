"""Complete search for triple assignments.

The DFS itself lives in :mod:`rlabel.kernels`; this module owns budgets,
search modes and the split of the tree across worker threads. The compiled
kernels release the GIL, so threads run subtrees in parallel.
"""

from __future__ import annotations

import enum
import logging
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .kernels import ChainSystem, SearchState
from .labeling import TripleAssignment, chain_system
from .poset import GradedPoset, RankTooSmall

__all__ = ["Mode", "Status", "SearchStats", "SearchOutcome", "search_triple_assignment"]

log = logging.getLogger(__name__)

DEFAULT_MAX_NODES = 10**8
DEFAULT_TIMEOUT_S = 300.0
_SLICE = 200_000


class Mode(str, enum.Enum):
    FIRST = "first"
    COUNT = "count"
    ALL = "all"


class Status(str, enum.Enum):
    FOUND = "found"
    PROVEN_NONE = "proven_none"
    LIMIT_EXCEEDED = "limit_exceeded"


@dataclass
class SearchStats:
    nodes: int = 0
    propagations: int = 0
    elapsed_s: float = 0.0
    subtrees: int = 1


@dataclass
class SearchOutcome:
    """Result of :func:`search_triple_assignment`.

    ``count`` is exact in COUNT mode and equals ``len(witnesses)`` in ALL
    mode. ``witness`` is the lexicographically least assignment found (a
    before b, triplets in canonical order). A LIMIT_EXCEEDED outcome is
    inconclusive: it may carry witnesses found before the budget ran out,
    but its counts are lower bounds only.
    """

    status: Status
    mode: Mode
    witness: TripleAssignment | None = None
    witnesses: list[TripleAssignment] = field(default_factory=list)
    count: int | None = None
    truncated: bool = False
    stats: SearchStats = field(default_factory=SearchStats)

    @property
    def conclusive(self) -> bool:
        return self.status is not Status.LIMIT_EXCEEDED


@dataclass
class _Subtree:
    exhausted: bool
    solutions: list[np.ndarray]
    count: int
    nodes: int
    propagations: int


class _Budget:
    def __init__(self, max_nodes: int, timeout_s: float | None):
        self.max_nodes = max_nodes
        self.deadline = None if timeout_s is None else time.monotonic() + timeout_s
        self.nodes_used = 0

    def expired(self) -> bool:
        return self.deadline is not None and time.monotonic() > self.deadline


def _run_subtree(
    system: ChainSystem,
    assume: tuple[np.ndarray, np.ndarray],
    mode: Mode,
    limit: int | None,
    budget: _Budget,
    node_cap: int,
) -> _Subtree:
    state = SearchState.fresh(system)
    args = state.kernel_args(system)
    kernels.search_root(assume[0], assume[1], *args)
    stop_on_solution = mode is not Mode.COUNT
    solutions: list[np.ndarray] = []
    want = 1 if mode is Mode.FIRST else limit
    while True:
        ceiling = min(node_cap, state.nodes + _SLICE)
        code = kernels.search_run(ceiling, stop_on_solution, *args)
        if code == kernels.EXHAUSTED:
            return _Subtree(True, solutions, state.solutions, state.nodes, state.propagations)
        if code == kernels.SOLUTION:
            solutions.append(state.values.copy())
            if want is not None and len(solutions) >= want:
                return _Subtree(mode is Mode.FIRST, solutions, state.solutions, state.nodes,
                                state.propagations)
            continue
        if state.nodes >= node_cap or budget.expired():
            return _Subtree(False, solutions, state.solutions, state.nodes, state.propagations)


def _split_prefixes(system: ChainSystem, jobs: int) -> list[tuple[np.ndarray, np.ndarray]]:
    """Assumption prefixes over the first free triplets after root propagation.

    Prefixes are listed in the DFS order (a before b), so concatenating
    subtree results in list order reproduces the sequential search.
    """
    empty = np.zeros(0, dtype=np.int64), np.zeros(0, dtype=np.int8)
    if jobs <= 1:
        return [empty]
    probe = SearchState.fresh(system)
    if kernels.search_root(empty[0], empty[1], *probe.kernel_args(system)):
        return [empty]
    free = np.flatnonzero(probe.values == kernels.UNSET)
    depth = min(len(free), max(1, math.ceil(math.log2(4 * jobs))))
    split_vars = free[:depth].astype(np.int64)
    out = []
    for k in range(1 << depth):
        vals = np.array([(k >> (depth - 1 - i)) & 1 for i in range(depth)], dtype=np.int8)
        out.append((split_vars, vals))
    return out


def search_triple_assignment(
    p: GradedPoset,
    mode: Mode | str = Mode.FIRST,
    limit: int | None = None,
    *,
    max_nodes: int = DEFAULT_MAX_NODES,
    timeout_s: float | None = DEFAULT_TIMEOUT_S,
    jobs: int = 1,
) -> SearchOutcome:
    """Decide whether p has a triple assignment, by exhaustive backtracking.

    ``mode`` is FIRST (stop at the first witness), COUNT (exact number of
    triple assignments) or ALL (collect witnesses, at most ``limit``). The
    status, the first witness and the count do not depend on ``jobs``.
    PROVEN_NONE is only returned after the whole tree was exhausted.
    """
    mode = Mode(mode)
    if p.n < 2:
        raise RankTooSmall(f"search needs a poset of rank >= 2, got {p.n}")
    if limit is not None and limit < 1:
        raise ValueError("limit must be positive")
    start = time.monotonic()
    system = chain_system(p)
    budget = _Budget(max_nodes, timeout_s)
    prefixes = _split_prefixes(system, jobs)
    subtree_cap = max_nodes if len(prefixes) == 1 else max(1, max_nodes // len(prefixes))

    def run(prefix):
        return _run_subtree(system, prefix, mode, limit, budget, subtree_cap)

    results: list[_Subtree] = []
    if len(prefixes) == 1:
        results.append(run(prefixes[0]))
    else:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(run, prefixes))

    stats = SearchStats(
        nodes=sum(r.nodes for r in results),
        propagations=sum(r.propagations for r in results),
        elapsed_s=time.monotonic() - start,
        subtrees=len(prefixes),
    )
    # walk subtrees in DFS order; stop at the first one that decides the answer
    solutions: list[np.ndarray] = []
    count = 0
    complete = True
    for r in results:
        solutions.extend(r.solutions)
        count += r.count
        if mode is Mode.FIRST and r.solutions:
            break
        if not r.exhausted:
            complete = False
            break
    witnesses = [TripleAssignment.from_vector(p, v) for v in solutions]
    truncated = False
    if mode is Mode.ALL and limit is not None and len(witnesses) >= limit:
        witnesses = witnesses[:limit]
        truncated = True
    found = bool(witnesses) or (mode is Mode.COUNT and count > 0)

    if mode is Mode.FIRST:
        witnesses = witnesses[:1]
        status = Status.FOUND if witnesses else (Status.PROVEN_NONE if complete else Status.LIMIT_EXCEEDED)
    elif truncated:
        status = Status.FOUND
    elif not complete:
        status = Status.LIMIT_EXCEEDED
    else:
        status = Status.FOUND if found else Status.PROVEN_NONE

    if mode is Mode.ALL:
        count = len(witnesses)
    elif mode is Mode.FIRST:
        count = None
    log.debug("search %s on %r: %s after %d nodes", mode.value, p, status.value, stats.nodes)
    return SearchOutcome(
        status=status,
        mode=mode,
        witness=witnesses[0] if witnesses else None,
        witnesses=witnesses if mode is Mode.ALL else witnesses[:1],
        count=count,
        truncated=truncated,
        stats=stats,
    )
