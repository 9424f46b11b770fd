"""Array kernels for rising-chain counting and the triple-assignment search.

A poset is flattened into a :class:`ChainSystem`: every interval [x, y] of
rank >= 2, every maximal chain of each such interval, and the cover triplets
along each chain, all as int64 CSR arrays. Letters are encoded 0 = a, 1 = b,
-1 = unassigned.

The search kernel is a resumable DFS. All of its state lives in the arrays
of a :class:`SearchState`, so a call can stop after a node budget or at a
solution and the Python driver can resume it with the same arrays.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _accel
from ._accel import jit
from .poset import GradedPoset, triplets

A, B, UNSET = 0, 1, -1

# kernel return codes
EXHAUSTED, SOLUTION, PAUSED = 0, 1, 2

# slots of SearchState.scalars
_TRAIL, _LEVEL, _NODES, _BACKTRACK, _SOLUTIONS, _PROPAGATIONS, _ROOT_FAILED = range(7)


@dataclass(frozen=True, eq=False)
class ChainSystem:
    """Flattened interval/chain/triplet incidence of a graded poset."""

    triplets: tuple[tuple[str, str, str], ...]
    interval_ends: tuple[tuple[str, str], ...]
    iv_rank: np.ndarray  # (I,)
    iv_ptr: np.ndarray  # (I+1,) chains of interval i are iv_ptr[i]:iv_ptr[i+1]
    chain_ptr: np.ndarray  # (C+1,) triplets of chain c are chain_trip[chain_ptr[c]:chain_ptr[c+1]]
    chain_trip: np.ndarray
    chain_iv: np.ndarray  # (C,)
    trip_ptr: np.ndarray  # (T+1,) chains through triplet t are trip_chain[trip_ptr[t]:trip_ptr[t+1]]
    trip_chain: np.ndarray

    @property
    def n_triplets(self) -> int:
        return len(self.triplets)

    @property
    def n_intervals(self) -> int:
        return len(self.interval_ends)

    @property
    def n_chains(self) -> int:
        return len(self.chain_iv)

    def chain_elements(self, c: int) -> tuple[str, ...]:
        trips = [self.triplets[t] for t in self.chain_trip[self.chain_ptr[c] : self.chain_ptr[c + 1]]]
        return trips[0] + tuple(t[2] for t in trips[1:])

    @classmethod
    def build(cls, p: GradedPoset) -> "ChainSystem":
        trips = triplets(p)
        tindex = {t: i for i, t in enumerate(trips)}
        by_interval: dict[tuple[int, int], list[list[int]]] = {}
        idx = p.index

        # every saturated path of length >= 2 is a maximal chain of its interval
        def walk(path: list[str], trip_ids: list[int]) -> None:
            last = path[-1]
            for nxt in p.up[last]:
                if len(path) >= 2:
                    trip_ids.append(tindex[(path[-2], last, nxt)])
                path.append(nxt)
                if len(path) >= 3:
                    key = (idx[path[0]], idx[nxt])
                    by_interval.setdefault(key, []).append(list(trip_ids))
                walk(path, trip_ids)
                path.pop()
                if len(path) >= 2:
                    trip_ids.pop()

        for x in p.elements:
            walk([x], [])

        keys = sorted(by_interval)
        iv_ptr = [0]
        chain_ptr = [0]
        chain_trip: list[int] = []
        chain_iv: list[int] = []
        for i, key in enumerate(keys):
            for trip_ids in by_interval[key]:
                chain_trip.extend(trip_ids)
                chain_ptr.append(len(chain_trip))
                chain_iv.append(i)
            iv_ptr.append(len(chain_iv))

        members: list[list[int]] = [[] for _ in trips]
        for c in range(len(chain_iv)):
            for t in chain_trip[chain_ptr[c] : chain_ptr[c + 1]]:
                members[t].append(c)
        trip_ptr = np.cumsum([0] + [len(m) for m in members])
        trip_chain = [c for m in members for c in m]

        def arr(values) -> np.ndarray:
            out = np.asarray(values, dtype=np.int64)
            out.setflags(write=False)
            return out

        ends = tuple((p.elements[i], p.elements[j]) for i, j in keys)
        return cls(
            triplets=tuple(trips),
            interval_ends=ends,
            iv_rank=arr([p.rank[y] - p.rank[x] for x, y in ends]),
            iv_ptr=arr(iv_ptr),
            chain_ptr=arr(chain_ptr),
            chain_trip=arr(chain_trip),
            chain_iv=arr(chain_iv),
            trip_ptr=arr(trip_ptr),
            trip_chain=arr(trip_chain),
        )


# rising-chain counting


@jit
def _count_rising_loop(values, iv_ptr, chain_ptr, chain_trip):
    n_iv = iv_ptr.shape[0] - 1
    out = np.zeros(n_iv, dtype=np.int64)
    for i in range(n_iv):
        count = 0
        for c in range(iv_ptr[i], iv_ptr[i + 1]):
            rising = True
            for k in range(chain_ptr[c], chain_ptr[c + 1]):
                if values[chain_trip[k]] != 0:
                    rising = False
                    break
            if rising:
                count += 1
        out[i] = count
    return out


def _count_rising_numpy(values, iv_ptr, chain_ptr, chain_trip):
    if iv_ptr.shape[0] <= 1:
        return np.zeros(0, dtype=np.int64)
    bad = (values[chain_trip] != 0).astype(np.int64)
    bad_per_chain = np.add.reduceat(bad, chain_ptr[:-1])
    rising = (bad_per_chain == 0).astype(np.int64)
    return np.add.reduceat(rising, iv_ptr[:-1])


def count_rising(system: ChainSystem, values: np.ndarray) -> np.ndarray:
    """Number of all-a chains in every interval of ``system`` under ``values``."""
    values = np.asarray(values, dtype=np.int8)
    if _accel.USE_NUMBA:
        return _count_rising_loop(values, system.iv_ptr, system.chain_ptr, system.chain_trip)
    return _count_rising_numpy(values, system.iv_ptr, system.chain_ptr, system.chain_trip)


# search


@dataclass
class SearchState:
    values: np.ndarray  # int8 (T,)
    pending: np.ndarray  # int8 (T,) letter queued for propagation or -1
    queue: np.ndarray  # int64 (T,)
    trail: np.ndarray  # int64 (T,)
    chain_nb: np.ndarray  # b-letters on chain
    chain_nun: np.ndarray  # unassigned triplets on chain
    iv_alive: np.ndarray  # chains with no b
    iv_rising: np.ndarray  # chains fully a
    dec_pos: np.ndarray
    dec_var: np.ndarray
    dec_val: np.ndarray
    scalars: np.ndarray

    @classmethod
    def fresh(cls, system: ChainSystem) -> "SearchState":
        t = system.n_triplets
        return cls(
            values=np.full(t, UNSET, dtype=np.int8),
            pending=np.full(t, UNSET, dtype=np.int8),
            queue=np.zeros(t, dtype=np.int64),
            trail=np.zeros(t, dtype=np.int64),
            chain_nb=np.zeros(system.n_chains, dtype=np.int64),
            chain_nun=np.diff(system.chain_ptr).astype(np.int64),
            iv_alive=np.diff(system.iv_ptr).astype(np.int64),
            iv_rising=np.zeros(system.n_intervals, dtype=np.int64),
            dec_pos=np.zeros(t + 1, dtype=np.int64),
            dec_var=np.zeros(t + 1, dtype=np.int64),
            dec_val=np.zeros(t + 1, dtype=np.int8),
            scalars=np.zeros(7, dtype=np.int64),
        )

    def kernel_args(self, system: ChainSystem) -> tuple:
        return (
            self.values, self.pending, self.queue, self.trail,
            self.chain_nb, self.chain_nun, self.iv_alive, self.iv_rising,
            self.dec_pos, self.dec_var, self.dec_val, self.scalars,
            system.iv_ptr, system.chain_ptr, system.chain_trip, system.chain_iv,
            system.trip_ptr, system.trip_chain,
        )  # fmt: skip

    @property
    def nodes(self) -> int:
        return int(self.scalars[_NODES])

    @property
    def solutions(self) -> int:
        return int(self.scalars[_SOLUTIONS])

    @property
    def propagations(self) -> int:
        return int(self.scalars[_PROPAGATIONS])


@jit
def _enqueue(var, val, values, pending, queue, qtail):
    """Queue var := val. Returns the new tail, or -1 on a contradiction."""
    cur = values[var]
    if cur != -1:
        return qtail if cur == val else -1
    if pending[var] != -1:
        return qtail if pending[var] == val else -1
    pending[var] = val
    queue[qtail] = var
    return qtail + 1


@jit
def _interval_rules(iv, values, pending, queue, qtail, chain_nb, chain_nun,
                    iv_alive, iv_rising, iv_ptr, chain_ptr, chain_trip):
    """Check one interval and queue the letters it forces.

    Returns the new queue tail, or ``-(tail + 1)`` on a contradiction so the
    caller can still clear what was queued.
    """
    if iv_rising[iv] > 1 or iv_alive[iv] == 0:
        return -(qtail + 1)
    if iv_alive[iv] == 1 and iv_rising[iv] == 0:
        # the last chain that can still rise must rise
        for c in range(iv_ptr[iv], iv_ptr[iv + 1]):
            if chain_nb[c] == 0:
                for k in range(chain_ptr[c], chain_ptr[c + 1]):
                    t = chain_trip[k]
                    if values[t] == -1:
                        nt = _enqueue(t, 0, values, pending, queue, qtail)
                        if nt < 0:
                            return -(qtail + 1)
                        qtail = nt
                break
    elif iv_rising[iv] == 1:
        # every other chain must fall; one open slot left means it must be b
        for c in range(iv_ptr[iv], iv_ptr[iv + 1]):
            if chain_nb[c] == 0 and chain_nun[c] == 1:
                for k in range(chain_ptr[c], chain_ptr[c + 1]):
                    t = chain_trip[k]
                    if values[t] == -1:
                        nt = _enqueue(t, 1, values, pending, queue, qtail)
                        if nt < 0:
                            return -(qtail + 1)
                        qtail = nt
                        break
    return qtail


@jit
def _propagate(qtail, values, pending, queue, trail, chain_nb, chain_nun, iv_alive,
               iv_rising, scalars, iv_ptr, chain_ptr, chain_trip, chain_iv,
               trip_ptr, trip_chain):
    """Drain the queue, assigning and applying interval rules. True on conflict."""
    qhead = 0
    conflict = False
    while qhead < qtail:
        var = queue[qhead]
        qhead += 1
        val = pending[var]
        pending[var] = -1
        if values[var] != -1:
            if values[var] != val:
                conflict = True
                break
            continue
        values[var] = val
        trail[scalars[0]] = var
        scalars[0] += 1
        scalars[5] += 1
        # update every chain through var before looking at any interval
        for k in range(trip_ptr[var], trip_ptr[var + 1]):
            c = trip_chain[k]
            iv = chain_iv[c]
            chain_nun[c] -= 1
            if val == 1:
                chain_nb[c] += 1
                if chain_nb[c] == 1:
                    iv_alive[iv] -= 1
            elif chain_nb[c] == 0 and chain_nun[c] == 0:
                iv_rising[iv] += 1
        for k in range(trip_ptr[var], trip_ptr[var + 1]):
            iv = chain_iv[trip_chain[k]]
            qtail = _interval_rules(iv, values, pending, queue, qtail, chain_nb, chain_nun,
                                    iv_alive, iv_rising, iv_ptr, chain_ptr, chain_trip)
            if qtail < 0:
                qtail = -qtail - 1
                conflict = True
                break
        if conflict:
            break
    # drop whatever is still queued after a conflict
    while qhead < qtail:
        pending[queue[qhead]] = -1
        qhead += 1
    return conflict


@jit
def _undo(pos, values, trail, chain_nb, chain_nun, iv_alive, iv_rising, scalars,
          chain_iv, trip_ptr, trip_chain):
    tl = scalars[0]
    while tl > pos:
        tl -= 1
        var = trail[tl]
        val = values[var]
        for k in range(trip_ptr[var], trip_ptr[var + 1]):
            c = trip_chain[k]
            iv = chain_iv[c]
            if val == 1:
                chain_nb[c] -= 1
                if chain_nb[c] == 0:
                    iv_alive[iv] += 1
            elif chain_nb[c] == 0 and chain_nun[c] == 0:
                iv_rising[iv] -= 1
            chain_nun[c] += 1
        values[var] = -1
    scalars[0] = tl


@jit
def search_root(assume_vars, assume_vals, values, pending, queue, trail, chain_nb,
                chain_nun, iv_alive, iv_rising, dec_pos, dec_var, dec_val, scalars,
                iv_ptr, chain_ptr, chain_trip, chain_iv, trip_ptr, trip_chain):
    """Root propagation plus optional assumptions. Returns True on conflict."""
    # a failed root leaves the state unusable; scalars[6] marks it
    qtail = 0
    for iv in range(iv_ptr.shape[0] - 1):
        qtail = _interval_rules(iv, values, pending, queue, qtail, chain_nb, chain_nun,
                                iv_alive, iv_rising, iv_ptr, chain_ptr, chain_trip)
        if qtail < 0:
            scalars[6] = 1
            return True
    for j in range(assume_vars.shape[0]):
        qtail = _enqueue(assume_vars[j], assume_vals[j], values, pending, queue, qtail)
        if qtail < 0:
            scalars[6] = 1
            return True
    if _propagate(qtail, values, pending, queue, trail, chain_nb, chain_nun, iv_alive,
                  iv_rising, scalars, iv_ptr, chain_ptr, chain_trip, chain_iv,
                  trip_ptr, trip_chain):
        scalars[6] = 1
        return True
    return False


@jit
def search_run(node_limit, stop_on_solution, values, pending, queue, trail, chain_nb,
               chain_nun, iv_alive, iv_rising, dec_pos, dec_var, dec_val, scalars,
               iv_ptr, chain_ptr, chain_trip, chain_iv, trip_ptr, trip_chain):
    """Advance the DFS. Decision order: lowest unassigned triplet, a before b.

    Returns EXHAUSTED, SOLUTION (state holds a full assignment; the next call
    continues past it) or PAUSED (``node_limit`` decisions reached).
    """
    n_trip = values.shape[0]
    if scalars[6] == 1:
        return 0
    while True:
        if scalars[2] >= node_limit:
            return 2
        if scalars[3] == 1:
            level = scalars[1]
            while level > 0 and dec_val[level - 1] == 1:
                level -= 1
            scalars[1] = level
            if level == 0:
                return 0
            lv = level - 1
            _undo(dec_pos[lv], values, trail, chain_nb, chain_nun, iv_alive, iv_rising,
                  scalars, chain_iv, trip_ptr, trip_chain)
            dec_val[lv] = 1
            scalars[2] += 1
            qtail = _enqueue(dec_var[lv], 1, values, pending, queue, 0)
            scalars[3] = 1 if _propagate(qtail, values, pending, queue, trail, chain_nb,
                                         chain_nun, iv_alive, iv_rising, scalars, iv_ptr,
                                         chain_ptr, chain_trip, chain_iv, trip_ptr,
                                         trip_chain) else 0
            continue
        level = scalars[1]
        v = dec_var[level - 1] + 1 if level > 0 else 0
        while v < n_trip and values[v] != -1:
            v += 1
        if v == n_trip:
            scalars[4] += 1
            scalars[3] = 1
            if stop_on_solution:
                return 1
            continue
        dec_pos[level] = scalars[0]
        dec_var[level] = v
        dec_val[level] = 0
        scalars[1] = level + 1
        scalars[2] += 1
        qtail = _enqueue(v, 0, values, pending, queue, 0)
        scalars[3] = 1 if _propagate(qtail, values, pending, queue, trail, chain_nb,
                                     chain_nun, iv_alive, iv_rising, scalars, iv_ptr,
                                     chain_ptr, chain_trip, chain_iv, trip_ptr,
                                     trip_chain) else 0
