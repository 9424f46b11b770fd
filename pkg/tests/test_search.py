import json
import os
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import HealthCheck, given, settings

from conftest import graded_posets
from oracles import brute_force_assignments
from rlabel import kernels
from rlabel.labeling import TripleAssignment, chain_system, is_triple_assignment
from rlabel.poset import RankTooSmall, boolean_lattice, butterfly, chain, glue, glued_butterfly
from rlabel.search import Mode, Status, search_triple_assignment


class TestCounts:
    @pytest.mark.parametrize(
        "p, expected",
        [
            (butterfly(2), 2),
            (butterfly(3), 12),
            (butterfly(4), 104),
            (butterfly(5), 816),
            (glued_butterfly(2), 4),
            (glued_butterfly(3), 48),
            (boolean_lattice(3), 30),
            (chain(3), 1),
        ],
    )
    def test_count(self, p, expected):
        out = search_triple_assignment(p, Mode.COUNT)
        assert out.status is Status.FOUND
        assert out.count == expected

    def test_t6_count(self):
        assert search_triple_assignment(butterfly(6), Mode.COUNT).count == 6560

    def test_all_matches_count(self):
        p = butterfly(4)
        out = search_triple_assignment(p, Mode.ALL)
        assert out.count == 104 and not out.truncated
        assert len(set(out.witnesses)) == 104
        assert all(is_triple_assignment(p, tau) for tau in out.witnesses)

    def test_all_with_limit(self):
        out = search_triple_assignment(butterfly(4), Mode.ALL, limit=5)
        assert out.truncated and out.count == 5 and out.status is Status.FOUND
        assert out.witnesses == search_triple_assignment(butterfly(4), Mode.ALL).witnesses[:5]

    def test_first_is_least(self):
        p = butterfly(3)
        everything = search_triple_assignment(p, Mode.ALL).witnesses
        first = search_triple_assignment(p).witness
        assert first == everything[0]
        assert first.vector.tolist() == min(tau.vector.tolist() for tau in everything)


class TestGluedSearch:
    def test_p3_found(self):
        p = glued_butterfly(3)
        out = search_triple_assignment(p)
        assert out.status is Status.FOUND and out.conclusive
        assert out.count is None
        assert is_triple_assignment(p, out.witness)

    @pytest.mark.parametrize("n", [4, 5])
    def test_proven_none(self, n):
        out = search_triple_assignment(glued_butterfly(n))
        assert out.status is Status.PROVEN_NONE
        assert out.witness is None
        assert out.stats.nodes > 0

    @pytest.mark.parametrize("n", [4, 5])
    def test_copies_alone_are_fine(self, n):
        assert search_triple_assignment(butterfly(n)).status is Status.FOUND

    def test_p4_count_zero(self):
        out = search_triple_assignment(glued_butterfly(4), Mode.COUNT)
        assert out.status is Status.PROVEN_NONE and out.count == 0

    def test_limit_never_proves_none(self):
        for cap in (1, 10, 100, 1000):
            out = search_triple_assignment(glued_butterfly(5), max_nodes=cap)
            assert out.status is Status.LIMIT_EXCEEDED
            assert not out.conclusive

    def test_timeout(self):
        out = search_triple_assignment(glued_butterfly(6), timeout_s=0.2)
        assert out.status is Status.LIMIT_EXCEEDED

    def test_rank_too_small(self):
        with pytest.raises(RankTooSmall):
            search_triple_assignment(chain(1))

    def test_bad_limit(self):
        with pytest.raises(ValueError):
            search_triple_assignment(butterfly(3), Mode.ALL, limit=0)


class TestDeterminism:
    @pytest.mark.parametrize("jobs", [2, 3, 4, 8])
    def test_jobs_do_not_change_outcome(self, jobs):
        for p in (butterfly(5), glued_butterfly(3), glued_butterfly(4)):
            one = search_triple_assignment(p)
            many = search_triple_assignment(p, jobs=jobs)
            assert many.status is one.status
            assert many.witness == one.witness
        p = butterfly(5)
        assert search_triple_assignment(p, Mode.COUNT, jobs=jobs).count == 816
        assert (
            search_triple_assignment(p, Mode.ALL, limit=7, jobs=jobs).witnesses
            == search_triple_assignment(p, Mode.ALL, limit=7).witnesses
        )

    def test_p5_parallel_proven_none(self):
        assert search_triple_assignment(glued_butterfly(5), jobs=4).status is Status.PROVEN_NONE

    def test_repeatable(self):
        p = glued_butterfly(3)
        a = search_triple_assignment(p, Mode.ALL)
        b = search_triple_assignment(p, Mode.ALL)
        assert a.witnesses == b.witnesses and a.stats.nodes == b.stats.nodes


class TestBruteForce:
    @pytest.mark.parametrize(
        "p", [butterfly(3), butterfly(4), glued_butterfly(3), boolean_lattice(3), glue(chain(3), butterfly(3))]
    )
    def test_named(self, p):
        self.compare(p)

    @given(graded_posets(max_rank=4, max_width=3))
    @settings(max_examples=120, deadline=None, suppress_health_check=[HealthCheck.too_slow])
    def test_random(self, p):
        self.compare(p)

    @staticmethod
    def compare(p):
        found = brute_force_assignments(p.rank, p.covers)
        if found is None:
            return
        out = search_triple_assignment(p, Mode.ALL)
        assert out.status is (Status.FOUND if found else Status.PROVEN_NONE)
        assert out.count == len(found)
        expected = {
            tuple(0 if v[t] == "a" else 1 for t in chain_system(p).triplets) for v in found
        }
        assert {tuple(tau.vector.tolist()) for tau in out.witnesses} == expected
        first = search_triple_assignment(p)
        if found:
            assert tuple(first.witness.vector.tolist()) == min(expected)
        else:
            assert first.status is Status.PROVEN_NONE


class TestKernels:
    @pytest.mark.parametrize("p", [butterfly(4), glued_butterfly(4), boolean_lattice(4)])
    def test_count_rising_paths_agree(self, p):
        system = chain_system(p)
        rng = np.random.default_rng(7)
        for _ in range(20):
            values = rng.integers(0, 2, size=system.n_triplets).astype(np.int8)
            loop = kernels._count_rising_loop(values, system.iv_ptr, system.chain_ptr, system.chain_trip)
            vec = kernels._count_rising_numpy(values, system.iv_ptr, system.chain_ptr, system.chain_trip)
            assert loop.tolist() == vec.tolist()

    def test_chain_system_shape(self):
        s = chain_system(butterfly(3))
        assert s.n_triplets == 8
        assert s.n_intervals == 5  # four diamonds and the whole poset
        assert s.n_chains == 4 * 2 + 4
        assert s.chain_elements(0)[0] == "bot"
        assert not s.iv_ptr.flags.writeable

    def test_python_kernels_match_compiled(self):
        p = glued_butterfly(3)
        system = chain_system(p)
        results = []
        for root, run in (
            (kernels.search_root, kernels.search_run),
            (kernels.search_root.py_func, kernels.search_run.py_func),
        ):
            state = kernels.SearchState.fresh(system)
            args = state.kernel_args(system)
            empty = np.zeros(0, dtype=np.int64), np.zeros(0, dtype=np.int8)
            root(empty[0], empty[1], *args)
            sols = []
            while (code := run(10**6, True, *args)) == kernels.SOLUTION:
                sols.append(state.values.tolist())
            assert code == kernels.EXHAUSTED
            results.append((sols, state.nodes, state.propagations))
        assert results[0] == results[1]
        assert len(results[0][0]) == 48

    def test_numpy_backend_subprocess(self):
        script = (
            "import json, rlabel\n"
            "from rlabel import _accel\n"
            "from rlabel.search import search_triple_assignment as s, Mode\n"
            "from rlabel.poset import butterfly as t, glued_butterfly as g\n"
            "print(json.dumps([_accel.backend(), s(t(4), Mode.COUNT).count, s(g(3), Mode.COUNT).count,"
            " s(g(4)).status.value, s(g(3)).witness.vector.tolist()]))\n"
        )
        env = dict(os.environ, RLABEL_DISABLE_NUMBA="1")
        proc = subprocess.run([sys.executable, "-c", script], env=env, capture_output=True, text=True, check=True)
        backend, t4, p3, p4, witness = json.loads(proc.stdout)
        assert backend == "numpy"
        assert (t4, p3, p4) == (104, 48, "proven_none")
        assert witness == search_triple_assignment(glued_butterfly(3)).witness.vector.tolist()


def test_assignment_from_vector_roundtrip():
    p = glued_butterfly(3)
    tau = search_triple_assignment(p).witness
    assert TripleAssignment(p, tau.values) == tau
