"""Compare the compiled kernels with the pure-numpy / interpreted fallback.

Each backend runs in its own interpreter because the choice is made at
import time from RLABEL_DISABLE_NUMBA.

    python3 benchmarks/bench_kernels.py [--repeat 3] [--with-p5]
"""

from __future__ import annotations

import argparse
import json
import os
import subprocess
import sys
import time


def _best(fn, repeat):
    times = []
    for _ in range(repeat):
        start = time.perf_counter()
        result = fn()
        times.append(time.perf_counter() - start)
    return min(times), result


def worker(repeat: int, with_p5: bool) -> dict:
    import numpy as np

    from rlabel import _accel
    from rlabel.kernels import count_rising
    from rlabel.labeling import chain_system
    from rlabel.poset import butterfly, glued_butterfly
    from rlabel.search import Mode, search_triple_assignment

    out = {"backend": _accel.backend()}

    # first call includes compilation when numba is on
    start = time.perf_counter()
    search_triple_assignment(glued_butterfly(3), Mode.COUNT)
    out["warmup_s"] = time.perf_counter() - start

    system = chain_system(glued_butterfly(6))
    rng = np.random.default_rng(0)
    batch = rng.integers(0, 2, size=(200, system.n_triplets)).astype(np.int8)
    count_rising(system, batch[0])
    out["count_rising_P6_x200_s"], _ = _best(lambda: [count_rising(system, v) for v in batch], repeat)

    cases = [("T_5 count", butterfly(5), Mode.COUNT), ("P_4 first", glued_butterfly(4), Mode.FIRST)]
    if with_p5:
        cases.append(("P_5 first", glued_butterfly(5), Mode.FIRST))
    for name, p, mode in cases:
        t, res = _best(lambda: search_triple_assignment(p, mode, timeout_s=None), repeat)
        out[name] = {"seconds": t, "status": res.status.value, "nodes": res.stats.nodes, "count": res.count}
    return out


def run_backend(disable: bool, repeat: int, with_p5: bool) -> dict:
    env = dict(os.environ, RLABEL_DISABLE_NUMBA="1" if disable else "0")
    cmd = [sys.executable, __file__, "--worker", "--repeat", str(repeat)]
    if with_p5:
        cmd.append("--with-p5")
    proc = subprocess.run(cmd, env=env, capture_output=True, text=True, check=True)
    return json.loads(proc.stdout)


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--with-p5", action="store_true", help="also time P_5 (slow on the fallback path)")
    ap.add_argument("--worker", action="store_true", help=argparse.SUPPRESS)
    args = ap.parse_args(argv)
    if args.worker:
        print(json.dumps(worker(args.repeat, args.with_p5)))
        return 0

    fast = run_backend(False, args.repeat, args.with_p5)
    slow = run_backend(True, args.repeat, args.with_p5)
    print(f"{'benchmark':<26}{'numba':>12}{'numpy':>12}{'speedup':>10}")
    for key in fast:
        if key == "backend":
            continue
        a, b = fast[key], slow[key]
        if isinstance(a, dict):
            assert (a["status"], a["nodes"], a["count"]) == (b["status"], b["nodes"], b["count"]), key
            a, b = a["seconds"], b["seconds"]
        print(f"{key:<26}{a:>11.4f}s{b:>11.4f}s{b / a if a else float('inf'):>9.1f}x")
    return 0


if __name__ == "__main__":
    sys.exit(main())
