"""Command line front end.

Exit codes: 0 success (search: Found), 1 search ProvenNone or a failed
verification row, 2 inconclusive search / usage or input error,
3 cd-index requested but not expressible.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from . import io
from .flag import flag_f_vector, flag_h_vector
from .labeling import assignment_to_labeling
from .poset import PosetError, boolean_lattice, butterfly, chain, glued_butterfly, maximal_chains
from .polynomial import NotExpressible, ab_index_from_flag_h, to_cd_index
from .search import DEFAULT_MAX_NODES, DEFAULT_TIMEOUT_S, Mode, Status, search_triple_assignment
from .verify import FAIL, INCONCLUSIVE, verify_paper

EXIT_OK, EXIT_NONE, EXIT_INCONCLUSIVE, EXIT_NOT_EXPRESSIBLE = 0, 1, 2, 3

FAMILIES = {
    "butterfly": (butterfly, 1),
    "glued": (glued_butterfly, 2),
    "boolean": (boolean_lattice, 0),
    "chain": (chain, 0),
}

log = logging.getLogger("rlabel")


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _read_poset(path: str):
    if path == "-":
        return io.poset_from_json(json.load(sys.stdin))
    return io.load_poset(path)


def cmd_gen(args) -> int:
    factory, lowest = FAMILIES[args.family]
    if args.n < lowest:
        raise PosetError(f"{args.family} needs n >= {lowest}, got {args.n}")
    _emit(io.dumps(io.poset_to_json(factory(args.n))), args.out)
    return EXIT_OK


def cmd_flag(args) -> int:
    p = _read_poset(args.poset)
    f = flag_f_vector(p)
    h = flag_h_vector(f)
    if args.format == "table":
        lines = [f"{'mask':>6}  {'S':<20} {'f':>8} {'h':>8}"]
        for mask, value in f.items():
            subset = "{" + ",".join(str(i + 1) for i in range(p.n) if mask >> i & 1) + "}"
            lines.append(f"{mask:>6}  {subset:<20} {value:>8} {h[mask]:>8}")
        _emit("\n".join(lines) + "\n", args.out)
    else:
        _emit(io.dumps({"rank": p.n, "f": f.to_json(), "h": h.to_json()}), args.out)
    return EXIT_OK


def cmd_index(args) -> int:
    p = _read_poset(args.poset)
    ab = ab_index_from_flag_h(flag_h_vector(flag_f_vector(p)))
    report: dict = {"rank": p.n, "basis": args.basis, "ab": ab.to_json()}
    code = EXIT_OK
    if args.basis == "cd":
        try:
            report["cd"] = to_cd_index(ab).to_json()
        except NotExpressible as exc:
            report["cd"] = None
            report["error"] = {"kind": "NotExpressible", "message": str(exc)}
            code = EXIT_NOT_EXPRESSIBLE
    if args.format == "table":
        lines = [f"ab: {ab}"]
        if args.basis == "cd":
            cd = report["cd"]
            lines.append("cd: " + (" + ".join(f"{c}*{w}" for w, c in cd.items()) if cd else "NotExpressible"))
        _emit("\n".join(lines) + "\n", args.out)
    else:
        _emit(io.dumps(report), args.out)
    return code


def cmd_search(args) -> int:
    p = _read_poset(args.poset)
    outcome = search_triple_assignment(
        p, Mode(args.mode), args.limit,
        max_nodes=args.max_nodes, timeout_s=args.timeout_s, jobs=args.jobs,
    )  # fmt: skip
    stats = {"nodes": outcome.stats.nodes, "propagations": outcome.stats.propagations}
    if args.timings:
        stats["elapsed_s"] = round(outcome.stats.elapsed_s, 6)
    report = {
        "status": outcome.status.value,
        "mode": outcome.mode.value,
        "conclusive": outcome.conclusive,
        "count": outcome.count,
        "truncated": outcome.truncated,
        "stats": stats,
        "witness": None,
    }
    if outcome.witness is not None:
        report["witness"] = [
            {"x": x, "y": y, "z": z, "letter": v} for (x, y, z), v in outcome.witness.values.items()
        ]
        if args.out:
            out = Path(args.out)
            out.write_text(io.dumps(io.assignment_to_json(outcome.witness)))
            labeling_path = out.with_name(out.stem + ".labeling.json")
            labeling_path.write_text(io.dumps(io.labeling_to_json(assignment_to_labeling(outcome.witness))))
            report["assignment_file"] = str(out)
            report["labeling_file"] = str(labeling_path)
    if outcome.mode is Mode.ALL:
        report["witnesses"] = ["".join(w.values.values()) for w in outcome.witnesses]
    if args.format == "table":
        sys.stdout.write(
            f"status: {report['status']}\nnodes: {stats['nodes']}\n"
            + (f"count: {outcome.count}\n" if outcome.count is not None else "")
        )
    else:
        sys.stdout.write(io.dumps(report))
    if outcome.status is Status.FOUND:
        return EXIT_OK
    if outcome.status is Status.PROVEN_NONE:
        return EXIT_NONE
    return EXIT_INCONCLUSIVE


def cmd_chains(args) -> int:
    p = _read_poset(args.poset)
    chains = maximal_chains(p)
    if args.format == "table":
        _emit("".join(" < ".join(c) + "\n" for c in chains), args.out)
    else:
        _emit(io.dumps({"rank": p.n, "count": len(chains), "chains": [list(c) for c in chains]}), args.out)
    return EXIT_OK


def cmd_verify_paper(args) -> int:
    rows = verify_paper(args.max_n, max_nodes=args.max_nodes, timeout_s=args.timeout_s)
    if args.format == "json":
        _emit("".join(json.dumps(r.to_json(args.timings)) + "\n" for r in rows), args.out)
    else:
        _emit(format_table(rows, args.timings), args.out)
    if any(r.status == FAIL for r in rows):
        return EXIT_NONE
    if any(r.status == INCONCLUSIVE for r in rows):
        return EXIT_INCONCLUSIVE
    return EXIT_OK


def _short(value, width: int = 44) -> str:
    text = json.dumps(value) if not isinstance(value, str) else value
    return text if len(text) <= width else text[: width - 3] + "..."


def format_table(rows, timings: bool = False) -> str:
    header = f"{'status':<13} {'claim':<34} {'params':<24} {'expected':<44} computed"
    lines = [header, "-" * len(header)]
    for r in rows:
        line = (
            f"{r.status:<13} {r.claim:<34} {_short(r.params, 24):<24} "
            f"{_short(r.expected):<44} {_short(r.computed)}"
        )
        if timings:
            line += f"  ({r.runtime_s:.3f}s)"
        lines.append(line)
    passed = sum(r.status == "pass" for r in rows)
    lines.append(f"{passed}/{len(rows)} rows pass")
    return "\n".join(lines) + "\n"


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="rlabel", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    def with_format(p, default="json"):
        p.add_argument("--format", choices=("json", "table"), default=default)
        p.add_argument("--out", help="write to this file instead of stdout")

    def with_budget(p):
        p.add_argument("--max-nodes", type=int, default=DEFAULT_MAX_NODES)
        p.add_argument("--timeout-s", type=float, default=DEFAULT_TIMEOUT_S)
        p.add_argument("--timings", action="store_true", help="include wall-clock times")

    p = sub.add_parser("gen", help="write a poset from one of the built-in families")
    p.add_argument("family", choices=sorted(FAMILIES))
    p.add_argument("n", type=int)
    p.add_argument("--out")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("flag", help="flag f- and h-vectors")
    p.add_argument("poset")
    with_format(p)
    p.set_defaults(func=cmd_flag)

    p = sub.add_parser("index", help="ab-index, optionally rewritten in c and d")
    p.add_argument("poset")
    p.add_argument("--basis", choices=("ab", "cd"), default="ab")
    with_format(p)
    p.set_defaults(func=cmd_index)

    p = sub.add_parser("search", help="search for a triple assignment (R-labeling)")
    p.add_argument("poset")
    p.add_argument("--mode", choices=[m.value for m in Mode], default="first")
    p.add_argument("--limit", type=int, default=None, help="max witnesses in 'all' mode")
    p.add_argument("--jobs", type=int, default=1)
    with_budget(p)
    with_format(p)
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("chains", help="list maximal chains")
    p.add_argument("poset")
    with_format(p)
    p.set_defaults(func=cmd_chains)

    p = sub.add_parser("verify-paper", help="run the full verification report")
    p.add_argument("--max-n", type=int, default=5)
    with_budget(p)
    with_format(p, default="table")
    p.set_defaults(func=cmd_verify_paper)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING)
    try:
        return args.func(args)
    except (PosetError, ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"rlabel: error: {exc}", file=sys.stderr)
        return EXIT_INCONCLUSIVE


if __name__ == "__main__":
    sys.exit(main())
