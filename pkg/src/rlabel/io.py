"""JSON interchange for posets, assignments, labelings and reports."""

from __future__ import annotations

import json
from collections.abc import Mapping
from pathlib import Path
from typing import Any

from .labeling import Labeling, TripleAssignment
from .poset import GradedPoset, from_cover_relations

__all__ = [
    "poset_to_json",
    "poset_from_json",
    "assignment_to_json",
    "assignment_from_json",
    "labeling_to_json",
    "labeling_from_json",
    "dumps",
    "load_poset",
]


def dumps(obj: Any) -> str:
    """Canonical text form: two-space indent, insertion-ordered keys, trailing newline."""
    return json.dumps(obj, indent=2, ensure_ascii=False) + "\n"


def poset_to_json(p: GradedPoset) -> dict:
    return {
        "rank": p.n,
        "elements": [{"id": e, "rank": p.rank[e]} for e in p.elements],
        "covers": sorted([x, y] for x, y in p.covers),
    }


def poset_from_json(data: Mapping) -> GradedPoset:
    try:
        elements = [(item["id"], item["rank"]) for item in data["elements"]]
        covers = [tuple(pair) for pair in data["covers"]]
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed poset JSON: {exc}") from exc
    p = from_cover_relations(elements, covers)
    if "rank" in data and data["rank"] != p.n:
        raise ValueError(f"declared rank {data['rank']} but the top has rank {p.n}")
    return p


def load_poset(path: str | Path) -> GradedPoset:
    return poset_from_json(json.loads(Path(path).read_text()))


def assignment_to_json(tau: TripleAssignment) -> dict:
    return {
        "poset": poset_to_json(tau.poset),
        "values": [
            {"x": x, "y": y, "z": z, "letter": letter} for (x, y, z), letter in tau.values.items()
        ],
    }


def assignment_from_json(data: Mapping, base: Path | None = None) -> TripleAssignment:
    """Read an assignment; ``poset`` may be inline JSON or a path (relative to ``base``)."""
    poset = data["poset"]
    if isinstance(poset, str):
        path = Path(poset)
        if base is not None and not path.is_absolute():
            path = base / path
        p = load_poset(path)
    else:
        p = poset_from_json(poset)
    values = {(v["x"], v["y"], v["z"]): v["letter"] for v in data["values"]}
    return TripleAssignment(p, values)


def _label_out(label):
    return list(label) if isinstance(label, tuple) else label


def _label_in(label):
    return tuple(label) if isinstance(label, list) else label


def labeling_to_json(labeling: Labeling) -> dict:
    p = labeling.poset
    relation = sorted(
        ([_label_out(a), _label_out(b)] for a, b in labeling.relation),
        key=lambda pair: json.dumps(pair),
    )
    return {
        "poset": poset_to_json(p),
        "covers": [
            {"x": x, "y": y, "label": _label_out(labeling.labels[(x, y)])} for x, y in p.covers
        ],
        "relation": relation,
    }


def labeling_from_json(data: Mapping) -> Labeling:
    p = poset_from_json(data["poset"])
    labels = {(c["x"], c["y"]): _label_in(c["label"]) for c in data["covers"]}
    relation = frozenset((_label_in(a), _label_in(b)) for a, b in data["relation"])
    return Labeling(p, labels, relation)
