"""JSON interchange format for double complexes.

A complex document looks like::

    {
      "format_version": 1,
      "field_order": 4,
      "support": [{"p": 0, "q": 0, "dim": 1, "labels": ["1"]}, ...],
      "differentials": [
        {"kind": "del", "source": [0, 0], "entries": [[0, 0, "1/2*z^1"], ...]}, ...
      ],
      "max_degree": null,
      "real_structure": [{"source": [1, 0], "entries": [...]}, ...],
      "actions": {"sigma": {"order": 4, "maps": [{"bidegree": [1, 0], "entries": [...]}]}}
    }

Entries are (row, column, scalar) triples; scalars are exact strings in the
chosen root of unity ``z``.  Documents with ``"kind": "dba"`` describe an
algebra presentation instead (see :mod:`bicomplexes.dsl`) and are compiled on
load.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from .complex import Bicomplex, RealStructure
from .cyclotomic import format_scalar, parse_scalar
from .dba import BicomplexAction, induced_action, real_structure
from .dsl import parse_dsl, spec_from_dict
from .linalg import SparseMatrix

__all__ = [
    "FORMAT_VERSION",
    "DocumentError",
    "LoadedComplex",
    "to_document",
    "from_document",
    "dumps",
    "loads",
    "load_path",
    "save_path",
]

FORMAT_VERSION = 1


class DocumentError(ValueError):
    """Malformed complex document."""


@dataclass
class LoadedComplex:
    complex: Bicomplex
    real: RealStructure | None = None
    actions: dict[str, BicomplexAction] = field(default_factory=dict)
    spec: object = None


def _entries(M: SparseMatrix) -> list:
    return [[i, j, format_scalar(v)] for (i, j), v in sorted(M.entries.items())]


def _matrix(entries, rows: int, cols: int, order: int, where: str) -> SparseMatrix:
    data = {}
    for item in entries:
        try:
            i, j, s = item
            i, j = int(i), int(j)
            value = parse_scalar(str(s), order)
        except (TypeError, ValueError) as exc:
            raise DocumentError(f"{where}: bad entry {item!r} ({exc})") from None
        if not (0 <= i < rows and 0 <= j < cols):
            raise DocumentError(f"{where}: entry ({i},{j}) outside a {rows}x{cols} matrix")
        data[(i, j)] = value
    return SparseMatrix.from_entries(rows, cols, order, data)


def to_document(A: Bicomplex, real: RealStructure | None = None,
                actions: dict[str, BicomplexAction] | None = None) -> dict:
    doc: dict = {
        "format_version": FORMAT_VERSION,
        "field_order": A.field_order,
        "support": [],
        "differentials": [],
        "max_degree": A.max_degree,
    }
    for (p, q) in sorted(A.support, key=lambda b: (b[0] + b[1], b[0])):
        entry = {"p": p, "q": q, "dim": A.dim(p, q)}
        if A.labels and (p, q) in A.labels:
            entry["labels"] = list(A.labels[(p, q)])
        doc["support"].append(entry)
    for kind, maps in (("del", A.del_maps), ("delbar", A.delbar_maps)):
        for b in sorted(maps):
            doc["differentials"].append({"kind": kind, "source": list(b), "entries": _entries(maps[b])})
    if real is not None:
        doc["real_structure"] = [{"source": list(b), "entries": _entries(M)} for b, M in sorted(real.maps.items())]
    if actions:
        doc["actions"] = {
            name: {"order": act.order,
                   "maps": [{"bidegree": list(b), "entries": _entries(M)} for b, M in sorted(act.matrices.items())]}
            for name, act in sorted(actions.items())
        }
    return doc


def from_document(doc: dict) -> LoadedComplex:
    if not isinstance(doc, dict):
        raise DocumentError("document must be a JSON object")
    if doc.get("kind") == "dba":
        try:
            spec = spec_from_dict(doc)
            window = doc.get("window")
            A = spec.compile(window)
        except (KeyError, TypeError, ValueError) as exc:
            raise DocumentError(f"bad algebra document: {exc}") from None
        actions = {name: induced_action(A, act) for name, act in spec.actions.items()}
        real = real_structure(A, spec) if spec.has_full_conjugation() else None
        return LoadedComplex(A, real, actions, spec)
    version = doc.get("format_version")
    if version != FORMAT_VERSION:
        raise DocumentError(f"unsupported format_version {version!r}")
    try:
        order = int(doc["field_order"])
        dims, labels = {}, {}
        for s in doc.get("support", []):
            b = (int(s["p"]), int(s["q"]))
            if b in dims:
                raise DocumentError(f"bidegree {b} listed twice")
            dims[b] = int(s["dim"])
            if "labels" in s:
                labels[b] = list(s["labels"])
        maps: dict = {"del": {}, "delbar": {}}
        for d in doc.get("differentials", []):
            kind = d["kind"]
            if kind not in maps:
                raise DocumentError(f"unknown differential kind {kind!r}")
            p, q = (int(x) for x in d["source"])
            tgt = (p + 1, q) if kind == "del" else (p, q + 1)
            maps[kind][(p, q)] = _matrix(d["entries"], dims.get(tgt, 0), dims.get((p, q), 0), order,
                                         f"{kind} at {(p, q)}")
        max_degree = doc.get("max_degree")
        A = Bicomplex(order, dims, maps["del"], maps["delbar"], labels or None,
                      max_degree=None if max_degree is None else int(max_degree))
        real = None
        if doc.get("real_structure") is not None:
            rmaps = {}
            for r in doc["real_structure"]:
                p, q = (int(x) for x in r["source"])
                rmaps[(p, q)] = _matrix(r["entries"], dims.get((q, p), 0), dims.get((p, q), 0), order,
                                        f"real structure at {(p, q)}")
            real = RealStructure(rmaps)
        actions = {}
        for name, a in (doc.get("actions") or {}).items():
            mats = {}
            for m in a["maps"]:
                b = tuple(int(x) for x in m["bidegree"])
                mats[b] = _matrix(m["entries"], dims.get(b, 0), dims.get(b, 0), order, f"action {name} at {b}")
            actions[name] = BicomplexAction(int(a["order"]), mats)
    except DocumentError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise DocumentError(f"malformed document: {exc}") from None
    return LoadedComplex(A, real, actions)


def dumps(A: Bicomplex, real: RealStructure | None = None, actions=None) -> str:
    return json.dumps(to_document(A, real, actions), indent=1, sort_keys=True)


def loads(text: str) -> LoadedComplex:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentError(f"invalid JSON: {exc}") from None
    return from_document(doc)


def load_path(path) -> LoadedComplex:
    """Load a JSON complex document, a JSON algebra document, or a DSL file."""
    path = Path(path)
    text = path.read_text(encoding="utf-8")
    if path.suffix in (".dba", ".txt") or not text.lstrip().startswith("{"):
        spec = parse_dsl(text)
        A = spec.compile()
        actions = {name: induced_action(A, act) for name, act in spec.actions.items()}
        real = real_structure(A, spec) if spec.has_full_conjugation() else None
        return LoadedComplex(A, real, actions, spec)
    return loads(text)


def save_path(path, A: Bicomplex, real: RealStructure | None = None, actions=None) -> None:
    Path(path).write_text(dumps(A, real, actions) + "\n", encoding="utf-8")
