"""Text front end for :class:`~bicomplexes.dba.DbaSpec` presentations.

One declaration per line; ``#`` starts a comment::

    name construction2
    field 4
    gen w1 (1,0) conj=w1bar
    gen w3 (1,0) conj=w3bar; d = w1^w2bar + w1bar^w2
    gen w1bar (0,1)
    weight u conj=ubar : del = 2*u*z1, delbar = 0
    act sigma order=4: w1 -> i*w1, w2 -> -i*w2
    basis dz23: z2^z3
    expr metric = w1^w1bar + w2^w2bar

Structure equations may be given as ``d = ...`` (split by bidegree) or as
``del = ...`` and ``delbar = ...``.  Generators with a conjugate partner and
no equations inherit them by conjugation.  In expressions ``^`` and ``*`` are
both the wedge product, ``i`` is a square root of -1 in field 4, and ``z`` or
``z^k`` is the chosen root of unity.

Errors raise :class:`DslError` carrying a 1-based line and column.
"""
from __future__ import annotations

import re
from dataclasses import dataclass

from .cyclotomic import format_scalar, parse_scalar
from .dba import AlgebraExpression, DbaError, DbaSpec, ExpressionSyntaxError, Generator, Weight

__all__ = ["DslError", "parse_dsl", "load_dsl", "spec_to_dict", "spec_from_dict"]


class DslError(ValueError):
    def __init__(self, message: str, line: int, column: int = 1) -> None:
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


@dataclass
class _Item:
    text: str
    line: int
    col: int


_NAME = r"[A-Za-z_][A-Za-z0-9_']*"
_GEN = re.compile(rf"gen\s+({_NAME})\s*\(\s*(-?\d+)\s*,\s*(-?\d+)\s*\)\s*(?:conj\s*=\s*({_NAME}))?\s*$")
_WEIGHT = re.compile(rf"weight\s+({_NAME})\s*(?:conj\s*=\s*({_NAME}))?\s*$")
_ACT = re.compile(rf"act\s+({_NAME})\s*(?:order\s*=\s*(\d+))?\s*$")


def _split(text: str, sep: str, offset: int):
    """Split on sep, returning (piece, column of the piece's first non-space char)."""
    out, start = [], 0
    for part in text.split(sep):
        lead = len(part) - len(part.lstrip())
        out.append((part.strip(), offset + start + lead))
        start += len(part) + 1
    return out


def _check_expr(spec: DbaSpec, item: _Item):
    try:
        return spec.expr(item.text)
    except ExpressionSyntaxError as exc:
        raise DslError(exc.bare_message, item.line, item.col + exc.column - 1) from None
    except DbaError as exc:
        raise DslError(str(exc), item.line, item.col) from None


def parse_dsl(text: str) -> DbaSpec:
    order, name = 1, ""
    gens: list[tuple[Generator, int]] = []
    weights: list[tuple[str, str | None, dict[str, _Item], int]] = []
    equations: dict[str, dict[str, _Item]] = {}
    actions: list[tuple[str, int | None, list[tuple[_Item, _Item]], int]] = []
    basis: list[tuple[str | None, _Item]] = []
    exprs: dict[str, _Item] = {}

    for ln, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].rstrip()
        if not line.strip():
            continue
        indent = len(line) - len(line.lstrip())
        body = line.strip()
        kw = body.split(None, 1)[0]
        col0 = indent + 1
        if kw == "field":
            parts = body.split()
            if len(parts) != 2 or not parts[1].isdigit() or int(parts[1]) < 1:
                raise DslError("expected 'field N' with N a positive integer", ln, col0)
            order = int(parts[1])
        elif kw == "name":
            name = body[4:].strip()
        elif kw == "gen":
            head, *rest = _split(body, ";", col0)
            m = _GEN.match(head[0])
            if not m:
                raise DslError("expected 'gen NAME (p,q) [conj=NAME]'", ln, head[1])
            g = Generator(m.group(1), (int(m.group(2)), int(m.group(3))), m.group(4))
            gens.append((g, ln))
            eq = equations.setdefault(g.name, {})
            for piece, c in rest:
                if not piece:
                    continue
                mm = re.match(r"(d|del|delbar)\s*=\s*", piece)
                if not mm:
                    raise DslError("expected 'd = ...', 'del = ...' or 'delbar = ...'", ln, c)
                if mm.group(1) in eq:
                    raise DslError(f"{mm.group(1)} of {g.name} given twice", ln, c)
                eq[mm.group(1)] = _Item(piece[mm.end():], ln, c + mm.end())
        elif kw == "weight":
            if ":" not in body:
                raise DslError("expected 'weight NAME [conj=NAME] : del = ..., delbar = ...'", ln, col0)
            head, tail = body.split(":", 1)
            m = _WEIGHT.match(head.strip())
            if not m:
                raise DslError("malformed weight declaration", ln, col0)
            rules: dict[str, _Item] = {}
            for piece, c in _split(tail, ",", col0 + len(head) + 1):
                if not piece:
                    continue
                mm = re.match(r"(del|delbar)\s*=\s*", piece)
                if not mm:
                    raise DslError("expected 'del = ...' or 'delbar = ...'", ln, c)
                rules[mm.group(1)] = _Item(piece[mm.end():], ln, c + mm.end())
            weights.append((m.group(1), m.group(2), rules, ln))
        elif kw == "act":
            if ":" not in body:
                raise DslError("expected 'act NAME [order=m]: g -> image, ...'", ln, col0)
            head, tail = body.split(":", 1)
            m = _ACT.match(head.strip())
            if not m:
                raise DslError("malformed action declaration", ln, col0)
            pairs = []
            for piece, c in _split(tail, ",", col0 + len(head) + 1):
                if not piece:
                    continue
                if "->" not in piece:
                    raise DslError("expected 'NAME -> image'", ln, c)
                src, img = piece.split("->", 1)
                pairs.append((_Item(src.strip(), ln, c), _Item(img.strip(), ln, c + len(src) + 2 + (len(img) - len(img.lstrip())))))
            actions.append((m.group(1), int(m.group(2)) if m.group(2) else None, pairs, ln))
        elif kw == "basis":
            rest = body[5:]
            c = col0 + 5 + (len(rest) - len(rest.lstrip()))
            rest = rest.strip()
            label = None
            mm = re.match(r"([^:]+):\s*", rest)
            if mm:
                label = mm.group(1).strip()
                c += mm.end()
                rest = rest[mm.end():]
            basis.append((label, _Item(rest, ln, c)))
        elif kw == "expr":
            mm = re.match(rf"expr\s+({_NAME})\s*=\s*", body)
            if not mm:
                raise DslError("expected 'expr NAME = ...'", ln, col0)
            exprs[mm.group(1)] = _Item(body[mm.end():], ln, col0 + mm.end())
        else:
            raise DslError(f"unknown declaration {kw!r}", ln, col0)

    if not gens:
        raise DslError("no generators declared", 1)
    gen_list = [g for g, _ in gens]
    gen_line = {g.name: ln for g, ln in gens}
    try:
        bare = DbaSpec(order, gen_list, weights=[Weight(w, c) for w, c, _, _ in weights])
    except DbaError as exc:
        raise DslError(str(exc), _guess_line(str(exc), gen_line)) from None

    weight_objs = []
    for wname, conj, rules, ln in weights:
        parsed = {}
        for key in ("del", "delbar"):
            if key not in rules:
                parsed[key] = None
                continue
            item = rules[key]
            e = _check_expr(bare, item)
            if not e:
                parsed[key] = None
                continue
            if len(e.terms) != 1:
                raise DslError(f"{key} rule must be c*{wname}*gen", item.line, item.col)
            (w, g), c = next(iter(e.terms.items()))
            if w != wname or len(g) != 1:
                raise DslError(f"{key} rule must be c*{wname}*gen", item.line, item.col)
            parsed[key] = (bare.F.lift(c), bare.generators[g[0]].name)
        weight_objs.append(Weight(wname, conj, parsed["del"], parsed["delbar"]))
    try:
        bare = DbaSpec(order, gen_list, weights=weight_objs)
    except DbaError as exc:
        raise DslError(str(exc), weights[0][3] if weights else 1) from None

    structure = {}
    for g in gen_list:
        eq = equations.get(g.name, {})
        if not eq:
            continue
        dl = _check_expr(bare, eq["del"]) if "del" in eq else bare.zero()
        dbl = _check_expr(bare, eq["delbar"]) if "delbar" in eq else bare.zero()
        if "d" in eq:
            total = _check_expr(bare, eq["d"])
            want = (g.bidegree[0] + 1, g.bidegree[1])
            for m, c in total.terms.items():
                part = {m: c}
                if bare.monomial_bidegree(m) == want:
                    dl = dl + AlgebraExpression(bare, part)
                else:
                    dbl = dbl + AlgebraExpression(bare, part)
        structure[g.name] = (bare.format(dl), bare.format(dbl))

    for _, item in basis:
        _check_expr(bare, item)
    for item in exprs.values():
        _check_expr(bare, item)
    act_data = {}
    for aname, aorder, pairs, ln in actions:
        gmap, wmap = {}, {}
        for src, img in pairs:
            if src.text in bare.weight_by_name:
                if img.text not in bare.weight_by_name:
                    raise DslError(f"weight {src.text} must map to a weight", img.line, img.col)
                wmap[src.text] = img.text
            elif src.text in bare.gen_index:
                _check_expr(bare, img)
                gmap[src.text] = img.text
            else:
                raise DslError(f"unknown generator {src.text!r}", src.line, src.col)
        act_data[aname] = {"map": gmap, "weights": wmap, "order": aorder}
    try:
        spec = DbaSpec(
            order, gen_list, structure, weight_objs,
            basis_restriction=[it.text for _, it in basis] if basis else None,
            basis_labels=[lab or it.text for lab, it in basis] if basis else None,
            expressions={k: it.text for k, it in exprs.items()},
            name=name,
        )
        for aname, data in act_data.items():
            ln = next(a[3] for a in actions if a[0] == aname)
            try:
                spec.add_action(aname, data["map"], data["weights"], data["order"])
            except DbaError as exc:
                raise DslError(str(exc), ln) from None
    except DslError:
        raise
    except DbaError as exc:
        raise DslError(str(exc), _guess_line(str(exc), gen_line)) from None
    return spec


def _guess_line(message: str, gen_line: dict[str, int]) -> int:
    """Line of the generator mentioned first in an error message (messages name the culprit first)."""
    best = None
    for gname, ln in gen_line.items():
        m = re.search(rf"(?<![\w]){re.escape(gname)}(?![\w])", message)
        if m and (best is None or m.start() < best[0]):
            best = (m.start(), ln)
    return best[1] if best else 1


def load_dsl(path) -> DbaSpec:
    with open(path, encoding="utf-8") as fh:
        return parse_dsl(fh.read())


# ---------------------------------------------------------------- JSON schema


def spec_to_dict(spec: DbaSpec) -> dict:
    """JSON-ready description of a presentation (inverse of :func:`spec_from_dict`)."""
    out = {
        "format_version": 1,
        "kind": "dba",
        "name": spec.name,
        "field_order": spec.field_order,
        "generators": [{"name": g.name, "bidegree": list(g.bidegree), "conj": g.conj} for g in spec.generators],
        "weights": [],
        "structure": {},
        "actions": {},
    }
    for w in spec.weights[1:]:
        W = spec.weight_by_name[w]
        out["weights"].append({
            "name": w, "conj": W.conj,
            "del": None if W.del_rule is None else [format_scalar(spec.F.lift(spec.F.lower(W.del_rule[0]))), W.del_rule[1]],
            "delbar": None if W.delbar_rule is None else [format_scalar(spec.F.lift(spec.F.lower(W.delbar_rule[0]))), W.delbar_rule[1]],
        })
    for g in spec.generators:
        dl, dbl = spec.structure_equation(g.name)
        out["structure"][g.name] = {"del": str(dl), "delbar": str(dbl)}
    for aname, act in spec.actions.items():
        gm = {}
        for i, (c, t) in act.gen_map.items():
            gm[spec.generators[i].name] = [format_scalar(spec.F.lift(c)), spec.generators[t].name]
        out["actions"][aname] = {"order": act.order, "map": gm,
                                 "weights": {a: b for a, b in act.weight_map.items() if a and a != b}}
    if spec.basis_restriction is not None:
        out["basis"] = [{"label": lab, "expr": str(e)} for lab, e in
                        zip(spec.basis_labels or [str(e) for e in spec.basis_restriction], spec.basis_restriction)]
    if spec.expressions:
        out["expressions"] = {k: str(v) for k, v in spec.expressions.items()}
    return out


def spec_from_dict(data: dict) -> DbaSpec:
    order = int(data["field_order"])
    gens = [Generator(g["name"], tuple(g["bidegree"]), g.get("conj")) for g in data["generators"]]
    weights = []
    for w in data.get("weights", []):
        rules = [None if w.get(k) is None else (parse_scalar(w[k][0], order), w[k][1]) for k in ("del", "delbar")]
        weights.append(Weight(w["name"], w.get("conj"), rules[0], rules[1]))
    structure = {k: (v.get("del"), v.get("delbar")) for k, v in data.get("structure", {}).items()}
    basis = data.get("basis")
    spec = DbaSpec(order, gens, structure, weights,
                   basis_restriction=[b["expr"] for b in basis] if basis else None,
                   basis_labels=[b["label"] for b in basis] if basis else None,
                   expressions=data.get("expressions"), name=data.get("name", ""))
    for aname, a in data.get("actions", {}).items():
        gm = {src: (parse_scalar(c, order), tgt) for src, (c, tgt) in a["map"].items()}
        spec.add_action(aname, gm, a.get("weights"), a.get("order"))
    return spec
