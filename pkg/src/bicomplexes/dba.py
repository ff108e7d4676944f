"""Differential bigraded algebras given by generators and structure equations.

A :class:`DbaSpec` lists exterior generators of bidegree (1,0) or (0,1),
optional weight symbols (formal functions such as exponentials) with their
own differentials, and the differentials of every generator.  It compiles to
a :class:`~bicomplexes.complex.Bicomplex` whose basis is the monomial basis,
or a user-chosen family of expressions spanning a subcomplex.

Monomials are pairs ``(weight, gens)`` with ``gens`` a strictly increasing
tuple of generator indices.  Generators of bidegree (1,0) come first, in
declaration order, then those of bidegree (0,1).
"""
from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field as dc_field
from typing import Iterable, Mapping, Sequence

from .complex import Bicomplex, RealStructure, validate
from .cyclotomic import CyclotomicScalar, format_scalar, parse_scalar
from .linalg import SparseMatrix, Subspace, field

__all__ = [
    "DbaError",
    "ExpressionSyntaxError",
    "Generator",
    "Weight",
    "AlgebraExpression",
    "MonomialAutomorphism",
    "BicomplexAction",
    "DbaSpec",
    "compile_spec",
    "eval_dd_bar",
    "isotypic",
    "induced_action",
    "real_structure",
    "complement_direct_summand_check",
]

Bidegree = tuple[int, int]
Monomial = tuple[str, tuple[int, ...]]
ONE_WEIGHT = ""


class DbaError(ValueError):
    """Malformed or inconsistent algebra presentation."""


class ExpressionSyntaxError(DbaError):
    def __init__(self, message: str, column: int) -> None:
        super().__init__(f"column {column}: {message}")
        self.column = column
        self.bare_message = message


@dataclass(frozen=True)
class Generator:
    name: str
    bidegree: Bidegree
    conj: str | None = None


@dataclass(frozen=True)
class Weight:
    """A weight symbol w with del w = c * w * gamma (and similarly delbar)."""

    name: str
    conj: str | None = None
    del_rule: tuple[object, str] | None = None
    delbar_rule: tuple[object, str] | None = None


def _sort_sign(seq: Sequence[int]):
    """(sorted tuple, sign) of a sequence of distinct indices, or None on repeats."""
    if len(set(seq)) != len(seq):
        return None
    arr = list(seq)
    sign = 1
    for i in range(1, len(arr)):
        j = i
        while j > 0 and arr[j - 1] > arr[j]:
            arr[j - 1], arr[j] = arr[j], arr[j - 1]
            sign = -sign
            j -= 1
    return tuple(arr), sign


class AlgebraExpression:
    """Linear combination of weighted exterior monomials, in canonical form."""

    __slots__ = ("spec", "terms")

    def __init__(self, spec: "DbaSpec", terms: Mapping[Monomial, object] | None = None) -> None:
        self.spec = spec
        F = spec.F
        clean = {}
        for m, c in (terms or {}).items():
            c = F.lower(c) if isinstance(c, (int, CyclotomicScalar)) else c
            if c:
                clean[m] = c
        self.terms = clean

    # structure

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def bidegrees(self) -> set[Bidegree]:
        return {self.spec.monomial_bidegree(m) for m in self.terms}

    @property
    def bidegree(self) -> Bidegree:
        bs = self.bidegrees()
        if len(bs) != 1:
            raise DbaError(f"expression {self} is not bidegree-homogeneous")
        return bs.pop()

    def coefficient(self, m: Monomial) -> CyclotomicScalar:
        F = self.spec.F
        return F.lift(self.terms.get(m, F.zero))

    # arithmetic

    def _check(self, other: "AlgebraExpression") -> None:
        if other.spec is not self.spec:
            raise DbaError("expressions over different algebras")

    def __add__(self, other):
        if not isinstance(other, AlgebraExpression):
            other = self.spec.scalar(other)
        self._check(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out[m] + c if m in out else c
        return AlgebraExpression(self.spec, out)

    __radd__ = __add__

    def __neg__(self):
        return AlgebraExpression(self.spec, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, s) -> "AlgebraExpression":
        s = self.spec.F.lower(s)
        return AlgebraExpression(self.spec, {m: c * s for m, c in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, AlgebraExpression):
            return self.spec.wedge(self, other)
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    __xor__ = __mul__

    def __eq__(self, other) -> bool:
        if isinstance(other, int) and other == 0:
            return not self.terms
        if not isinstance(other, AlgebraExpression):
            return NotImplemented
        return self.spec is other.spec and self.terms == other.terms

    def __hash__(self):
        return hash(tuple(sorted(self.terms)))

    def __str__(self) -> str:
        return self.spec.format(self)

    def __repr__(self) -> str:
        return f"AlgebraExpression({self.spec.format(self)!r})"


# ---------------------------------------------------------------- expression parser

_TOKEN = re.compile(r"\s*(?:(?P<num>\d+(?:/\d+)?)|(?P<id>[A-Za-z_][A-Za-z0-9_']*)|(?P<op>[-+*^()]))")


def _tokenize(text: str):
    pos, out = 0, []
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ExpressionSyntaxError(f"unexpected character {text[pos]!r}", pos + 1)
        kind = m.lastgroup
        start = m.start(kind)
        out.append((kind, m.group(kind), start + 1))
        pos = m.end()
    out.append(("end", "", len(text) + 1))
    return out


class _Parser:
    def __init__(self, spec: "DbaSpec", text: str) -> None:
        self.spec = spec
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i]

    def take(self):
        t = self.toks[self.i]
        self.i += 1
        return t

    def parse(self) -> AlgebraExpression:
        e = self.expr()
        kind, val, col = self.peek()
        if kind != "end":
            raise ExpressionSyntaxError(f"unexpected {val!r}", col)
        return e

    def expr(self) -> AlgebraExpression:
        sign = 1
        kind, val, _ = self.peek()
        if kind == "op" and val in "+-":
            self.take()
            sign = -1 if val == "-" else 1
        e = self.term()
        if sign < 0:
            e = -e
        while True:
            kind, val, _ = self.peek()
            if kind == "op" and val in "+-":
                self.take()
                t = self.term()
                e = e + t if val == "+" else e - t
            else:
                return e

    def term(self) -> AlgebraExpression:
        e = self.factor()
        while True:
            kind, val, _ = self.peek()
            if kind == "op" and val in "*^":
                self.take()
                e = self.spec.wedge(e, self.factor())
            else:
                return e

    def factor(self) -> AlgebraExpression:
        spec = self.spec
        kind, val, col = self.take()
        if kind == "num":
            return spec.scalar(parse_scalar(val, spec.field_order))
        if kind == "op" and val == "(":
            e = self.expr()
            k2, v2, c2 = self.take()
            if v2 != ")":
                raise ExpressionSyntaxError("expected ')'", c2)
            return e
        if kind == "op" and val == "-":
            return -self.factor()
        if kind == "id":
            if val in spec.gen_index:
                return spec.gen(val)
            if val in spec.weight_by_name:
                return spec.weight(val)
            if val == "i" and spec.field_order == 4:
                return spec.scalar(CyclotomicScalar.root_of_unity(4, 1))
            if val == "z":
                power = 1
                k2, v2, _ = self.peek()
                if k2 == "op" and v2 == "^" and self.toks[self.i + 1][0] == "num":
                    self.take()
                    power = int(self.take()[1])
                return spec.scalar(CyclotomicScalar.root_of_unity(spec.field_order, power))
            raise ExpressionSyntaxError(f"unknown generator {val!r}", col)
        if kind == "end":
            raise ExpressionSyntaxError("unexpected end of expression", col)
        raise ExpressionSyntaxError(f"unexpected {val!r}", col)


# ---------------------------------------------------------------- the presentation


class DbaSpec:
    """A presented differential bigraded algebra.

    ``structure`` maps generator names to ``(del, delbar)``, each an
    expression or expression text (``None`` or ``"0"`` for zero).  Generators
    with a declared conjugate partner and no equations of their own get them
    by conjugation: del(gbar) = conj(delbar g), delbar(gbar) = conj(del g).
    """

    def __init__(
        self,
        field_order: int,
        generators: Sequence[Generator],
        structure: Mapping[str, tuple] | None = None,
        weights: Sequence[Weight] = (),
        basis_restriction: Sequence | None = None,
        basis_labels: Sequence[str] | None = None,
        actions: Mapping[str, Mapping] | None = None,
        expressions: Mapping[str, str] | None = None,
        name: str = "",
    ) -> None:
        self.field_order = field_order
        self.F = field(field_order)
        self.name = name
        gens = list(generators)
        names = [g.name for g in gens]
        if len(set(names)) != len(names):
            raise DbaError("duplicate generator names")
        for g in gens:
            if g.bidegree not in ((1, 0), (0, 1)):
                raise DbaError(f"generator {g.name} must have bidegree (1,0) or (0,1), got {g.bidegree}")
        # complete conjugate pairing from either side
        partner = {g.name: g.conj for g in gens if g.conj}
        for a, b in list(partner.items()):
            if b not in names:
                raise DbaError(f"conjugate partner {b!r} of {a!r} is not a generator")
            if partner.setdefault(b, a) != a:
                raise DbaError(f"inconsistent conjugate partners for {b!r}")
        by_name = {g.name: g for g in gens}
        for a, b in partner.items():
            if by_name[a].bidegree[::-1] != by_name[b].bidegree:
                raise DbaError(f"conjugate partners {a!r} and {b!r} must have transposed bidegrees")
        self.partner = partner
        ordered = [g for g in gens if g.bidegree == (1, 0)] + [g for g in gens if g.bidegree == (0, 1)]
        self.generators = [Generator(g.name, g.bidegree, partner.get(g.name)) for g in ordered]
        self.gen_index = {g.name: i for i, g in enumerate(self.generators)}
        self.n_holo = sum(1 for g in self.generators if g.bidegree == (1, 0))

        wnames = [w.name for w in weights]
        if len(set(wnames)) != len(wnames) or ONE_WEIGHT in wnames or set(wnames) & set(names):
            raise DbaError("weight names must be distinct, nonempty and differ from generator names")
        wpartner = {w.name: w.conj for w in weights if w.conj}
        for a, b in list(wpartner.items()):
            if b not in wnames:
                raise DbaError(f"conjugate partner {b!r} of weight {a!r} is not declared")
            wpartner.setdefault(b, a)
        self.weight_partner = wpartner
        self.weight_by_name: dict[str, Weight] = {}
        for w in weights:
            self.weight_by_name[w.name] = Weight(w.name, wpartner.get(w.name), w.del_rule, w.delbar_rule)
        for w in weights:
            if w.conj and w.del_rule is None and w.delbar_rule is None:
                src = next(x for x in weights if x.name == w.conj)
                self.weight_by_name[w.name] = Weight(
                    w.name, w.conj,
                    _conj_rule(src.delbar_rule, partner, field_order),
                    _conj_rule(src.del_rule, partner, field_order))
        for w in self.weight_by_name.values():
            for rule, bideg in ((w.del_rule, (1, 0)), (w.delbar_rule, (0, 1))):
                if rule is not None and by_name[rule[1]].bidegree != bideg:
                    raise DbaError(f"weight rule of {w.name} uses {rule[1]} of the wrong bidegree")
        self.weights = [ONE_WEIGHT] + list(wnames)

        # structure equations
        self._d: dict[tuple[int, int], AlgebraExpression] = {}
        structure = dict(structure or {})
        unknown = set(structure) - set(names)
        if unknown:
            raise DbaError(f"structure equations for unknown generators {sorted(unknown)}")
        for g in self.generators:
            if g.name in structure:
                dl, dbl = structure[g.name]
                self._set_structure(g.name, dl, dbl)
        for g in self.generators:
            if g.name not in structure:
                src = partner.get(g.name)
                if src is not None and src in structure:
                    i = self.gen_index[src]
                    self._set_structure(g.name, self.conjugate(self._d[(1, i)]), self.conjugate(self._d[(0, i)]))
                else:
                    self._set_structure(g.name, None, None)
        self._check_d_squared()
        self._mono_cache: dict = {}

        self.basis_labels = list(basis_labels) if basis_labels else None
        self.basis_restriction = None
        if basis_restriction is not None:
            self.basis_restriction = [self.expr(e) if isinstance(e, str) else e for e in basis_restriction]
            if self.basis_labels and len(self.basis_labels) != len(self.basis_restriction):
                raise DbaError("basis_labels must match basis_restriction in length")

        self.actions: dict[str, MonomialAutomorphism] = {}
        for aname, data in (actions or {}).items():
            self.add_action(aname, data.get("map", {}), data.get("weights"), data.get("order"))
        self.expressions = {k: (self.expr(v) if isinstance(v, str) else v) for k, v in (expressions or {}).items()}

    # construction helpers

    def _set_structure(self, name, dl, dbl) -> None:
        i = self.gen_index[name]
        g = self.generators[i]
        for kind, e, want in ((0, dl, (g.bidegree[0] + 1, g.bidegree[1])), (1, dbl, (g.bidegree[0], g.bidegree[1] + 1))):
            if e is None:
                e = self.zero()
            elif isinstance(e, str):
                e = self.expr(e)
            if e and e.bidegrees() != {want}:
                op = "del" if kind == 0 else "delbar"
                raise DbaError(f"{op} {name} = {e} is not of bidegree {want}")
            self._d[(kind, i)] = e

    def _check_d_squared(self) -> None:
        for g in self.generators:
            e = self.gen(g.name)
            for label, val in (("del^2", self.del_(self.del_(e))), ("delbar^2", self.delbar(self.delbar(e))),
                               ("del delbar + delbar del", self.del_(self.delbar(e)) + self.delbar(self.del_(e)))):
                if val:
                    raise DbaError(f"{label} of {g.name} is {val}, not zero")
        for w in self.weights[1:]:
            e = self.weight(w)
            for label, val in (("del^2", self.del_(self.del_(e))), ("delbar^2", self.delbar(self.delbar(e))),
                               ("del delbar + delbar del", self.del_(self.delbar(e)) + self.delbar(self.del_(e)))):
                if val:
                    raise DbaError(f"{label} of weight {w} is {val}, not zero")

    def add_action(self, name: str, mapping: Mapping, weight_map: Mapping | None = None, order: int | None = None):
        act = MonomialAutomorphism(self, name, mapping, weight_map or {}, order)
        self.actions[name] = act
        return act

    # elementary expressions

    def zero(self) -> AlgebraExpression:
        return AlgebraExpression(self, {})

    def scalar(self, s) -> AlgebraExpression:
        return AlgebraExpression(self, {(ONE_WEIGHT, ()): self.F.lower(s)})

    def gen(self, name: str) -> AlgebraExpression:
        if name not in self.gen_index:
            raise DbaError(f"unknown generator {name!r}")
        return AlgebraExpression(self, {(ONE_WEIGHT, (self.gen_index[name],)): self.F.one})

    def weight(self, name: str) -> AlgebraExpression:
        if name not in self.weight_by_name:
            raise DbaError(f"unknown weight {name!r}")
        return AlgebraExpression(self, {(name, ()): self.F.one})

    def monomial(self, names: Sequence[str], weight: str = ONE_WEIGHT) -> AlgebraExpression:
        e = self.weight(weight) if weight else self.scalar(1)
        for n in names:
            e = self.wedge(e, self.gen(n))
        return e

    def expr(self, text: str) -> AlgebraExpression:
        return _Parser(self, text).parse()

    def monomial_bidegree(self, m: Monomial) -> Bidegree:
        p = sum(1 for i in m[1] if i < self.n_holo)
        return (p, len(m[1]) - p)

    def monomial_label(self, m: Monomial) -> str:
        body = "^".join(self.generators[i].name for i in m[1])
        if m[0]:
            return f"{m[0]}*{body}" if body else m[0]
        return body or "1"

    def format(self, e: AlgebraExpression) -> str:
        if not e.terms:
            return "0"
        parts = []
        F = self.F
        for m in sorted(e.terms, key=lambda m: (self.monomial_bidegree(m), m)):
            c = format_scalar(F.lift(e.terms[m]))
            lab = self.monomial_label(m)
            if lab == "1":
                s = c
            elif c == "1":
                s = lab
            elif c == "-1":
                s = "-" + lab
            elif re.fullmatch(r"-?\d+(/\d+)?", c):
                s = f"{c}*{lab}"
            else:
                s = f"({c})*{lab}"
            parts.append(s)
        out = parts[0]
        for s in parts[1:]:
            out += " - " + s[1:] if s.startswith("-") else " + " + s
        return out

    # products and differentials

    def _weight_product(self, a: str, b: str) -> str:
        if not a:
            return b
        if not b:
            return a
        raise DbaError(f"product of weights {a!r} and {b!r} is not declared")

    def wedge(self, x: AlgebraExpression, y: AlgebraExpression) -> AlgebraExpression:
        out: dict = {}
        for (wa, ga), ca in x.terms.items():
            for (wb, gb), cb in y.terms.items():
                ss = _sort_sign(ga + gb)
                if ss is None:
                    continue
                mono = (self._weight_product(wa, wb), ss[0])
                v = ca * cb if ss[1] > 0 else -(ca * cb)
                out[mono] = out[mono] + v if mono in out else v
        return AlgebraExpression(self, out)

    def _d_monomial(self, m: Monomial, kind: int) -> dict:
        key = (m, kind)
        cached = self._mono_cache.get(key) if hasattr(self, "_mono_cache") else None
        if cached is not None:
            return cached
        w, gens = m
        out: dict = {}

        def add(mono, v):
            if mono in out:
                nv = out[mono] + v
                if nv:
                    out[mono] = nv
                else:
                    del out[mono]
            elif v:
                out[mono] = v

        if w:
            rule = self.weight_by_name[w].del_rule if kind == 0 else self.weight_by_name[w].delbar_rule
            if rule is not None:
                c = self.F.lower(rule[0])
                ss = _sort_sign((self.gen_index[rule[1]],) + gens)
                if ss is not None:
                    add((w, ss[0]), c if ss[1] > 0 else -c)
        for pos, g in enumerate(gens):
            dg = self._d[(kind, g)]
            if not dg.terms:
                continue
            sign = -1 if pos % 2 else 1
            for (wd, hd), c in dg.terms.items():
                ss = _sort_sign(gens[:pos] + hd + gens[pos + 1:])
                if ss is None:
                    continue
                add((self._weight_product(w, wd), ss[0]), c if sign * ss[1] > 0 else -c)
        if hasattr(self, "_mono_cache"):
            self._mono_cache[key] = out
        return out

    def _apply_d(self, e: AlgebraExpression, kind: int) -> AlgebraExpression:
        out: dict = {}
        for m, c in e.terms.items():
            for mono, v in self._d_monomial(m, kind).items():
                out[mono] = out[mono] + c * v if mono in out else c * v
        return AlgebraExpression(self, out)

    def del_(self, e: AlgebraExpression) -> AlgebraExpression:
        return self._apply_d(e, 0)

    def delbar(self, e: AlgebraExpression) -> AlgebraExpression:
        return self._apply_d(e, 1)

    def d(self, e: AlgebraExpression) -> AlgebraExpression:
        return self.del_(e) + self.delbar(e)

    def structure_equation(self, name: str) -> tuple[AlgebraExpression, AlgebraExpression]:
        i = self.gen_index[name]
        return self._d[(0, i)], self._d[(1, i)]

    # conjugation

    def has_full_conjugation(self) -> bool:
        return all(g.name in self.partner for g in self.generators) and all(
            w in self.weight_partner for w in self.weights[1:])

    def _conj_monomial(self, m: Monomial):
        w, gens = m
        try:
            cw = self.weight_partner[w] if w else ONE_WEIGHT
            seq = [self.gen_index[self.partner[self.generators[i].name]] for i in gens]
        except KeyError as exc:
            raise DbaError(f"no conjugate declared for {exc.args[0]!r}") from None
        srt, sign = _sort_sign(seq)
        return (cw, srt), sign

    def conjugate(self, e: AlgebraExpression) -> AlgebraExpression:
        out = {}
        for m, c in e.terms.items():
            cm, sign = self._conj_monomial(m)
            v = self.F.conj(c)
            out[cm] = v if sign > 0 else -v
        return AlgebraExpression(self, out)

    # enumeration

    def monomials(self, p: int, q: int, weights: Iterable[str] | None = None) -> list[Monomial]:
        holo = range(self.n_holo)
        anti = range(self.n_holo, len(self.generators))
        out = []
        for w in (self.weights if weights is None else weights):
            for a in itertools.combinations(holo, p):
                for b in itertools.combinations(anti, q):
                    out.append((w, a + b))
        return out

    def compile(self, window: int | None = None, check: bool = True) -> Bicomplex:
        return compile_spec(self, window, check)


def _conj_rule(rule, partner, order):
    if rule is None:
        return None
    c, g = rule
    c = c if isinstance(c, CyclotomicScalar) else CyclotomicScalar.rational(order, c)
    return (c.conjugate(), partner[g])


# ---------------------------------------------------------------- coordinates


class _Coordinates:
    """Express vectors (dicts keyed by monomials) in a fixed independent family."""

    def __init__(self, F, family: Sequence[dict]) -> None:
        self.F = F
        self.n = len(family)
        self.rows: dict = {}
        for i, v in enumerate(family):
            v, t = dict(v), {i: F.one}
            self._reduce(v, t)
            if not v:
                raise DbaError("basis_restriction elements are linearly dependent")
            piv = min(v)
            inv = F.one / v[piv]
            self.rows[piv] = ({k: x * inv for k, x in v.items()}, {k: x * inv for k, x in t.items()})

    def _reduce(self, v: dict, t: dict) -> None:
        F = self.F
        while True:
            hit = [k for k in v if k in self.rows]
            if not hit:
                return
            k = min(hit)
            f = v[k]
            rv, rt = self.rows[k]
            for kk, x in rv.items():
                nv = v.get(kk, F.zero) - f * x
                if nv:
                    v[kk] = nv
                else:
                    v.pop(kk, None)
            for kk, x in rt.items():
                nv = t.get(kk, F.zero) - f * x
                if nv:
                    t[kk] = nv
                else:
                    t.pop(kk, None)

    def coords(self, vec: dict) -> dict | None:
        v, t = dict(vec), {}
        self._reduce(v, t)
        if v:
            return None
        return {k: -x for k, x in t.items()}


def _coord_key(spec: DbaSpec):
    return lambda m: (m[0], m[1])


# ---------------------------------------------------------------- compilation


def compile_spec(spec: DbaSpec, window: int | None = None, check: bool = True) -> Bicomplex:
    """Compile to a Bicomplex.

    ``window`` bounds the total degree: bidegrees with p+q <= window are
    emitted, and differentials leaving degree ``window`` are omitted.  The
    result then carries ``max_degree = window``.
    """
    F = spec.F
    order = spec.field_order
    N = len(spec.generators)
    top = N if window is None else min(window, N)
    bases: dict[Bidegree, list[AlgebraExpression]] = {}
    labels: dict[Bidegree, list[str]] = {}
    coords: dict[Bidegree, object] = {}
    if spec.basis_restriction is None:
        for k in range(top + 1):
            for p in range(0, min(k, spec.n_holo) + 1):
                q = k - p
                if q > N - spec.n_holo:
                    continue
                monos = spec.monomials(p, q)
                if monos:
                    bases[(p, q)] = [AlgebraExpression(spec, {m: F.one}) for m in monos]
                    labels[(p, q)] = [spec.monomial_label(m) for m in monos]
                    coords[(p, q)] = {m: i for i, m in enumerate(monos)}
    else:
        grouped: dict[Bidegree, list[int]] = {}
        for i, e in enumerate(spec.basis_restriction):
            grouped.setdefault(e.bidegree, []).append(i)
        for b in sorted(grouped):
            if window is not None and sum(b) > window:
                continue
            idx = grouped[b]
            bases[b] = [spec.basis_restriction[i] for i in idx]
            labels[b] = [spec.basis_labels[i] if spec.basis_labels else str(spec.basis_restriction[i]) for i in idx]
            coords[b] = _Coordinates(F, [e.terms for e in bases[b]])

    def locate(b, terms, what):
        c = coords.get(b)
        if c is None:
            if terms:
                raise DbaError(f"{what} lands in bidegree {b}, which has no basis")
            return {}
        if isinstance(c, dict):
            out = {}
            for m, v in terms.items():
                if m not in c:
                    raise DbaError(f"{what} leaves the compiled basis at {b}")
                out[c[m]] = v
            return out
        res = c.coords(terms)
        if res is None:
            raise DbaError(f"{what} is not in the span of the chosen basis at {b}")
        return res

    dims = {b: len(v) for b, v in bases.items()}
    dl, dbl = {}, {}
    for (p, q), elems in bases.items():
        if window is not None and p + q >= window:
            continue
        for kind, tgt, store in ((0, (p + 1, q), dl), (1, (p, q + 1), dbl)):
            rows: dict[int, dict] = {}
            for j, e in enumerate(elems):
                img = spec._apply_d(e, kind)
                for i, v in locate(tgt, img.terms, f"d of {labels[(p, q)][j]}").items():
                    rows.setdefault(i, {})[j] = v
            if rows:
                store[(p, q)] = SparseMatrix(dims.get(tgt, 0), len(elems), order,
                                             [rows.get(i, {}) for i in range(dims.get(tgt, 0))])
    A = Bicomplex(order, dims, dl, dbl, labels, basis=bases, max_degree=window)
    if check:
        rep = validate(A)
        if not rep:
            raise DbaError(f"compiled complex is not a double complex: {rep.message}")
    return A


def eval_dd_bar(spec: DbaSpec, expr: AlgebraExpression | str) -> AlgebraExpression:
    """del delbar of an expression, in canonical form."""
    if isinstance(expr, str):
        expr = spec.expr(expr)
    if expr.spec is not spec:
        raise DbaError("expression belongs to a different algebra")
    return spec.del_(spec.delbar(expr))


# ---------------------------------------------------------------- automorphisms


class MonomialAutomorphism:
    """Algebra automorphism sending each generator to a scalar times a generator.

    Images of conjugate partners not listed explicitly are derived:
    sigma(gbar) = conj(c) * conj(g') when sigma(g) = c * g'.
    """

    def __init__(self, spec: DbaSpec, name: str, mapping: Mapping, weight_map: Mapping | None = None,
                 order: int | None = None) -> None:
        self.spec = spec
        self.name = name
        F = spec.F
        gmap: dict[int, tuple[object, int]] = {}
        for src, img in mapping.items():
            if src not in spec.gen_index:
                raise DbaError(f"action {name}: unknown generator {src!r}")
            if isinstance(img, str):
                img = spec.expr(img)
            if isinstance(img, AlgebraExpression):
                if len(img.terms) != 1:
                    raise DbaError(f"action {name}: image of {src} must be a scalar times a generator")
                (w, gens), c = next(iter(img.terms.items()))
                if w or len(gens) != 1:
                    raise DbaError(f"action {name}: image of {src} must be a scalar times a generator")
                img = (c, gens[0])
            else:
                c, tgt = img
                img = (F.lower(c), spec.gen_index[tgt])
            gmap[spec.gen_index[src]] = img
        for i, g in enumerate(spec.generators):
            if i in gmap:
                continue
            src = spec.partner.get(g.name)
            if src is not None and spec.gen_index[src] in gmap:
                c, t = gmap[spec.gen_index[src]]
                gmap[i] = (F.conj(c), spec.gen_index[spec.partner[spec.generators[t].name]])
            else:
                gmap[i] = (F.one, i)
        for i, (c, t) in gmap.items():
            if spec.generators[i].bidegree != spec.generators[t].bidegree:
                raise DbaError(f"action {name} does not preserve bidegrees")
            if not c:
                raise DbaError(f"action {name} sends {spec.generators[i].name} to zero")
        wmap = {w: w for w in spec.weights}
        for a, b in (weight_map or {}).items():
            wmap[a] = b
        self.gen_map = gmap
        self.weight_map = wmap
        self._check_commutes()
        self.order = order if order is not None else self._find_order()
        if not self._power_is_identity(self.order):
            raise DbaError(f"action {name}: declared order {self.order} but sigma^{self.order} != id")

    def apply_monomial(self, m: Monomial):
        F = self.spec.F
        w, gens = m
        coef = F.one
        seq = []
        for g in gens:
            c, t = self.gen_map[g]
            coef = coef * c
            seq.append(t)
        srt, sign = _sort_sign(seq)
        return (self.weight_map[w], srt), (coef if sign > 0 else -coef)

    def __call__(self, e: AlgebraExpression) -> AlgebraExpression:
        out = {}
        for m, c in e.terms.items():
            nm, f = self.apply_monomial(m)
            out[nm] = out[nm] + c * f if nm in out else c * f
        return AlgebraExpression(self.spec, out)

    def _check_commutes(self) -> None:
        spec = self.spec
        items = [spec.gen(g.name) for g in spec.generators] + [spec.weight(w) for w in spec.weights[1:]]
        for e in items:
            for op in (spec.del_, spec.delbar):
                if self(op(e)) != op(self(e)):
                    raise DbaError(f"action {self.name} does not commute with the differentials on {e}")

    def _power_is_identity(self, m: int) -> bool:
        spec = self.spec
        for g in spec.generators:
            e = spec.gen(g.name)
            x = e
            for _ in range(m):
                x = self(x)
            if x != e:
                return False
        for w in spec.weights:
            x = w
            for _ in range(m):
                x = self.weight_map[x]
            if x != w:
                return False
        return True

    def _find_order(self, limit: int = 64) -> int:
        for m in range(1, limit + 1):
            if self._power_is_identity(m):
                return m
        raise DbaError(f"action {self.name} has order > {limit}")


@dataclass
class BicomplexAction:
    """A finite cyclic action on a Bicomplex: one matrix per bidegree for the generator."""

    order: int
    matrices: dict[Bidegree, SparseMatrix]

    def matrix(self, A: Bicomplex, b: Bidegree) -> SparseMatrix:
        return self.matrices.get(b) or SparseMatrix.identity(A.dim(*b), A.field_order)

    def check(self, A: Bicomplex) -> bool:
        for b in A.support:
            S = self.matrix(A, b)
            for M, tgt in ((A.del_(*b), (b[0] + 1, b[1])), (A.delbar(*b), (b[0], b[1] + 1))):
                if A.dim(*tgt) and self.matrix(A, tgt) @ M != M @ S:
                    return False
        return True


def induced_action(A: Bicomplex, action: MonomialAutomorphism) -> BicomplexAction:
    """Matrices of an algebra automorphism on the basis of a compiled complex."""
    if A.basis is None:
        raise DbaError("complex was not compiled from an algebra presentation")
    spec = action.spec
    F = spec.F
    mats = {}
    for b, elems in A.basis.items():
        if elems and elems[0].spec is not spec:
            raise DbaError("action belongs to a different algebra than the compiled complex")
        coords = _Coordinates(F, [e.terms for e in elems])
        rows: dict[int, dict] = {}
        for j, e in enumerate(elems):
            img = coords.coords(action(e).terms)
            if img is None:
                raise DbaError(f"action {action.name} does not preserve the compiled basis at {b}")
            for i, v in img.items():
                rows.setdefault(i, {})[j] = v
        mats[b] = SparseMatrix(len(elems), len(elems), A.field_order, [rows.get(i, {}) for i in range(len(elems))])
    return BicomplexAction(action.order, mats)


def real_structure(A: Bicomplex, spec: DbaSpec) -> RealStructure:
    """Conjugation on a compiled complex, as an antilinear map A^{p,q} -> A^{q,p}."""
    if A.basis is None:
        raise DbaError("complex was not compiled from an algebra presentation")
    if not spec.has_full_conjugation():
        raise DbaError("not every generator and weight has a conjugate partner")
    F = spec.F
    maps = {}
    for (p, q), elems in A.basis.items():
        tgt = A.basis.get((q, p))
        if tgt is None:
            raise DbaError(f"conjugation leaves the compiled basis at {(p, q)}")
        coords = _Coordinates(F, [e.terms for e in tgt])
        rows: dict[int, dict] = {}
        for j, e in enumerate(elems):
            img = coords.coords(spec.conjugate(e).terms)
            if img is None:
                raise DbaError(f"conjugate of {e} is not in the compiled basis at {(q, p)}")
            for i, v in img.items():
                rows.setdefault(i, {})[j] = v
        maps[(p, q)] = SparseMatrix(len(tgt), len(elems), A.field_order, [rows.get(i, {}) for i in range(len(tgt))])
    return RealStructure(maps)


def _character_root(order: int, m: int):
    F = field(order)
    if m == 1:
        return F.one
    if m == 2:
        return -F.one
    if order % m:
        raise DbaError(f"characters of a group of order {m} need Q(z_{m}), not available in Q(z_{order})")
    return F.root(order // m)


def isotypic(A: Bicomplex, action, character_index: int = 0) -> Bicomplex:
    """The chi_j-isotypic subcomplex, chi_j(sigma) = z_m^j, via the averaging projector."""
    if isinstance(action, MonomialAutomorphism):
        action = induced_action(A, action)
    if not action.check(A):
        raise DbaError("the action does not commute with the differentials")
    m = action.order
    F = field(A.field_order)
    zeta = _character_root(A.field_order, m)
    chi_inv = F.one / (zeta ** (character_index % m)) if character_index % m else F.one
    inv_m = F.one / F.lower(m)
    images: dict[Bidegree, Subspace] = {}
    for b in A.support:
        n = A.dim(*b)
        S = action.matrix(A, b)
        acc = SparseMatrix.zero(n, n, A.field_order)
        power = SparseMatrix.identity(n, A.field_order)
        coef = F.one
        for _ in range(m):
            acc = acc + power.scale(F.lift(coef * inv_m))
            power = S @ power
            coef = coef * chi_inv
        images[b] = Subspace.span(acc.column_data(), n, A.field_order)
    dims = {b: V.dim for b, V in images.items() if V.dim}
    labels, basis = {}, {}

    def restrict(M, src, tgt):
        cols = []
        for v in images[src].vectors:
            w = M.apply(v)
            cols.append({i: w.get(piv, F.zero) for i, piv in enumerate(images[tgt].pivots) if w.get(piv)})
        return SparseMatrix.from_columns(cols, images[tgt].dim, A.field_order)

    dl, dbl = {}, {}
    for b in dims:
        for M, tgt, store in ((A.del_(*b), (b[0] + 1, b[1]), dl), (A.delbar(*b), (b[0], b[1] + 1), dbl)):
            if tgt in dims and not M.is_zero():
                store[b] = restrict(M, b, tgt)
        vecs = images[b].vectors
        if A.labels:
            labels[b] = [A.label(*b, next(iter(v))) if len(v) == 1 else
                         " + ".join(f"{format_scalar(F.lift(x))}*{A.label(*b, i)}" for i, x in sorted(v.items()))
                         for v in vecs]
        if A.basis is not None:
            elems = A.basis[b]
            basis[b] = [sum((elems[i].scale(F.lift(x)) for i, x in sorted(v.items())), elems[0].spec.zero())
                        for v in vecs]
    return Bicomplex(A.field_order, dims, dl, dbl, labels, basis or None, A.max_degree)


# ---------------------------------------------------------------- direct summands


def complement_direct_summand_check(spec: DbaSpec, distinguished: Sequence[AlgebraExpression | str]) -> bool:
    """Whether span(distinguished) has a complementary sub double complex.

    The complement is spanned by monomials: everywhere except at the pivot
    monomials of an echelon form of the distinguished elements.  Closure of the
    complement is verified only on monomials whose differential can reach a
    pivot monomial, found by undoing the Leibniz rule, so the full algebra is
    never enumerated.  Raises :class:`DbaError` if the distinguished elements
    do not span a subcomplex.
    """
    F = spec.F
    elems = [spec.expr(e) if isinstance(e, str) else e for e in distinguished]
    by_bideg: dict[Bidegree, list[AlgebraExpression]] = {}
    for e in elems:
        by_bideg.setdefault(e.bidegree, []).append(e)
    coords = {b: _Coordinates(F, [e.terms for e in es]) for b, es in by_bideg.items()}
    for e in elems:
        for op, name in ((spec.del_, "del"), (spec.delbar, "delbar")):
            img = op(e)
            if not img:
                continue
            b = img.bidegree
            if b not in coords or coords[b].coords(img.terms) is None:
                raise DbaError(f"{name} of {e} = {img} is not in the span of the distinguished elements")
    pivots: set[Monomial] = set()
    for b, c in coords.items():
        pivots.update(c.rows.keys())

    # reverse Leibniz: monomials m whose del or delbar may contain a pivot monomial
    candidates: set[Monomial] = set()
    for (w, gens) in pivots:
        gset = set(gens)
        for kind in (0, 1):
            for g in range(len(spec.generators)):
                dg = spec._d[(kind, g)]
                for (wd, hd), _ in dg.terms.items():
                    if not set(hd) <= gset:
                        continue
                    if wd and wd != w:
                        continue
                    rest = gset - set(hd)
                    if g in rest:
                        continue
                    candidates.add((ONE_WEIGHT if wd else w, tuple(sorted(rest | {g}))))
            if w:
                rule = spec.weight_by_name[w].del_rule if kind == 0 else spec.weight_by_name[w].delbar_rule
                if rule is not None and spec.gen_index[rule[1]] in gset:
                    candidates.add((w, tuple(sorted(gset - {spec.gen_index[rule[1]]}))))
    for m in candidates:
        if m in pivots:
            continue
        for kind in (0, 1):
            if any(t in pivots for t in spec._d_monomial(m, kind)):
                return False
    return True
