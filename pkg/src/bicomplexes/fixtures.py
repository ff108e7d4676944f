"""Built-in double complexes: the worked examples and a few elementary models.

Algebraic examples are written in the presentation DSL (see :mod:`bicomplexes.dsl`)
and compiled on demand; elementary manifolds are sums of dots.  Use
:func:`fixture` for the complex alone and :func:`fixture_data` for the
complex together with its presentation, real structure, action and metric.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Callable

from .complex import Bicomplex, RealStructure, blowup_model, direct_sum, dot, dots, shift
from .dba import AlgebraExpression, BicomplexAction, DbaSpec, induced_action, isotypic, real_structure
from .dsl import parse_dsl
from .linalg import SparseMatrix

__all__ = [
    "FixtureData",
    "FixtureError",
    "FIXTURES",
    "fixture",
    "fixture_data",
    "fixture_names",
    "nakamura_spec",
    "construction2_spec",
    "br_spec",
    "br_skt_spec",
    "nakamura_invariant",
    "construction2",
    "construction2_sigma",
    "br",
    "br_sigma",
    "br_skt",
    "resolution_Mb",
    "resolution_Mb_reference",
    "point",
    "elliptic_curve",
    "projective_space",
    "k3_model",
    "DEFAULT_CURVE_HODGE",
]


class FixtureError(ValueError):
    """Unknown fixture name or invalid parameters."""


@dataclass
class FixtureData:
    complex: Bicomplex
    spec: DbaSpec | None = None
    real: RealStructure | None = None
    action: BicomplexAction | None = None
    metric: AlgebraExpression | None = None


# ---------------------------------------------------------------- invariant Nakamura model

# Weights stand for e^{-2z1}, e^{2z1} and their conjugates.
_NAKAMURA_HEAD = """\
name nakamura
gen z1 (1,0) conj=z1bar
gen z2 (1,0) conj=z2bar
gen z3 (1,0) conj=z3bar
gen z1bar (0,1)
gen z2bar (0,1)
gen z3bar (0,1)
weight em conj=emb : del = -2*em*z1
weight ep conj=epb : del = 2*ep*z1
weight emb : delbar = -2*emb*z1bar
weight epb : delbar = 2*epb*z1bar
"""

# Basis of the invariant complex, bidegree by bidegree.  The weighted
# combinations in bidegrees (2,1), (1,2), (2,2) that are images carry a minus
# sign: that is what the Leibniz rule produces from the (1,1) and (2,1)/(1,2)
# generators, and it is the only choice making the span a subcomplex.
_NAKAMURA_PLAIN = [
    ("1", "1"),
    ("dz_{23}", "z2^z3"),
    ("dz_{1 1b}", "z1^z1bar"),
    ("dz_{2b 3b}", "z2bar^z3bar"),
    ("dz_{13 2b} + dz_{12 3b}", "z1^z3^z2bar + z1^z2^z3bar"),
    ("dz_{3 1b2b} + dz_{2 1b3b}", "z3^z1bar^z2bar + z2^z1bar^z3bar"),
    ("dz_{123 1b}", "z1^z2^z3^z1bar"),
    ("dz_{23 2b3b}", "z2^z3^z2bar^z3bar"),
    ("dz_{1 1b2b3b}", "z1^z1bar^z2bar^z3bar"),
    ("dz_{123 1b2b3b}", "z1^z2^z3^z1bar^z2bar^z3bar"),
]
_NAKAMURA_WEIGHTED = [
    ("e^{-2z1}dz_{2 2b} + e^{2z1}dz_{3 3b}", "em*z2^z2bar + ep*z3^z3bar"),
    ("e^{-2z1b}dz_{2 2b} + e^{2z1b}dz_{3 3b}", "emb*z2^z2bar + epb*z3^z3bar"),
    ("e^{-2z1}dz_{12 2b} - e^{2z1}dz_{13 3b}", "em*z1^z2^z2bar - ep*z1^z3^z3bar"),
    ("e^{-2z1b}dz_{12 2b} + e^{2z1b}dz_{13 3b}", "emb*z1^z2^z2bar + epb*z1^z3^z3bar"),
    ("e^{-2z1b}dz_{2 1b2b} - e^{2z1b}dz_{3 1b3b}", "emb*z2^z1bar^z2bar - epb*z3^z1bar^z3bar"),
    ("e^{-2z1}dz_{2 1b2b} + e^{2z1}dz_{3 1b3b}", "em*z2^z1bar^z2bar + ep*z3^z1bar^z3bar"),
    ("e^{-2z1}dz_{12 1b2b} - e^{2z1}dz_{13 1b3b}", "em*z1^z2^z1bar^z2bar - ep*z1^z3^z1bar^z3bar"),
    ("e^{-2z1b}dz_{12 1b2b} - e^{2z1b}dz_{13 1b3b}", "emb*z1^z2^z1bar^z2bar - epb*z1^z3^z1bar^z3bar"),
]


def _check_case(case: int) -> None:
    if case not in (1, 2, 3):
        raise FixtureError(f"nakamura case must be 1, 2 or 3, got {case!r}")


@lru_cache(maxsize=None)
def nakamura_spec(case: int = 1) -> DbaSpec:
    _check_case(case)
    rows = _NAKAMURA_PLAIN + (_NAKAMURA_WEIGHTED if case in (1, 2) else [])
    text = _NAKAMURA_HEAD + "".join(f"basis {lab}: {e}\n" for lab, e in rows)
    return parse_dsl(text)


@lru_cache(maxsize=None)
def _nakamura_data(case: int) -> FixtureData:
    spec = nakamura_spec(case)
    A = spec.compile()
    return FixtureData(A, spec, real_structure(A, spec))


def nakamura_invariant(case: int = 1) -> Bicomplex:
    """The sigma-invariant part of the Dolbeault model of the solvmanifold, per case."""
    return _nakamura_data(case).complex


# ---------------------------------------------------------------- second construction

_CONSTRUCTION2 = """\
name construction2
field 4
gen w1 (1,0) conj=w1bar
gen w2 (1,0) conj=w2bar
gen w3 (1,0) conj=w3bar; d = w1^w2bar + w1bar^w2
gen w4 (1,0) conj=w4bar
gen w1bar (0,1)
gen w2bar (0,1)
gen w3bar (0,1); d = w1^w2bar + w1bar^w2
gen w4bar (0,1)
act sigma order=4: w1 -> i*w1, w2 -> -i*w2, w3 -> -w3, w4 -> -w4
"""


@lru_cache(maxsize=None)
def construction2_spec() -> DbaSpec:
    return parse_dsl(_CONSTRUCTION2)


@lru_cache(maxsize=None)
def _construction2_data() -> FixtureData:
    spec = construction2_spec()
    A = spec.compile()
    return FixtureData(A, spec, real_structure(A, spec), induced_action(A, spec.actions["sigma"]))


def construction2() -> Bicomplex:
    """The full exterior algebra model on w1..w4 and conjugates."""
    return _construction2_data().complex


@lru_cache(maxsize=None)
def _construction2_sigma_data() -> FixtureData:
    full = _construction2_data()
    B = isotypic(full.complex, full.action, 0)
    spec = full.spec
    return FixtureData(B, spec, real_structure(B, spec))


def construction2_sigma() -> Bicomplex:
    """Invariants of the order-4 automorphism sigma."""
    return _construction2_sigma_data().complex


# ---------------------------------------------------------------- BR family


def _br_lines(n: int, skt: bool) -> list[str]:
    if n < 2:
        raise FixtureError(f"the BR family needs n >= 2, got {n!r}")
    hol = ([f"dx{i}" for i in range(1, n)] + [f"dy{i}" for i in range(1, n + 1)]
           + [f"dz{i}" for i in range(1, n)] + [f"w{i}" for i in range(1, n + 1)])
    if skt:
        hol += [f"theta{i}" for i in range(1, n)] + [f"eta{i}" for i in range(1, n)]
    eqs = {"w1": "delbar = dz1^dy1bar"}
    for i in range(2, n + 1):
        eqs[f"w{i}"] = f"del = dx{i - 1}^dy{i}; delbar = dy{i - 1}^dz{i - 1}bar"
    if skt:
        for i in range(1, n):
            eqs[f"theta{i}"] = f"delbar = dy{i}^dy{i}bar + dz{i}^dz{i}bar"
            eqs[f"eta{i}"] = f"delbar = dy{i + 1}^dy{i + 1}bar + dx{i}^dx{i}bar"
    lines = [f"name br{'_skt' if skt else ''}({n})", "field 4"]
    for g in hol:
        lines.append(f"gen {g} (1,0) conj={g}bar" + (f"; {eqs[g]}" if g in eqs else ""))
    lines += [f"gen {g}bar (0,1)" for g in hol]
    # sigma multiplies the barred 1-forms by i as well (not by -i): only then
    # does it commute with d on the w_k.
    scal = ", ".join(f"{g}{b} -> i*{g}{b}" for g in hol if g[:2] in ("dx", "dy", "dz") for b in ("", "bar"))
    signs = [g for g in hol if g[:2] not in ("dx", "dy", "dz")]
    lines.append(f"act sigma order=4: {scal}, " + ", ".join(f"{g} -> -{g}" for g in signs))

    def wedge(names):
        return "^".join(names)

    zb = [f"dz{j}bar" for j in range(2, n)]
    betas = {1: wedge(["w1bar"] + zb), 2: wedge(["w2"] + zb)}
    for k in range(3, n + 1):
        betas[k] = wedge([f"dx{j}" for j in range(1, k - 1)] + [f"w{k}"] + [f"dz{j}bar" for j in range(k, n)])
    lines += [f"expr beta{k} = {betas[k]}" for k in range(1, n + 1)]
    if skt:
        terms = ["theta1^theta1bar"]
        terms += [f"w{i}^w{i}bar + dy{i}^dy{i}bar" for i in range(1, n + 1)]
        for i in range(1, n):
            half = f"1/2*eta{i}^eta{i}bar"
            if i + 1 <= n - 1:
                half += f" + 1/2*theta{i + 1}^theta{i + 1}bar"
            terms.append(f"{half} + dx{i}^dx{i}bar + dz{i}^dz{i}bar")
        lines.append("expr metric = " + " + ".join(terms))
    return lines


@lru_cache(maxsize=None)
def br_spec(n: int) -> DbaSpec:
    """Presentation of the BR nilmanifold family, with sigma and beta_1..beta_n."""
    return parse_dsl("\n".join(_br_lines(n, False)) + "\n")


@lru_cache(maxsize=None)
def br_skt_spec(n: int) -> DbaSpec:
    """br_spec(n) extended by theta_i and eta_i, carrying the pluriclosed metric form."""
    return parse_dsl("\n".join(_br_lines(n, True)) + "\n")


@lru_cache(maxsize=None)
def _br_data(n: int, window: int | None, skt: bool) -> FixtureData:
    spec = br_skt_spec(n) if skt else br_spec(n)
    A = spec.compile(window)
    return FixtureData(A, spec, real_structure(A, spec), induced_action(A, spec.actions["sigma"]),
                       spec.expressions.get("metric"))


def br(n: int, window: int | None = None) -> Bicomplex:
    """Compiled BR(n); pass ``window`` to emit only total degrees <= window."""
    return _br_data(n, window, False).complex


def br_sigma(n: int, window: int | None = None) -> Bicomplex:
    data = _br_data(n, window, False)
    return isotypic(data.complex, data.action, 0)


def br_skt(n: int, window: int | None = None) -> Bicomplex:
    return _br_data(n, window, True).complex


# ---------------------------------------------------------------- elementary models


def point() -> Bicomplex:
    return dot(0, 0)


def elliptic_curve() -> Bicomplex:
    return dots({(0, 0): 1, (1, 0): 1, (0, 1): 1, (1, 1): 1})


def projective_space(n: int) -> Bicomplex:
    if n < 0:
        raise FixtureError(f"projective space needs n >= 0, got {n!r}")
    return dots({(p, p): 1 for p in range(n + 1)})


def k3_model() -> Bicomplex:
    return dots({(0, 0): 1, (2, 0): 1, (1, 1): 20, (0, 2): 1, (2, 2): 1})


def _dot_real_structure(A: Bicomplex) -> RealStructure:
    return RealStructure({b: SparseMatrix.identity(n, A.field_order) for b, n in A.dims.items()})


# ---------------------------------------------------------------- resolution

DEFAULT_CURVE_HODGE = (1, 1, 1, 1)  # (h00, h10, h01, h11) of the invariant curve contributions
_POINT_COUNT = 16


def _curve_dots(hodge) -> Bicomplex:
    try:
        h00, h10, h01, h11 = (int(x) for x in hodge)
    except (TypeError, ValueError):
        raise FixtureError(f"curve Hodge data must be four integers, got {hodge!r}") from None
    if min(h00, h10, h01, h11) < 0:
        raise FixtureError("curve Hodge numbers must be non-negative")
    return dots({b: h for b, h in zip([(0, 0), (1, 0), (0, 1), (1, 1)], (h00, h10, h01, h11)) if h})


def resolution_Mb(case: int = 1, curve_hodge=DEFAULT_CURVE_HODGE) -> Bicomplex:
    """Model of the resolved quotient, assembled as two successive blow-ups.

    First the curves (codimension 2) contribute one shifted copy, then the 16
    isolated points (codimension 3) contribute copies shifted by [1,1] and [2,2].
    """
    _check_case(case)
    base = nakamura_invariant(case)
    curves = _curve_dots(curve_hodge)
    step = blowup_model(base, curves, 2) if curves.dims else base
    pts = dots({(0, 0): _POINT_COUNT})
    return blowup_model(step, pts, 3)


def resolution_Mb_reference(case: int = 1, curve_hodge=DEFAULT_CURVE_HODGE) -> Bicomplex:
    """The same model written directly as a sum of shifted pieces."""
    _check_case(case)
    parts = [nakamura_invariant(case)]
    curves = _curve_dots(curve_hodge)
    if curves.dims:
        parts.append(shift(curves, 1, 1))
    for _ in range(_POINT_COUNT):
        parts += [shift(point(), 1, 1), shift(point(), 2, 2)]
    return direct_sum(*parts)


# ---------------------------------------------------------------- catalog


def _plain(builder: Callable[..., Bicomplex]) -> Callable[..., FixtureData]:
    def make(**params):
        A = builder(**params)
        return FixtureData(A, real=_dot_real_structure(A) if not A.del_maps and not A.delbar_maps else None)
    return make


def _br_family(skt: bool, sigma: bool = False):
    def make(n: int = 2, window: int | None = None):
        data = _br_data(int(n), None if window is None else int(window), skt)
        if sigma:
            B = isotypic(data.complex, data.action, 0)
            return FixtureData(B, data.spec, real_structure(B, data.spec))
        return data
    return make


FIXTURES: dict[str, tuple[Callable[..., FixtureData], str]] = {
    "nakamura_invariant": (lambda case=1: _nakamura_data(int(case)), "case=1|2|3"),
    "construction2": (lambda: _construction2_data(), ""),
    "construction2_sigma": (lambda: _construction2_sigma_data(), ""),
    "br": (_br_family(False), "n>=2, window=K"),
    "br_sigma": (_br_family(False, True), "n>=2, window=K"),
    "br_skt": (_br_family(True), "n>=2, window=K"),
    "resolution_Mb": (
        lambda case=1, curve_hodge=DEFAULT_CURVE_HODGE: FixtureData(resolution_Mb(int(case), curve_hodge)),
        "case=1|2|3, curve_hodge=h00,h10,h01,h11"),
    "point": (_plain(point), ""),
    "elliptic_curve": (_plain(elliptic_curve), ""),
    "projective_space": (lambda n=1: _plain(projective_space)(n=int(n)), "n>=0"),
    "k3_model": (_plain(k3_model), ""),
}


def fixture_names() -> list[str]:
    return sorted(FIXTURES)


def fixture_data(name: str, **params) -> FixtureData:
    if name not in FIXTURES:
        raise FixtureError(f"unknown fixture {name!r}; known: {', '.join(fixture_names())}")
    try:
        return FIXTURES[name][0](**params)
    except TypeError as exc:
        raise FixtureError(f"invalid parameters for {name}: {exc}") from None


def fixture(name: str, **params) -> Bicomplex:
    return fixture_data(name, **params).complex
