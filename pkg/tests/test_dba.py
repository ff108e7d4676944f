from __future__ import annotations

from math import comb

import pytest
from hypothesis import given, strategies as st

from bicomplexes.complex import total_cohomology, validate
from bicomplexes.dba import (
    DbaError,
    ExpressionSyntaxError,
    MonomialAutomorphism,
    complement_direct_summand_check,
    eval_dd_bar,
    induced_action,
    isotypic,
    real_structure,
)
from bicomplexes.dsl import DslError, parse_dsl
from bicomplexes.fixtures import br_spec
from bicomplexes.spectral import fss

# Holomorphic parallelizable nilmanifold with d c = a ^ b (the Iwasawa manifold).
IWASAWA = """\
name iwasawa
field 4
gen a (1,0) conj=abar
gen b (1,0) conj=bbar
gen c (1,0) conj=cbar; d = a^b
gen abar (0,1)
gen bbar (0,1)
gen cbar (0,1)
act rot order=4: a -> i*a, b -> i*b, c -> -c
"""


@pytest.fixture(scope="module")
def iw():
    return parse_dsl(IWASAWA)


def test_structure_equations_split_and_conjugate(iw):
    dl, dbl = iw.structure_equation("c")
    assert dl == iw.expr("a^b") and not dbl
    dl, dbl = iw.structure_equation("cbar")
    assert dbl == iw.expr("abar^bbar") and not dl


def test_wedge_is_graded_commutative(iw):
    a, b = iw.gen("a"), iw.gen("b")
    assert a * b == -(b * a)
    assert not a * a
    assert (a * iw.gen("abar")).bidegree == (1, 1)
    assert iw.expr("2*a^b - b^a") == 3 * (a * b)
    assert iw.expr("i*i*a") == -a


def test_expression_syntax_error_column(iw):
    with pytest.raises(ExpressionSyntaxError) as exc:
        iw.expr("a^^b")
    assert exc.value.column == 3
    with pytest.raises(DbaError):
        iw.expr("a^q")


gen_names = ["a", "b", "c", "abar", "bbar", "cbar"]
monomial_text = st.lists(st.sampled_from(gen_names), min_size=1, max_size=3, unique=True).map("^".join)


@given(monomial_text, monomial_text)
def test_leibniz_rule(x_text, y_text):
    spec = parse_dsl(IWASAWA)
    x, y = spec.expr(x_text), spec.expr(y_text)
    sign = -1 if len(x_text.split("^")) % 2 else 1
    assert spec.d(x * y) == spec.d(x) * y + sign * (x * spec.d(y))
    assert not spec.d(spec.d(x * y))
    # conjugation swaps del and delbar
    assert spec.conjugate(spec.del_(x)) == spec.delbar(spec.conjugate(x))
    assert spec.conjugate(spec.conjugate(x)) == x


def test_d_squared_violation_is_rejected():
    bad = IWASAWA.replace("act rot", "gen f (1,0); delbar = c^abar\nact rot")
    with pytest.raises(DslError) as exc:
        parse_dsl(bad)
    assert exc.value.line == 9 and "not zero" in str(exc.value)


def test_compiled_iwasawa(iw):
    A = iw.compile()
    assert validate(A)
    assert A.dims == {(p, q): comb(3, p) * comb(3, q) for p in range(4) for q in range(4)}
    # [DERIVED] closed 1-forms are a, b, abar, bbar; the rest follows by duality
    assert total_cohomology(A).dims == {0: 1, 1: 4, 2: 8, 3: 10, 4: 8, 5: 4, 6: 1}
    # [DERIVED] Dolbeault numbers: a, b, c are all delbar-closed
    E1 = fss(A).page(1).dims
    assert (E1[(1, 0)], E1[(0, 1)], E1[(1, 1)], E1[(2, 1)]) == (3, 2, 6, 6)
    assert fss(A).stabilization_page == 2
    assert real_structure(A, iw).check(A)


def test_window_compile(iw):
    A = iw.compile(window=2)
    assert A.max_degree == 2 and max(A.degrees()) == 2
    assert A.complete_degrees() == [0, 1]
    assert total_cohomology(A).dims.get(1) == 4


def test_automorphism_and_isotypic(iw):
    A = iw.compile()
    act = induced_action(A, iw.actions["rot"])
    assert act.check(A)
    parts = [isotypic(A, act, j) for j in range(4)]
    for P in parts:
        assert validate(P)
    assert sum(P.total_dim() for P in parts) == A.total_dim()
    # [DERIVED] invariants of degree 1: none of the six generators is fixed
    assert parts[0].degree_dim(1) == 0
    assert parts[0].dim(1, 1) == 5  # a^abar, a^bbar, b^abar, b^bbar, c^cbar


def test_automorphism_errors(iw):
    with pytest.raises(DbaError):
        MonomialAutomorphism(iw, "bad", {"a": "i*a"})  # does not commute with d c = a^b
    with pytest.raises(DbaError):
        MonomialAutomorphism(iw, "bad", {"a": "abar"})  # changes bidegree
    with pytest.raises(DbaError):
        MonomialAutomorphism(iw, "bad", {"a": "i*a", "b": "i*b", "c": "-c"}, order=2)
    with pytest.raises(DbaError):
        MonomialAutomorphism(iw, "bad", {"q": "a"})


def test_eval_dd_bar(iw):
    # [DERIVED] del delbar (c ^ cbar) = -(del c) ^ (delbar cbar)
    assert eval_dd_bar(iw, "c^cbar") == -(iw.expr("a^b") * iw.expr("abar^bbar"))


def test_complement_check():
    spec = br_spec(2)
    assert complement_direct_summand_check(spec, ["1"])
    # del w2 = dx1^dy2 lies in the span but every complement contains w2
    assert not complement_direct_summand_check(spec, ["dx1^dy2"])
    with pytest.raises(DbaError):
        complement_direct_summand_check(spec, ["w2"])  # not a subcomplex
