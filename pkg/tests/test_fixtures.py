from __future__ import annotations

import pytest

from bicomplexes.complex import validate
from bicomplexes.dba import eval_dd_bar
from bicomplexes.fixtures import (
    FixtureError,
    br_skt_spec,
    br_spec,
    construction2_sigma,
    construction2_spec,
    fixture,
    fixture_data,
    fixture_names,
    nakamura_invariant,
    projective_space,
    resolution_Mb,
    resolution_Mb_reference,
)

# [PAPER] Table 1, dimensions of the sigma-invariant complex
TABLE1_CASES_12 = {(0, 0): 1, (2, 0): 1, (1, 1): 3, (0, 2): 1, (2, 1): 3, (1, 2): 3,
                   (3, 1): 1, (2, 2): 3, (1, 3): 1, (3, 3): 1}
TABLE1_CASE_3 = {**TABLE1_CASES_12, (1, 1): 1, (2, 1): 1, (1, 2): 1, (2, 2): 1}

# [PAPER] Table 2, dimensions up to middle degree
TABLE2 = {(0, 0): 1, (1, 0): 0, (0, 1): 0, (2, 0): 2, (1, 1): 6, (0, 2): 2,
          (3, 0): 0, (2, 1): 4, (1, 2): 4, (0, 3): 0,
          (4, 0): 1, (3, 1): 6, (2, 2): 12, (1, 3): 6, (0, 4): 1}


@pytest.mark.parametrize("case, want", [(1, TABLE1_CASES_12), (2, TABLE1_CASES_12), (3, TABLE1_CASE_3)])
def test_table1(case, want):
    A = nakamura_invariant(case)
    assert A.dims == want
    assert A.total_dim() == (18 if case < 3 else 10)


def test_nakamura_cases_1_and_2_agree():
    assert nakamura_invariant(1) == nakamura_invariant(2)


def test_nakamura_case3_has_zero_differential():
    A = nakamura_invariant(3)
    assert not A.del_maps and not A.delbar_maps


def test_table2_and_duality():
    A = construction2_sigma()
    for b, n in TABLE2.items():
        assert A.dim(*b) == n, b
    for (p, q), n in A.dims.items():
        assert A.dim(4 - p, 4 - q) == n


def test_projective_space():
    for n in range(4):
        assert projective_space(n).dims == {(p, p): 1 for p in range(n + 1)}
    with pytest.raises(FixtureError):
        projective_space(-1)


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_br_generator_counts(n):
    hol = [g for g in br_spec(n).generators if g.bidegree == (1, 0)]
    assert len(hol) == 4 * n - 2
    hol_skt = [g for g in br_skt_spec(n).generators if g.bidegree == (1, 0)]
    assert len(hol_skt) == 4 * n - 2 + 2 * (n - 1)


def test_br_structure_equations():
    # [PAPER] d w1 = -dy1bar dz1 and d w_i = dx_{i-1} dy_i + dy_{i-1} dz_{i-1}bar
    spec = br_spec(3)
    assert spec.d(spec.gen("w1")) == spec.expr("-dy1bar^dz1")
    assert spec.d(spec.gen("w3")) == spec.expr("dx2^dy3 + dy2^dz2bar")


@pytest.mark.parametrize("n", [2, 3, 4])
def test_skt_del_delbar_identities(n):
    # [PAPER] the four del-delbar identities, factors in their printed order
    s = br_skt_spec(n)
    assert eval_dd_bar(s, "w1^w1bar") == s.expr("dy1^dy1bar^dz1^dz1bar")
    for i in range(2, n + 1):
        want = f"dy{i-1}^dy{i-1}bar^dz{i-1}^dz{i-1}bar + dx{i-1}^dx{i-1}bar^dy{i}^dy{i}bar"
        assert eval_dd_bar(s, f"w{i}^w{i}bar") == s.expr(want)
    for i in range(1, n):
        assert eval_dd_bar(s, f"theta{i}^theta{i}bar") == s.expr(f"-2*dy{i}^dy{i}bar^dz{i}^dz{i}bar")
        assert eval_dd_bar(s, f"eta{i}^eta{i}bar") == s.expr(f"-2*dx{i}^dx{i}bar^dy{i+1}^dy{i+1}bar")
    assert not eval_dd_bar(s, s.expressions["metric"])


@pytest.mark.parametrize("name, params", [
    ("nakamura_invariant", {"case": 1}), ("nakamura_invariant", {"case": 3}), ("construction2", {}),
    ("construction2_sigma", {}), ("br", {"n": 2}), ("br_skt", {"n": 2}), ("br_sigma", {"n": 2}),
    ("point", {}), ("elliptic_curve", {}), ("projective_space", {"n": 2}), ("k3_model", {}),
])
def test_fixtures_validate_with_real_structures(name, params):
    d = fixture_data(name, **params)
    assert validate(d.complex)
    assert d.real is not None and d.real.check(d.complex)


def test_sigma_has_order_four():
    act = construction2_spec().actions["sigma"]
    assert act.order == 4


@pytest.mark.parametrize("case", [1, 3])
def test_resolution_dims(case):
    A, R = resolution_Mb(case), resolution_Mb_reference(case)
    assert A.dims == R.dims
    base = nakamura_invariant(case).dims
    assert A.dim(1, 1) == base.get((1, 1), 0) + 1 + 16
    assert A.dim(2, 2) == base.get((2, 2), 0) + 1 + 16


def test_catalog_errors():
    assert "br" in fixture_names()
    with pytest.raises(FixtureError):
        fixture("nope")
    with pytest.raises(FixtureError):
        fixture("point", n=3)
    with pytest.raises(FixtureError):
        fixture("br", n=1)
    with pytest.raises(FixtureError):
        fixture("nakamura_invariant", case=4)


def test_nakamura_case1_decomposition():
    # [DERIVED] d_1 is nonzero on the classes at (1,1) and (1,2); the real
    # structure pairs each column-type line with a row-type mirror, so there is
    # one line of each type per pair of antidiagonals, and 18 - 8 = 10 dots.
    from bicomplexes.oracle import brute_force_decompose
    from bicomplexes.zigzag import ZigzagShape

    Z = brute_force_decompose(nakamura_invariant(1))
    lines = {s: n for s, n in Z.zigzags() if s.length == 2}
    assert lines == {ZigzagShape.column(1, 1, 1): 1, ZigzagShape.column(1, 2, 1): 1,
                     ZigzagShape.row(1, 1, 1): 1, ZigzagShape.row(2, 1, 1): 1}
    assert sum(Z.dots().values()) == 10 and not Z.squares()
    assert Z.count() == 14
