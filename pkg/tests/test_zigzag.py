from __future__ import annotations

import random

import pytest
from hypothesis import given, strategies as st

from bicomplexes.complex import direct_sum, dot, dots, validate
from bicomplexes.testing import change_basis, random_basis_change, random_complex_with_decomposition
from bicomplexes.zigzag import (
    ConsistencyFault,
    ZigzagMultiset,
    ZigzagShape,
    bigraded_quasi_iso_type_equal,
    check_property,
    decompose,
    looks_like_manifold,
    multiplicities_from_ranks,
    square_model,
    zigzag_model,
)

seeds = st.integers(0, 10_000)


def test_shape_cells_and_positions():
    # lower cell (p, k-p) at position 2p, upper cell (p, k+1-p) at 2p-1
    s = ZigzagShape(2, 1, 4)
    assert s.cells == [(1, 2), (1, 1), (2, 1), (2, 0)]
    assert s.length == 4 and s.orientation == "row"
    assert ZigzagShape.column(0, 1, 1).cells == [(0, 1), (1, 1)]
    assert sorted(ZigzagShape.row(0, 1, 1).cells) == [(0, 1), (0, 2)]
    assert ZigzagShape(0, 1, 1) == ZigzagShape.dot(1, 0)


def test_from_cells_roundtrip_and_errors():
    s = ZigzagShape(3, 0, 4)
    assert ZigzagShape.from_cells(reversed(s.cells)) == s
    with pytest.raises(ValueError):
        ZigzagShape.from_cells([(0, 0), (2, 0)])
    with pytest.raises(ValueError):
        ZigzagShape.from_cells([(0, 0), (1, 1)])
    with pytest.raises(ValueError):
        ZigzagShape(0, 3, 2)


def test_transpose_reflect_shift():
    s = ZigzagShape(1, 0, 2)  # (0,1) <- (1,1)?  L shape
    assert s.transpose().transpose() == s
    assert s.reflect(2).reflect(2) == s
    assert s.shifted(1, 2).cells == [(p + 1, q + 2) for p, q in s.cells]
    assert s.orientation == "down"
    assert s.transpose().orientation == "down"


def test_multiset_json_and_describe():
    Z = ZigzagMultiset({ZigzagShape(1, 0, 2): 2, ZigzagShape.dot(0, 0): 1}, {(0, 0): 3})
    assert ZigzagMultiset.from_json(Z.to_json()) == Z
    assert "2 x zigzag(length=3, anchor=(0,1), down)" in Z.table()
    assert Z.count(length=3) == 2 and Z.dots() == {(0, 0): 1}


@given(seeds, st.sampled_from([1, 3, 4]), st.booleans())
def test_decomposition_recovers_assembly(seed, order, use_oracle):
    A, truth = random_complex_with_decomposition(seed, order=order)
    Z = decompose(A, oracle=use_oracle)
    assert Z.zigzag_part() == truth.zigzag_part()
    assert Z.bookkeeping_ok(A)
    if use_oracle:
        assert Z == truth


@given(seeds)
def test_rank_route_invariant_under_basis_change(seed):
    A, _ = random_complex_with_decomposition(seed)
    rng = random.Random(seed + 1)
    P, Pinv = {}, {}
    for b, n in A.dims.items():
        P[b], Pinv[b] = random_basis_change(rng, n, 1)
    B = change_basis(A, P, Pinv)
    assert validate(B)
    assert multiplicities_from_ranks(B) == multiplicities_from_ranks(A)
    assert bigraded_quasi_iso_type_equal(A, B)


@given(seeds)
def test_property_checks_match_shapes(seed):
    A, truth = random_complex_with_decomposition(seed)
    lengths = {s.length for s, _ in truth.zigzags()}
    assert check_property(A, "ddbar").holds == (lengths <= {1})
    assert check_property(A, "page1").holds == (lengths <= {1, 2})
    assert check_property(A, "ddc3").holds == (lengths <= {1, 3})


def test_property_witness_and_errors():
    A = direct_sum(dot(0, 0), zigzag_model(ZigzagShape(1, 0, 2)))
    r = check_property(A, "ddbar")
    assert not r and "zigzag(length=3" in r.witness
    assert check_property(A, "ddc+3").holds
    with pytest.raises(ValueError):
        check_property(A, "kahler")


def test_squares_do_not_break_ddbar():
    assert check_property(direct_sum(square_model(0, 0), dot(1, 1)), "ddbar").holds


def test_looks_like_manifold():
    diamond = dots({(0, 0): 1, (1, 0): 1, (0, 1): 1, (1, 1): 1})
    assert looks_like_manifold(decompose(diamond), 1) == (True, None)
    # an asymmetric dot violates condition (1)
    ok, msg = looks_like_manifold(decompose(dot(1, 0)), 1)
    assert not ok and "condition (1)" in msg
    # a symmetric pair of L-shapes touching the corner (0,0) violates (2)
    L = ZigzagShape.from_cells([(0, 0), (1, 0), (0, 1)])
    Lr = L.reflect(2)
    Z = ZigzagMultiset({L: 1, Lr: 1, ZigzagShape.dot(1, 1): 1})
    ok, msg = looks_like_manifold(Z, 2)
    assert not ok and "condition (2)" in msg
    # even zigzags in dimension 2 violate (3)
    e = ZigzagShape.column(0, 1, 1)
    orbit = {e, e.transpose(), e.reflect(2), e.reflect(2).transpose()}
    Z = ZigzagMultiset({s: 1 for s in orbit})
    ok, msg = looks_like_manifold(Z, 2)
    assert not ok and "condition (3)" in msg


def test_consistency_fault_is_runtime_error():
    assert issubclass(ConsistencyFault, RuntimeError)
