from __future__ import annotations

import pytest
from hypothesis import given, strategies as st

from bicomplexes.complex import Bicomplex
from bicomplexes.linalg import SparseMatrix
from bicomplexes.oracle import OracleInconclusive, brute_force_decompose
from bicomplexes.testing import random_complex_with_decomposition
from bicomplexes.zigzag import multiplicities_from_ranks


@given(st.integers(0, 10_000), st.sampled_from([1, 3, 4, 6]))
def test_oracle_recovers_assembly_exactly(seed, order):
    A, truth = random_complex_with_decomposition(seed, order=order)
    Z = brute_force_decompose(A)
    assert Z == truth
    assert multiplicities_from_ranks(A) == truth


def test_oracle_budget():
    A, _ = random_complex_with_decomposition(3, size=5, max_dim=5)
    with pytest.raises(OracleInconclusive):
        brute_force_decompose(A, budget=1)


def test_oracle_rejects_invalid_input():
    one = SparseMatrix.from_dense([[1]])
    bad = Bicomplex(1, {(0, 0): 1, (1, 0): 1, (2, 0): 1}, del_={(0, 0): one, (1, 0): one})
    with pytest.raises(ValueError):
        brute_force_decompose(bad)
    windowed = Bicomplex(1, {(0, 0): 1}, max_degree=0)
    with pytest.raises(ValueError):
        brute_force_decompose(windowed)
