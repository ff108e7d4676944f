from __future__ import annotations

import json

import pytest
from hypothesis import given, strategies as st

from bicomplexes.fixtures import fixture_data
from bicomplexes.io import DocumentError, dumps, from_document, load_path, loads, save_path, to_document
from bicomplexes.testing import random_complex

from test_dsl import SMALL


@given(st.integers(0, 10_000), st.sampled_from([1, 3, 4, 5]))
def test_random_roundtrip_exact(seed, order):
    A = random_complex(seed, order=order)
    text = dumps(A)
    B = loads(text).complex
    assert B == A
    assert dumps(B) == text


@pytest.mark.parametrize("name, params", [
    ("nakamura_invariant", {"case": 1}), ("construction2_sigma", {}), ("k3_model", {}), ("br", {"n": 2}),
    ("resolution_Mb", {"case": 3}),
])
def test_fixture_roundtrip(name, params):
    d = fixture_data(name, **params)
    actions = {"sigma": d.action} if d.action is not None else None
    text = dumps(d.complex, d.real, actions)
    L = loads(text)
    assert L.complex == d.complex
    assert dumps(L.complex, L.real, L.actions or None) == text
    if d.real is not None:
        assert L.real.check(L.complex)


def test_scalars_are_exact_strings():
    d = fixture_data("construction2_sigma")
    doc = to_document(d.complex)
    values = {e[2] for m in doc["differentials"] for e in m["entries"]}
    assert all(isinstance(v, str) for v in values)


@pytest.mark.parametrize("doc, fragment", [
    ([], "JSON object"),
    ({"format_version": 9}, "format_version"),
    ({"format_version": 1, "field_order": 1, "support": [{"p": 0, "q": 0, "dim": 1}] * 2}, "twice"),
    ({"format_version": 1, "field_order": 1, "support": [{"p": 0, "q": 0, "dim": 1}, {"p": 1, "q": 0, "dim": 1}],
      "differentials": [{"kind": "del", "source": [0, 0], "entries": [[3, 0, "1"]]}]}, "outside"),
    ({"format_version": 1, "field_order": 1, "support": [],
      "differentials": [{"kind": "sideways", "source": [0, 0], "entries": []}]}, "unknown differential"),
    ({"format_version": 1, "support": []}, "malformed"),
])
def test_malformed_documents(doc, fragment):
    with pytest.raises(DocumentError) as exc:
        from_document(doc)
    assert fragment in str(exc.value)


def test_invalid_json():
    with pytest.raises(DocumentError):
        loads("{not json")


def test_paths(tmp_path):
    d = fixture_data("elliptic_curve")
    p = tmp_path / "e.json"
    save_path(p, d.complex, d.real)
    assert load_path(p).complex == d.complex
    q = tmp_path / "small.dba"
    q.write_text(SMALL, encoding="utf-8")
    L = load_path(q)
    assert L.complex.total_dim() == 16 and L.real is not None
    # algebra documents in JSON are compiled on load
    from bicomplexes.dsl import spec_to_dict
    r = tmp_path / "small.json"
    r.write_text(json.dumps(spec_to_dict(L.spec)), encoding="utf-8")
    assert load_path(r).complex == L.complex
