from __future__ import annotations

import json

import pytest

from bicomplexes.dsl import DslError, load_dsl, parse_dsl, spec_from_dict, spec_to_dict
from bicomplexes.fixtures import construction2_spec, nakamura_spec

SMALL = """\
# a torus with one twisted direction
name small
field 4
gen a (1,0) conj=abar   # closed
gen b (1,0) conj=bbar; del = a^b * 0 ; delbar = a^abar
gen abar (0,1)
gen bbar (0,1)
expr vol = a^b^abar^bbar
"""


def test_parse_comments_and_derived_conjugates():
    spec = parse_dsl(SMALL)
    assert spec.name == "small" and spec.field_order == 4
    assert spec.n_holo == 2
    # conjugate equation derived: del(bbar) = conj(delbar b) = abar^a
    dl, dbl = spec.structure_equation("bbar")
    assert dl == spec.expr("abar^a") and not dbl
    assert str(spec.expressions["vol"]) == str(spec.expr("a^b^abar^bbar"))


@pytest.mark.parametrize("text, line, column", [
    ("field x\n", 1, 1),
    ("field 4\ngen a (1,0\n", 2, 1),
    ("field 4\ngen a (1,0)\nfrobnicate\n", 3, 1),
    ("field 4\ngen a (1,0)\ngen b (1,0); d = a^^a\n", 3, 20),
    ("field 4\ngen a (1,0)\n  expr v = a +\n", 3, 15),
    ("field 4\ngen a (1,0) conj=abar\ngen abar (0,1)\nact s: a -> zz\n", 4, 13),
])
def test_error_positions(text, line, column):
    with pytest.raises(DslError) as exc:
        parse_dsl(text)
    assert (exc.value.line, exc.value.column) == (line, column), str(exc.value)
    assert str(exc.value).startswith(f"line {line}, column {column}:")


@pytest.mark.parametrize("make", [lambda: parse_dsl(SMALL), construction2_spec, lambda: nakamura_spec(1)])
def test_json_roundtrip_compiles_identically(make):
    spec = make()
    data = json.loads(json.dumps(spec_to_dict(spec)))
    again = spec_from_dict(data)
    assert spec_to_dict(again) == data
    assert again.compile() == spec.compile()


def test_load_dsl(tmp_path):
    path = tmp_path / "small.dba"
    path.write_text(SMALL, encoding="utf-8")
    assert load_dsl(path).compile().total_dim() == 16
