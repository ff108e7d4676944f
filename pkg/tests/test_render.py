from __future__ import annotations

import re

import pytest

from bicomplexes.complex import Bicomplex, direct_sum, dot
from bicomplexes.fixtures import nakamura_invariant
from bicomplexes.render import FORMATS, render, summand_arrows
from bicomplexes.zigzag import ZigzagShape, decompose, square_model, zigzag_model


def _sample():
    A = direct_sum(dot(0, 0), zigzag_model(ZigzagShape(1, 0, 2)), square_model(1, 1),
                   zigzag_model(ZigzagShape.column(2, 0, 2)))
    return A, decompose(A)


def test_arrow_counts():
    A, Z = _sample()
    arrows = {desc: a for desc, _, a in summand_arrows(Z)}
    # one arrow per map: length - 1 for zigzags, 4 for a square
    assert sorted(len(a) for a in arrows.values()) == [0, 2, 3, 4]
    for desc, arr in arrows.items():
        for (p, q), (p2, q2), kind in arr:
            assert (p2 - p, q2 - q) == ((1, 0) if kind == "del" else (0, 1))


def test_svg_cells_and_arrows():
    A, Z = _sample()
    svg = render(A, Z, "svg")
    assert svg.count('class="cell"') == len(A.dims)
    assert len(re.findall(r'class="arrow ', svg)) == sum(len(a) for _, _, a in summand_arrows(Z))


def test_tikz_cells_and_arrows():
    A, Z = _sample()
    tikz = render(A, Z, "tikz")
    assert tikz.count("\\node") == len(A.dims)
    assert tikz.count("\\draw[->]") == sum(len(a) for _, _, a in summand_arrows(Z))


def test_ascii_grid():
    A = nakamura_invariant(3)
    text = render(A, None, "ascii")
    assert text.splitlines()[0].startswith("  3 |")
    assert render(Bicomplex(1, {}), None) == "(zero complex)\n"


@pytest.mark.parametrize("fmt", FORMATS)
def test_render_is_deterministic_and_pure(fmt):
    A, Z = _sample()
    before = Z.to_json()
    assert render(A, Z, fmt) == render(A, Z, fmt)
    assert Z.to_json() == before


def test_unknown_format():
    with pytest.raises(ValueError):
        render(dot(0, 0), None, "png")
