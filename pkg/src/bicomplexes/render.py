"""Pictures of a double complex and its indecomposable summands.

Renderers consume already computed data (dimensions and a zigzag multiset)
and never touch the linear algebra.  Every occupied bidegree becomes one cell;
every summand contributes one arrow per differential in its model: ``l - 1``
arrows for a zigzag of length ``l`` and four for a square.
"""
from __future__ import annotations

from .complex import Bicomplex
from .zigzag import ZigzagMultiset, ZigzagShape

__all__ = ["FORMATS", "summand_arrows", "render", "render_ascii", "render_svg", "render_tikz"]

FORMATS = ("ascii", "svg", "tikz")

Arrow = tuple[tuple[int, int], tuple[int, int], str]  # source, target, "del" | "delbar"


def _shape_arrows(s: ZigzagShape) -> list[Arrow]:
    out = []
    for pos in range(s.start, s.end):
        a, b = pos, pos + 1
        even, odd = (a, b) if a % 2 == 0 else (b, a)
        p = even // 2
        src = (p, s.k - p)
        if odd == even + 1:
            out.append((src, (p + 1, s.k - p), "del"))
        else:
            out.append((src, (p, s.k - p + 1), "delbar"))
    return out


def summand_arrows(Z: ZigzagMultiset) -> list[tuple[str, int, list[Arrow]]]:
    """(description, copy index, arrows) for every summand, in a fixed order."""
    out = []
    for shape, m in Z.zigzags():
        for c in range(m):
            out.append((shape.describe(), c, _shape_arrows(shape)))
    for (p, q), m in Z.squares():
        arrows = [((p, q), (p + 1, q), "del"), ((p, q), (p, q + 1), "delbar"),
                  ((p, q + 1), (p + 1, q + 1), "del"), ((p + 1, q), (p + 1, q + 1), "delbar")]
        for c in range(m):
            out.append((f"square(anchor=({p},{q}))", c, arrows))
    return out


def render_ascii(A: Bicomplex, Z: ZigzagMultiset | None = None) -> str:
    if not A.dims:
        return "(zero complex)\n"
    pmin, pmax, qmin, qmax = A.bounds()
    width = max(len(str(n)) for n in A.dims.values()) + 1
    lines = []
    for q in range(qmax, qmin - 1, -1):
        row = "".join(str(A.dim(p, q) or ".").rjust(width) for p in range(pmin, pmax + 1))
        lines.append(f"{q:>3} |{row}")
    lines.append("    +" + "-" * (width * (pmax - pmin + 1)))
    lines.append("      " + "".join(str(p).rjust(width) for p in range(pmin, pmax + 1))[1:])
    if Z is not None:
        lines.append("")
        lines.append(Z.table())
    return "\n".join(lines) + "\n"


_CELL = 60


def _xy(b, pmin, qmax):
    return (40 + (b[0] - pmin) * _CELL, 20 + (qmax - b[1]) * _CELL)


def render_svg(A: Bicomplex, Z: ZigzagMultiset | None = None) -> str:
    pmin, pmax, qmin, qmax = A.bounds() if A.dims else (0, 0, 0, 0)
    w = 80 + (pmax - pmin + 1) * _CELL
    h = 60 + (qmax - qmin + 1) * _CELL
    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">',
        '<defs><marker id="head" markerWidth="6" markerHeight="6" refX="5" refY="3" orient="auto">'
        '<path d="M0,0 L6,3 L0,6 z"/></marker></defs>',
    ]
    for b in sorted(A.dims):
        x, y = _xy(b, pmin, qmax)
        out.append(f'<g class="cell" data-p="{b[0]}" data-q="{b[1]}">'
                   f'<rect x="{x}" y="{y}" width="{_CELL - 20}" height="{_CELL - 20}" fill="none" stroke="#999"/>'
                   f'<text x="{x + (_CELL - 20) / 2}" y="{y + (_CELL - 20) / 2 + 4}" '
                   f'text-anchor="middle" font-size="12">{A.dim(*b)}</text></g>')
    if Z is not None:
        for n, (desc, copy, arrows) in enumerate(summand_arrows(Z)):
            off = 4 + (n % 7) * 4
            for src, tgt, kind in arrows:
                x1, y1 = _xy(src, pmin, qmax)
                x2, y2 = _xy(tgt, pmin, qmax)
                out.append(f'<line class="arrow {kind}" x1="{x1 + off}" y1="{y1 + off}" x2="{x2 + off}" '
                           f'y2="{y2 + off}" stroke="black" marker-end="url(#head)"><title>{desc}</title></line>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def render_tikz(A: Bicomplex, Z: ZigzagMultiset | None = None) -> str:
    out = ["\\begin{tikzpicture}[scale=1.2]"]
    for b in sorted(A.dims):
        out.append(f"  \\node[draw, minimum size=8mm] (c{b[0]}_{b[1]}) at ({b[0]},{b[1]}) {{{A.dim(*b)}}};")
    if Z is not None:
        for n, (desc, copy, arrows) in enumerate(summand_arrows(Z)):
            out.append(f"  % {desc} copy {copy + 1}")
            off = 0.06 * (n % 5)
            for src, tgt, kind in arrows:
                out.append(f"  \\draw[->] ({src[0] + off},{src[1] + off}) -- ({tgt[0] + off},{tgt[1] + off});")
    out.append("\\end{tikzpicture}")
    return "\n".join(out) + "\n"


def render(A: Bicomplex, Z: ZigzagMultiset | None = None, fmt: str = "ascii") -> str:
    if fmt not in FORMATS:
        raise ValueError(f"unknown format {fmt!r}; choose from {', '.join(FORMATS)}")
    return {"ascii": render_ascii, "svg": render_svg, "tikz": render_tikz}[fmt](A, Z)
