"""Zigzag and square decompositions, and the properties read off from them.

A zigzag lives on two adjacent antidiagonals p+q = k (lower) and p+q = k+1
(upper).  Its cells are numbered left to right along the staircase:

    lower cell (p, k-p)     has position 2p
    upper cell (p, k+1-p)   has position 2p-1

so neighbouring positions are joined by a differential (delbar from 2p to
2p-1, del from 2p to 2p+1).  A shape is an interval of positions.  Dots are
stored as lower cells.
"""
from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Iterable, Mapping

from .complex import Bicomplex
from .linalg import SparseMatrix
from .spectral import degeneration_page, fss, purity_table

__all__ = [
    "ZigzagShape",
    "ZigzagMultiset",
    "BookkeepingError",
    "ConsistencyFault",
    "PropertyResult",
    "multiplicities_from_ranks",
    "decompose",
    "check_property",
    "looks_like_manifold",
    "bigraded_quasi_iso_type_equal",
    "zigzag_model",
    "square_model",
    "PROPERTIES",
    "ORACLE_SIZE_LIMIT",
]

Bidegree = tuple[int, int]
PROPERTIES = ("ddbar", "page1", "ddc3")
ORACLE_SIZE_LIMIT = 200


class BookkeepingError(RuntimeError):
    """Multiplicities do not reproduce the dimensions of the complex."""


class ConsistencyFault(RuntimeError):
    """The zigzag-based and spectral verdicts of a property check disagree."""


def _cell(k: int, pos: int) -> Bidegree:
    if pos % 2 == 0:
        p = pos // 2
        return (p, k - p)
    p = (pos + 1) // 2
    return (p, k + 1 - p)


@dataclass(frozen=True, order=True)
class ZigzagShape:
    """Indecomposable zigzag: positions ``start..end`` on antidiagonals k, k+1."""

    k: int
    start: int
    end: int

    def __post_init__(self):
        if self.end < self.start:
            raise ValueError("empty zigzag")
        if self.start == self.end and self.start % 2:
            # a lone upper cell is the dot one antidiagonal up
            p, q = _cell(self.k, self.start)
            object.__setattr__(self, "k", p + q)
            object.__setattr__(self, "start", 2 * p)
            object.__setattr__(self, "end", 2 * p)

    @classmethod
    def dot(cls, p: int, q: int) -> "ZigzagShape":
        return cls(p + q, 2 * p, 2 * p)

    @classmethod
    def from_cells(cls, cells: Iterable[Bidegree]) -> "ZigzagShape":
        cells = set(cells)
        if not cells:
            raise ValueError("no cells")
        sums = {p + q for p, q in cells}
        if len(sums) == 1 and len(cells) == 1:
            (p, q), = cells
            return cls.dot(p, q)
        k = min(sums)
        if max(sums) != k + 1:
            raise ValueError(f"cells {sorted(cells)} do not lie on two adjacent antidiagonals")
        pos = sorted(2 * p if p + q == k else 2 * p - 1 for p, q in cells)
        if pos != list(range(pos[0], pos[-1] + 1)):
            raise ValueError(f"cells {sorted(cells)} do not form a connected staircase")
        return cls(k, pos[0], pos[-1])

    @classmethod
    def column(cls, p: int, q: int, r: int) -> "ZigzagShape":
        """Length-2r zigzag whose del-side loose end a_1 sits at (p, q)."""
        return cls(p + q, 2 * p, 2 * p + 2 * r - 1)

    @classmethod
    def row(cls, p: int, q: int, r: int) -> "ZigzagShape":
        """Mirror of :meth:`column`: length 2r with the delbar-side end at (p, q)."""
        return cls.column(q, p, r).transpose()

    @property
    def length(self) -> int:
        return self.end - self.start + 1

    @property
    def cells(self) -> list[Bidegree]:
        return [_cell(self.k, i) for i in range(self.start, self.end + 1)]

    @property
    def anchor(self) -> Bidegree:
        """Leftmost cell; the lower one when two cells share the leftmost column."""
        cells = self.cells
        pmin = min(p for p, _ in cells)
        return min((c for c in cells if c[0] == pmin), key=lambda c: c[0] + c[1])

    @property
    def orientation(self) -> str | None:
        if self.length == 1:
            return None
        if self.length % 2:
            return "up" if self.start % 2 else "down"
        return "column" if self.start % 2 == 0 else "row"

    @property
    def is_even(self) -> bool:
        return self.length % 2 == 0

    def transpose(self) -> "ZigzagShape":
        return ZigzagShape.from_cells((q, p) for p, q in self.cells)

    def reflect(self, n: int) -> "ZigzagShape":
        """Reflection in the antidiagonal p+q = n: (p, q) -> (n-q, n-p)."""
        return ZigzagShape.from_cells((n - q, n - p) for p, q in self.cells)

    def shifted(self, i: int, j: int) -> "ZigzagShape":
        return ZigzagShape.from_cells((p + i, q + j) for p, q in self.cells)

    def describe(self) -> str:
        p, q = self.anchor
        if self.length == 1:
            return f"dot({p},{q})"
        return f"zigzag(length={self.length}, anchor=({p},{q}), {self.orientation})"

    def to_json(self) -> dict:
        p, q = self.anchor
        return {"length": self.length, "anchor": [p, q], "orientation": self.orientation,
                "cells": [list(c) for c in self.cells]}

    @classmethod
    def from_json(cls, data: Mapping) -> "ZigzagShape":
        return cls.from_cells(tuple(c) for c in data["cells"])


def _square_cells(p: int, q: int) -> list[Bidegree]:
    return [(p, q), (p + 1, q), (p, q + 1), (p + 1, q + 1)]


@dataclass
class ZigzagMultiset:
    zig_mult: dict[ZigzagShape, int] = dc_field(default_factory=dict)
    square_mult: dict[Bidegree, int] = dc_field(default_factory=dict)

    def __post_init__(self):
        self.zig_mult = {s: n for s, n in self.zig_mult.items() if n}
        self.square_mult = {b: n for b, n in self.square_mult.items() if n}

    def add_zigzag(self, shape: ZigzagShape, n: int = 1) -> None:
        if n:
            self.zig_mult[shape] = self.zig_mult.get(shape, 0) + n
            if not self.zig_mult[shape]:
                del self.zig_mult[shape]

    def add_square(self, anchor: Bidegree, n: int = 1) -> None:
        if n:
            self.square_mult[anchor] = self.square_mult.get(anchor, 0) + n
            if not self.square_mult[anchor]:
                del self.square_mult[anchor]

    def coverage(self) -> dict[Bidegree, int]:
        out: dict[Bidegree, int] = {}
        for s, n in self.zig_mult.items():
            for c in s.cells:
                out[c] = out.get(c, 0) + n
        for b, n in self.square_mult.items():
            for c in _square_cells(*b):
                out[c] = out.get(c, 0) + n
        return {c: n for c, n in out.items() if n}

    def bookkeeping_ok(self, A: Bicomplex) -> bool:
        return self.coverage() == {b: n for b, n in A.dims.items() if n}

    def zigzags(self) -> list[tuple[ZigzagShape, int]]:
        return sorted(self.zig_mult.items(), key=lambda t: (t[0].k, t[0].start, t[0].end))

    def squares(self) -> list[tuple[Bidegree, int]]:
        return sorted(self.square_mult.items())

    def zigzag_part(self) -> dict[ZigzagShape, int]:
        return dict(self.zig_mult)

    def dots(self) -> dict[Bidegree, int]:
        return {s.anchor: n for s, n in self.zig_mult.items() if s.length == 1}

    def count(self, length: int | None = None, orientation: str | None = None) -> int:
        return sum(n for s, n in self.zig_mult.items()
                   if (length is None or s.length == length) and (orientation is None or s.orientation == orientation))

    def __add__(self, other: "ZigzagMultiset") -> "ZigzagMultiset":
        out = ZigzagMultiset(dict(self.zig_mult), dict(self.square_mult))
        for s, n in other.zig_mult.items():
            out.add_zigzag(s, n)
        for b, n in other.square_mult.items():
            out.add_square(b, n)
        return out

    def __eq__(self, other) -> bool:
        if not isinstance(other, ZigzagMultiset):
            return NotImplemented
        return self.zig_mult == other.zig_mult and self.square_mult == other.square_mult

    def transpose(self) -> "ZigzagMultiset":
        return ZigzagMultiset({s.transpose(): n for s, n in self.zig_mult.items()},
                              {(q, p): n for (p, q), n in self.square_mult.items()})

    def shifted(self, i: int, j: int) -> "ZigzagMultiset":
        return ZigzagMultiset({s.shifted(i, j): n for s, n in self.zig_mult.items()},
                              {(p + i, q + j): n for (p, q), n in self.square_mult.items()})

    def table(self) -> str:
        lines = []
        for s, n in self.zigzags():
            lines.append(f"{n} x {s.describe()}")
        for (p, q), n in self.squares():
            lines.append(f"{n} x square(anchor=({p},{q}))")
        return "\n".join(lines) if lines else "(zero complex)"

    def to_json(self) -> dict:
        return {
            "zigzags": [{"shape": s.to_json(), "multiplicity": n} for s, n in self.zigzags()],
            "squares": [{"anchor": [p, q], "multiplicity": n} for (p, q), n in self.squares()],
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "ZigzagMultiset":
        return cls({ZigzagShape.from_json(z["shape"]): z["multiplicity"] for z in data.get("zigzags", [])},
                   {tuple(s["anchor"]): s["multiplicity"] for s in data.get("squares", [])})


# ---------------------------------------------------------------- models


def zigzag_model(shape: ZigzagShape, order: int = 1, labels: bool = False) -> Bicomplex:
    """The indecomposable complex of a given shape, all maps +1."""
    cells = shape.cells
    dims = {c: 1 for c in cells}
    one = SparseMatrix.identity(1, order)
    dl, dbl = {}, {}
    for i in range(shape.start, shape.end + 1):
        if i % 2:
            continue
        p, q = _cell(shape.k, i)
        if i + 1 <= shape.end:
            dl[(p, q)] = one
        if i - 1 >= shape.start:
            dbl[(p, q)] = one
    names = {c: [f"x{c[0]}{c[1]}"] for c in cells} if labels else None
    return Bicomplex(order, dims, dl, dbl, names)


def square_model(p: int = 0, q: int = 0, order: int = 1) -> Bicomplex:
    """Square with bottom-left corner (p, q); all four maps isomorphisms."""
    one = SparseMatrix.identity(1, order)
    return Bicomplex(order, {c: 1 for c in _square_cells(p, q)},
                     {(p, q): one, (p, q + 1): one},
                     {(p, q): one, (p + 1, q): -one})


# ---------------------------------------------------------------- rank-based decomposition


def _odd_shape(k: int, p: int, q: int) -> ZigzagShape:
    m = abs(p + q - k)
    if m == 0:
        return ZigzagShape.dot(p, q)
    if p + q < k:
        # generators (p, q+m) ... (p+m, q) on the lower antidiagonal k
        return ZigzagShape(k, 2 * p, 2 * (p + m))
    # images (p-m, q) ... (p, q-m) on the upper antidiagonal k
    return ZigzagShape(k - 1, 2 * (p - m) - 1, 2 * p - 1)


def multiplicities_from_ranks(A: Bicomplex) -> ZigzagMultiset:
    """Zigzag and square multiplicities from spectral ranks and b-numbers.

    Even zigzags of length 2r come from rank d_r of the column sequence (anchor
    at the source) and of the row sequence (mirror shape); odd ones from the
    b-numbers; squares from the dimension bookkeeping.
    """
    if A.is_truncated():
        raise ValueError("zigzag multiplicities need the whole complex; this one is window-compiled")
    key = "zigzag-ranks"
    if key in A._cache:
        return A._cache[key]
    Z = ZigzagMultiset()
    col, row = fss(A, "column"), fss(A, "row")
    for r, pg in enumerate(col.pages, 1):
        for (p, q), n in pg.diff_ranks.items():
            Z.add_zigzag(ZigzagShape.column(p, q, r), n)
    for r, pg in enumerate(row.pages, 1):
        for (p, q), n in pg.diff_ranks.items():
            Z.add_zigzag(ZigzagShape.row(p, q, r), n)
    for (k, p, q), n in purity_table(A).b.items():
        Z.add_zigzag(_odd_shape(k, p, q), n)
    rest = dict(A.dims)
    for c, n in Z.coverage().items():
        rest[c] = rest.get(c, 0) - n
    for b in sorted(rest):
        n = rest.get(b, 0)
        if n < 0:
            raise BookkeepingError(f"negative remaining dimension {n} at {b}")
        if n:
            Z.add_square(b, n)
            for c in _square_cells(*b):
                rest[c] = rest.get(c, 0) - n
    if not Z.bookkeeping_ok(A):
        raise BookkeepingError("square multiplicities do not close the dimension bookkeeping")
    A._cache[key] = Z
    return Z


def decompose(A: Bicomplex, oracle: bool | None = None) -> ZigzagMultiset:
    """Multiset of A, through the oracle for small complexes (or when forced)."""
    from .oracle import OracleInconclusive, brute_force_decompose

    use = oracle if oracle is not None else A.total_dim() <= ORACLE_SIZE_LIMIT
    if use and not A.is_truncated():
        try:
            return brute_force_decompose(A)
        except OracleInconclusive:
            if oracle:
                raise
    return multiplicities_from_ranks(A)


# ---------------------------------------------------------------- properties


@dataclass
class PropertyResult:
    which: str
    holds: bool
    witness: str | None
    zigzag_verdict: bool
    spectral_verdict: bool

    def __bool__(self) -> bool:
        return self.holds


def _zigzag_ok(which: str, s: ZigzagShape) -> bool:
    if which == "ddbar":
        return s.length == 1
    if which == "page1":
        return s.length <= 2
    return s.length in (1, 3)


def check_property(A: Bicomplex, which: str, oracle: bool | None = None) -> PropertyResult:
    """Decide ddbar / page1 / ddc3 from the multiset and from spectral data.

    Raises :class:`ConsistencyFault` if the two routes disagree.
    """
    which = {"page1_ddbar": "page1", "page1-ddbar": "page1", "ddc+3": "ddc3"}.get(which, which)
    if which not in PROPERTIES:
        raise ValueError(f"unknown property {which!r}; expected one of {PROPERTIES}")
    if A.is_truncated():
        raise ValueError("property checks need the whole complex; this one is window-compiled")
    Z = decompose(A, oracle)
    bad = [s for s, _ in Z.zigzags() if not _zigzag_ok(which, s)]
    zig = not bad

    col, row = degeneration_page(A)
    pt = purity_table(A)
    limit = 2 if which == "page1" else 1
    offset = 1 if which == "ddc3" else 0
    impure = pt.impure(offset)
    spec = col <= limit and row <= limit and not impure

    if zig != spec:
        raise ConsistencyFault(f"{which}: zigzag verdict {zig} but spectral verdict {spec}")
    witness = None
    if not spec:
        if impure:
            (k, p, q), n = impure[0]
            witness = f"b_{k}^{{{p},{q}}} = {n} with |p+q-k| = {abs(p + q - k)}"
        elif col > limit:
            r, b, n = next(t for t in fss(A, "column").nonzero_differentials() if t[0] >= limit)
            witness = f"column differential d_{r} of rank {n} at {b}"
        else:
            r, b, n = next(t for t in fss(A, "row").nonzero_differentials() if t[0] >= limit)
            witness = f"row differential d_{r} of rank {n} at {b}"
        witness += f"; offending summand {bad[0].describe()}"
    return PropertyResult(which, spec, witness, zig, spec)


def looks_like_manifold(Z: ZigzagMultiset, k: int) -> tuple[bool, str | None]:
    """Shape conditions satisfied by the complex of a compact k-dimensional manifold.

    (1) invariance under (p,q) -> (q,p) and (p,q) -> (k-q, k-p);
    (2) only dots touch the corners (0,0), (k,0), (0,k), (k,k);
    (3) for k = 2, no even-length zigzags.  Squares are ignored.
    """
    zz = Z.zigzag_part()
    if {s.transpose(): n for s, n in zz.items()} != zz:
        s = next(s for s in zz if zz.get(s.transpose(), 0) != zz[s])
        return False, f"condition (1): not symmetric under p<->q, e.g. {s.describe()}"
    if {s.reflect(k): n for s, n in zz.items()} != zz:
        s = next(s for s in zz if zz.get(s.reflect(k), 0) != zz[s])
        return False, f"condition (1): not symmetric under the antidiagonal p+q={k}, e.g. {s.describe()}"
    corners = {(0, 0), (k, 0), (0, k), (k, k)}
    for s, _ in sorted(zz.items()):
        if s.length > 1 and corners & set(s.cells):
            return False, f"condition (2): {s.describe()} occupies a corner"
    if k == 2:
        for s, _ in sorted(zz.items()):
            if s.is_even:
                return False, f"condition (3): even zigzag {s.describe()} in dimension 2"
    return True, None


def bigraded_quasi_iso_type_equal(A: Bicomplex, B: Bicomplex) -> bool:
    """Whether A and B have the same zigzag multiplicities (squares ignored)."""
    return multiplicities_from_ranks(A).zigzag_part() == multiplicities_from_ranks(B).zigzag_part()
