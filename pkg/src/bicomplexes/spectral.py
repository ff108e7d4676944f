"""Column and row spectral sequences, E_infinity, and the b_k^{p,q} gradings.

Everything is computed inside the total complex with canonical subspaces.  In
total degree k, with F^p the span of bidegrees whose column index is >= p,

    Z_r^p = {x in F^p A^k : dx in F^{p+r} A^{k+1}}
    E_r^p = Z_r^p / (Z_{r-1}^{p+1} + d Z_{r-1}^{p-r+1})
    rank d_r^p = dim Z_r^p - dim(Z_{r+1}^p + Z_{r-1}^{p+1})

The row sequence is the column sequence of the mirrored complex.  Work is
split over the connected components of the basis graph, which are direct
summands, so only small eliminations are ever performed.
"""
from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field as dc_field

from .complex import Bicomplex, mirror, split_components
from .linalg import Subspace, kernel_vectors

__all__ = [
    "PageData",
    "SpectralReport",
    "PurityTable",
    "fss",
    "purity_table",
    "degeneration_page",
    "worker_count",
    "WORKERS_ENV",
]

Bidegree = tuple[int, int]
WORKERS_ENV = "BICOMPLEXES_WORKERS"


def worker_count() -> int:
    """Number of worker processes, from the ``BICOMPLEXES_WORKERS`` variable (default 1)."""
    try:
        return max(1, int(os.environ.get(WORKERS_ENV, "1")))
    except ValueError:
        return 1


@dataclass
class PageData:
    dims: dict[Bidegree, int]
    diff_ranks: dict[Bidegree, int]


@dataclass
class SpectralReport:
    kind: str
    pages: list[PageData]
    stabilization_page: int
    einfty_dims: dict[Bidegree, int]
    degrees: list[int] = dc_field(default_factory=list)

    def page(self, r: int) -> PageData:
        """Page r (1-based); pages past the last stored one equal E_infinity."""
        if r < 1:
            raise ValueError("pages start at r = 1")
        if r <= len(self.pages):
            return self.pages[r - 1]
        return PageData(dict(self.einfty_dims), {})

    def rank(self, r: int, p: int, q: int) -> int:
        return self.page(r).diff_ranks.get((p, q), 0)

    def dim(self, r: int, p: int, q: int) -> int:
        return self.page(r).dims.get((p, q), 0)

    def nonzero_differentials(self) -> list[tuple[int, Bidegree, int]]:
        return [(r, b, n) for r, pg in enumerate(self.pages, 1) for b, n in sorted(pg.diff_ranks.items()) if n]

    def table(self) -> str:
        """Deterministic text table ordered by (k, p, q)."""
        lines = [f"{self.kind} spectral sequence; degenerates at E_{self.stabilization_page}"]
        for r, pg in enumerate(self.pages, 1):
            lines.append(f"E_{r}:")
            keys = sorted(set(pg.dims) | set(pg.diff_ranks), key=lambda b: (b[0] + b[1], b[0], b[1]))
            for p, q in keys:
                d, rk = pg.dims.get((p, q), 0), pg.diff_ranks.get((p, q), 0)
                if d or rk:
                    lines.append(f"  k={p + q} (p,q)=({p},{q}) dim={d} rank d_{r}={rk}")
        lines.append("E_inf:")
        for p, q in sorted(self.einfty_dims, key=lambda b: (b[0] + b[1], b[0], b[1])):
            if self.einfty_dims[(p, q)]:
                lines.append(f"  k={p + q} (p,q)=({p},{q}) dim={self.einfty_dims[(p, q)]}")
        return "\n".join(lines)


@dataclass
class PurityTable:
    b: dict[tuple[int, int, int], int]

    def get(self, k: int, p: int, q: int) -> int:
        return self.b.get((k, p, q), 0)

    def total(self, k: int) -> int:
        return sum(n for (kk, _, _), n in self.b.items() if kk == k)

    def impure(self, max_offset: int = 0) -> list[tuple[tuple[int, int, int], int]]:
        """Nonzero entries with |p+q-k| > max_offset, sorted."""
        return [(key, n) for key, n in sorted(self.b.items()) if n and abs(key[1] + key[2] - key[0]) > max_offset]

    def is_pure(self) -> bool:
        return not self.impure(0)

    def table(self) -> str:
        lines = ["b_k^{p,q}"]
        for (k, p, q), n in sorted(self.b.items()):
            if n:
                lines.append(f"  k={k} (p,q)=({p},{q}) b={n}")
        return "\n".join(lines)


# ---------------------------------------------------------------- engine


class _Engine:
    """Cached filtered subspaces of one (small) bicomplex."""

    def __init__(self, A: Bicomplex) -> None:
        self.A = A
        self.order = A.field_order
        self._cache: dict = {}

    def layout(self, k):
        return self.A.degree_layout(k)

    def n(self, k):
        return self.A.degree_dim(k)

    def Z(self, k: int, p: int, r: int | None, axis: int = 0) -> Subspace:
        """{x in F^p A^k : dx in F^{p+r}}; r=None means dx = 0."""
        key = ("Z", k, p, r, axis)
        if key in self._cache:
            return self._cache[key]
        n = self.n(k)
        lay = self.layout(k)
        cols = [off + i for b, off, m in lay if b[axis] >= p for i in range(m)]
        if not cols:
            res = Subspace.zero(n, self.order)
        else:
            d = self.A.total_differential(k)
            lay1 = self.layout(k + 1)
            if r is None:
                rows = [d.row_data[i] for i in range(d.rows)]
            else:
                rows = [d.row_data[off + i] for b, off, m in lay1 if b[axis] < p + r for i in range(m)]
            colset = {c: j for j, c in enumerate(cols)}
            sub = []
            for row in rows:
                rr = {colset[c]: v for c, v in row.items() if c in colset}
                if rr:
                    sub.append(rr)
            vecs = kernel_vectors(sub, len(cols), self.order)
            res = Subspace.span(({cols[c]: v for c, v in vec.items()} for vec in vecs), n, self.order)
        self._cache[key] = res
        return res

    def dZ(self, k: int, p: int, r: int, axis: int = 0) -> Subspace:
        """d(Z_r^p of degree k-1), a subspace of A^k."""
        key = ("dZ", k, p, r, axis)
        if key not in self._cache:
            d = self.A.total_differential(k - 1)
            src = self.Z(k - 1, p, r, axis)
            self._cache[key] = Subspace.span((d.apply(v) for v in src.vectors), self.n(k), self.order)
        return self._cache[key]

    def image(self, k: int) -> Subspace:
        key = ("im", k)
        if key not in self._cache:
            d = self.A.total_differential(k - 1)
            self._cache[key] = Subspace.span(d.column_data(), self.n(k), self.order)
        return self._cache[key]

    def span_of(self, k: int, axis: int) -> tuple[int, int]:
        idx = [b[axis] for b, _, _ in self.layout(k)]
        return min(idx), max(idx)

    # pages

    def page_dim(self, k, p, r, axis=0) -> int:
        num = self.Z(k, p, r, axis)
        if num.dim == 0:
            return 0
        den = self.Z(k, p + 1, r - 1, axis) + self.dZ(k, p - r + 1, r - 1, axis)
        return num.dim - den.dim

    def diff_rank(self, k, p, r, axis=0) -> int:
        num = self.Z(k, p, r, axis)
        if num.dim == 0:
            return 0
        return num.dim - (self.Z(k, p, r + 1, axis) + self.Z(k, p + 1, r - 1, axis)).dim

    def einfty_dim(self, k, p, axis=0) -> int:
        num = self.Z(k, p, None, axis)
        if num.dim == 0:
            return 0
        # im d intersected with F^p is d{x : dx in F^p}
        low = self.A.bounds()[2 * axis]
        den = self.Z(k, p + 1, None, axis) + self.dZ(k, low, p - low, axis)
        return num.dim - den.dim

    # purity

    def V(self, k, p, q) -> Subspace:
        key = ("V", k, p, q)
        if key not in self._cache:
            im = self.image(k)
            a = self.Z(k, p, None, 0) + im
            b = self.Z(k, q, None, 1) + im
            self._cache[key] = a & b
        return self._cache[key]


def _column_component(C: Bicomplex, degrees: list[int]):
    if not C.del_maps and not C.delbar_maps:
        dims = {b: n for b, n in C.dims.items() if b[0] + b[1] in degrees}
        return [(dict(dims), {b: 0 for b in dims})], dims
    eng = _Engine(C)
    pmin, pmax = C.bounds()[0], C.bounds()[1]
    width = pmax - pmin
    pages = []
    for r in range(1, width + 2):
        dims, ranks = {}, {}
        for k in degrees:
            if C.degree_dim(k) == 0:
                continue
            lo, hi = eng.span_of(k, 0)
            for p in range(lo, hi + 1):
                if C.dim(p, k - p) == 0:
                    continue
                dims[(p, k - p)] = eng.page_dim(k, p, r)
                ranks[(p, k - p)] = eng.diff_rank(k, p, r)
        pages.append((dims, ranks))
    einf = {}
    for k in degrees:
        if C.degree_dim(k) == 0:
            continue
        lo, hi = eng.span_of(k, 0)
        for p in range(lo, hi + 1):
            if C.dim(p, k - p):
                einf[(p, k - p)] = eng.einfty_dim(k, p)
    return pages, einf


def _map_components(fn, comps, degrees):
    workers = worker_count()
    if workers > 1 and len(comps) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(fn, [C for C in comps], [degrees] * len(comps)))
    return [fn(C, degrees) for C in comps]


def _column_report(A: Bicomplex) -> SpectralReport:
    degrees = A.complete_degrees()
    comps = [C for C, _ in split_components(A)]
    results = _map_components(_column_component, comps, degrees)
    npages = max([len(p) for p, _ in results] + [1])
    pages = [PageData({}, {}) for _ in range(npages)]
    einf: dict[Bidegree, int] = {}
    for comp_pages, comp_einf in results:
        for b, n in comp_einf.items():
            einf[b] = einf.get(b, 0) + n
        for r in range(npages):
            dims, ranks = comp_pages[r] if r < len(comp_pages) else (comp_einf, {})
            for b, n in dims.items():
                pages[r].dims[b] = pages[r].dims.get(b, 0) + n
            for b, n in ranks.items():
                pages[r].diff_ranks[b] = pages[r].diff_ranks.get(b, 0) + n
    for b in set(A.dims):
        if b[0] + b[1] in degrees:
            einf.setdefault(b, 0)
            for pg in pages:
                pg.dims.setdefault(b, 0)
    stab = npages
    while stab > 1 and _same_dims(pages[stab - 2].dims, einf):
        stab -= 1
    if not _same_dims(pages[stab - 1].dims, einf):
        stab += 1  # only possible when the cap page itself differs, which boundedness forbids
    return SpectralReport("column", pages, stab, einf, degrees)


def _same_dims(a: dict, b: dict) -> bool:
    keys = set(a) | set(b)
    return all(a.get(k, 0) == b.get(k, 0) for k in keys)


def _transpose(rep: SpectralReport) -> SpectralReport:
    tr = lambda d: {(q, p): n for (p, q), n in d.items()}
    return SpectralReport(
        "row",
        [PageData(tr(pg.dims), tr(pg.diff_ranks)) for pg in rep.pages],
        rep.stabilization_page,
        tr(rep.einfty_dims),
        rep.degrees,
    )


def fss(A: Bicomplex, kind: str = "column") -> SpectralReport:
    """Spectral sequence of the column (Frolicher) or row filtration.

    Page keys are bidegrees of A; ``diff_ranks[(p, q)]`` is the rank of the
    page-r differential leaving (p, q).  For windowed complexes only complete
    degrees are reported.
    """
    if kind == "column":
        key = "fss-column"
        if key not in A._cache:
            A._cache[key] = _column_report(A)
        return A._cache[key]
    if kind == "row":
        key = "fss-row"
        if key not in A._cache:
            A._cache[key] = _transpose(fss(mirror(A), "column"))
        return A._cache[key]
    raise ValueError(f"unknown spectral sequence kind {kind!r}; expected 'column' or 'row'")


def degeneration_page(A: Bicomplex) -> tuple[int, int]:
    """Least r with E_r = E_infinity, for the column and the row sequence."""
    return fss(A, "column").stabilization_page, fss(A, "row").stabilization_page


# ---------------------------------------------------------------- purity


def _purity_component(C: Bicomplex, degrees: list[int]) -> dict:
    if not C.del_maps and not C.delbar_maps:
        return {(p + q, p, q): n for (p, q), n in C.dims.items() if p + q in degrees}
    eng = _Engine(C)
    out = {}
    for k in degrees:
        if C.degree_dim(k) == 0:
            continue
        plo, phi = eng.span_of(k, 0)
        qlo, qhi = eng.span_of(k, 1)
        for p in range(plo, phi + 1):
            for q in range(qlo, qhi + 1):
                v = eng.V(k, p, q)
                if v.dim == 0:
                    continue
                rest = eng.V(k, p + 1, q) + eng.V(k, p, q + 1)
                b = v.dim - rest.dim
                if b:
                    out[(k, p, q)] = b
    return out


def purity_table(A: Bicomplex) -> PurityTable:
    """b_k^{p,q} = dim gr^p_F gr^q_Fbar H^k for every complete degree k."""
    key = "purity"
    if key not in A._cache:
        degrees = A.complete_degrees()
        comps = [C for C, _ in split_components(A)]
        total: dict = {}
        for part in _map_components(_purity_component, comps, degrees):
            for key2, n in part.items():
                total[key2] = total.get(key2, 0) + n
        A._cache[key] = PurityTable(dict(sorted(total.items())))
    return A._cache[key]
