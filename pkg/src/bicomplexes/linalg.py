"""Sparse exact linear algebra over cyclotomic fields.

Vectors are ``dict[int, value]`` maps from coordinate to nonzero value.  Inside
this module values are "raw" field elements: plain ``mpq`` when the field is
Q (orders 1 and 2), otherwise :class:`CyclotomicScalar`.  Public types convert
at the boundary through :class:`Field`.
"""
from __future__ import annotations

import heapq
from collections import defaultdict
from functools import lru_cache
from typing import Iterable, Mapping, Sequence

from gmpy2 import mpq

from .cyclotomic import CyclotomicScalar, OrderMismatchError, euler_phi, to_rational

__all__ = [
    "Field",
    "SparseMatrix",
    "Subspace",
    "ContainmentError",
    "DimensionMismatchError",
    "rank_kernel_image",
    "rank_of_vectors",
    "kernel_vectors",
    "subspace_ops",
]


class DimensionMismatchError(ValueError):
    pass


class ContainmentError(ValueError):
    pass


class Field:
    """Raw-value helpers for Q(z_n)."""

    __slots__ = ("order", "phi", "zero", "one")

    def __init__(self, order: int) -> None:
        self.order = order
        self.phi = euler_phi(order)
        if self.phi == 1:
            self.zero, self.one = mpq(0), mpq(1)
        else:
            self.zero, self.one = CyclotomicScalar.zero(order), CyclotomicScalar.one(order)

    def lower(self, x):
        if isinstance(x, CyclotomicScalar):
            if x.order != self.order:
                raise OrderMismatchError(f"scalar of order {x.order} in a complex of order {self.order}")
            return x.coeffs[0] if self.phi == 1 else x
        if self.phi == 1:
            return to_rational(x)
        return CyclotomicScalar.rational(self.order, x)

    def lift(self, v) -> CyclotomicScalar:
        if self.phi == 1:
            return CyclotomicScalar._raw(self.order, (v,))
        return v

    def conj(self, v):
        return v if self.phi == 1 else v.conjugate()

    def root(self, power: int = 1):
        return self.lower(CyclotomicScalar.root_of_unity(self.order, power))


@lru_cache(maxsize=None)
def field(order: int) -> Field:
    return Field(order)


# ---------------------------------------------------------------- vectors


def _axpy(target: dict, f, src: dict) -> None:
    """target -= f * src, in place, dropping zeros."""
    for c, v in src.items():
        old = target.get(c)
        nv = -f * v if old is None else old - f * v
        if nv:
            target[c] = nv
        elif old is not None:
            del target[c]


def _scale(vec: dict, f) -> dict:
    return {c: v * f for c, v in vec.items()}


# ---------------------------------------------------------------- elimination


def _eliminate(rows: Iterable[dict], one, full: bool):
    """Gaussian elimination with Markowitz-style pivoting.

    Returns a list of ``(row, pivot_col)`` with each row normalized to 1 at its
    pivot.  With ``full=True`` pivot columns are also cleared from the other
    pivot rows (reduced form, arbitrary pivot order).
    """
    rows = [dict(r) for r in rows if r]
    col_rows: dict[int, set[int]] = defaultdict(set)
    for i, r in enumerate(rows):
        for c in r:
            col_rows[c].add(i)
    done = [False] * len(rows)
    heap = [(len(r), i) for i, r in enumerate(rows)]
    heapq.heapify(heap)
    pivots: list[tuple[dict, int]] = []
    while heap:
        n, i = heapq.heappop(heap)
        if done[i] or n != len(rows[i]):
            continue
        r = rows[i]
        done[i] = True
        if not r:
            continue
        c = min(r, key=lambda k: (len(col_rows[k]), k))
        piv = r[c]
        if piv != one:
            inv = one / piv
            r = {k: v * inv for k, v in r.items()}
            rows[i] = r
        for k in r:
            col_rows[k].discard(i)
        for j in list(col_rows[c]):
            rj = rows[j]
            f = rj[c]
            for k, v in r.items():
                old = rj.get(k)
                nv = -f * v if old is None else old - f * v
                if nv:
                    if old is None:
                        col_rows[k].add(j)
                    rj[k] = nv
                elif old is not None:
                    del rj[k]
                    col_rows[k].discard(j)
            heapq.heappush(heap, (len(rj), j))
        pivots.append((r, c))
    if full:
        index: dict[int, set[int]] = defaultdict(set)
        for idx, (r, _) in enumerate(pivots):
            for k in r:
                index[k].add(idx)
        for idx in range(len(pivots) - 1, -1, -1):
            r, c = pivots[idx]
            for j in list(index[c]):
                if j == idx:
                    continue
                rj = pivots[j][0]
                f = rj[c]
                for k, v in r.items():
                    old = rj.get(k)
                    nv = -f * v if old is None else old - f * v
                    if nv:
                        if old is None:
                            index[k].add(j)
                        rj[k] = nv
                    elif old is not None:
                        del rj[k]
                        index[k].discard(j)
    return pivots


def rank_of_vectors(vectors: Iterable[dict], order: int = 1) -> int:
    return len(_eliminate(vectors, field(order).one, full=False))


def kernel_vectors(rows: Sequence[dict], ncols: int, order: int = 1) -> list[dict]:
    """Basis of {x : row . x = 0 for every row}, as sparse vectors."""
    one = field(order).one
    pivots = _eliminate(rows, one, full=True)
    pivot_cols = {c for _, c in pivots}
    by_col: dict[int, list[tuple[dict, int]]] = defaultdict(list)
    for r, c in pivots:
        for k in r:
            if k != c:
                by_col[k].append((r, c))
    basis = []
    for f in range(ncols):
        if f in pivot_cols:
            continue
        vec = {f: one}
        for r, c in by_col.get(f, ()):
            vec[c] = -r[f]
        basis.append(vec)
    return basis


def _rref(vectors: Iterable[dict], one) -> list[tuple[int, dict]]:
    """Canonical reduced echelon basis with leftmost pivots, sorted by pivot."""
    basis: dict[int, dict] = {}
    index: dict[int, set[int]] = defaultdict(set)  # column -> pivots of rows using it
    for v in vectors:
        v = dict(v)
        for c in [c for c in v if c in basis]:
            f = v.get(c)
            if f:
                _axpy(v, f, basis[c])
        if not v:
            continue
        p = min(v)
        inv = one / v[p]
        if v[p] != one:
            v = {k: x * inv for k, x in v.items()}
        for q in list(index[p]):
            b = basis[q]
            f = b[p]
            for k, x in v.items():
                old = b.get(k)
                nv = -f * x if old is None else old - f * x
                if nv:
                    if old is None:
                        index[k].add(q)
                    b[k] = nv
                elif old is not None:
                    del b[k]
                    index[k].discard(q)
        index.pop(p, None)
        basis[p] = v
        for k in v:
            if k != p:
                index[k].add(p)
    return sorted(basis.items())


# ---------------------------------------------------------------- matrices


class SparseMatrix:
    """An exact sparse ``rows x cols`` matrix over Q(z_order).

    Stored row-wise; no stored entry is zero.  Treat as immutable.
    """

    __slots__ = ("rows", "cols", "order", "_data", "_colcache")

    def __init__(self, rows: int, cols: int, order: int = 1, data: Sequence[dict] | None = None) -> None:
        if rows < 0 or cols < 0:
            raise ValueError("matrix dimensions must be non-negative")
        self.rows, self.cols, self.order = rows, cols, order
        if data is None:
            data = [{} for _ in range(rows)]
        if len(data) != rows:
            raise DimensionMismatchError("row data length differs from row count")
        self._data = tuple(data)
        self._colcache = None

    # construction

    @classmethod
    def from_entries(cls, rows: int, cols: int, order: int, entries: Mapping) -> "SparseMatrix":
        F = field(order)
        data = [{} for _ in range(rows)]
        for (r, c), v in entries.items():
            if not (0 <= r < rows and 0 <= c < cols):
                raise IndexError(f"entry ({r}, {c}) outside a {rows}x{cols} matrix")
            v = F.lower(v)
            if v:
                data[r][c] = v
        return cls(rows, cols, order, data)

    @classmethod
    def from_dense(cls, dense: Sequence[Sequence], order: int = 1, cols: int | None = None) -> "SparseMatrix":
        F = field(order)
        ncols = cols if cols is not None else (len(dense[0]) if dense else 0)
        data = []
        for row in dense:
            if len(row) != ncols:
                raise DimensionMismatchError("ragged dense matrix")
            data.append({c: F.lower(v) for c, v in enumerate(row) if v})
        data = [{c: v for c, v in r.items() if v} for r in data]
        return cls(len(dense), ncols, order, data)

    @classmethod
    def zero(cls, rows: int, cols: int, order: int = 1) -> "SparseMatrix":
        return cls(rows, cols, order)

    @classmethod
    def identity(cls, n: int, order: int = 1) -> "SparseMatrix":
        one = field(order).one
        return cls(n, n, order, [{i: one} for i in range(n)])

    @classmethod
    def from_columns(cls, columns: Sequence[dict], nrows: int, order: int = 1) -> "SparseMatrix":
        data = [{} for _ in range(nrows)]
        for j, col in enumerate(columns):
            for i, v in col.items():
                if v:
                    data[i][j] = v
        return cls(nrows, len(columns), order, data)

    # access

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    @property
    def row_data(self) -> tuple[dict, ...]:
        return self._data

    def column_data(self) -> list[dict]:
        if self._colcache is None:
            cols = [{} for _ in range(self.cols)]
            for i, r in enumerate(self._data):
                for j, v in r.items():
                    cols[j][i] = v
            self._colcache = cols
        return self._colcache

    @property
    def entries(self) -> dict[tuple[int, int], CyclotomicScalar]:
        F = field(self.order)
        return {(i, j): F.lift(v) for i, r in enumerate(self._data) for j, v in r.items()}

    def __getitem__(self, key) -> CyclotomicScalar:
        i, j = key
        F = field(self.order)
        return F.lift(self._data[i].get(j, F.zero))

    def nnz(self) -> int:
        return sum(len(r) for r in self._data)

    def is_zero(self) -> bool:
        return not any(self._data)

    def to_dense(self) -> list[list[CyclotomicScalar]]:
        F = field(self.order)
        return [[F.lift(r.get(j, F.zero)) for j in range(self.cols)] for r in self._data]

    def __eq__(self, other) -> bool:
        if not isinstance(other, SparseMatrix):
            return NotImplemented
        return self.shape == other.shape and self.order == other.order and self._data == other._data

    def __hash__(self):
        return hash((self.rows, self.cols, self.order, tuple(tuple(sorted(r.items())) for r in self._data)))

    def __repr__(self) -> str:
        return f"SparseMatrix({self.rows}x{self.cols}, order={self.order}, nnz={self.nnz()})"

    # arithmetic

    def _check(self, other: "SparseMatrix") -> None:
        if self.order != other.order:
            raise OrderMismatchError(f"matrices over Q(z_{self.order}) and Q(z_{other.order})")

    def __add__(self, other: "SparseMatrix") -> "SparseMatrix":
        self._check(other)
        if self.shape != other.shape:
            raise DimensionMismatchError(f"{self.shape} + {other.shape}")
        one = field(self.order).one
        data = []
        for a, b in zip(self._data, other._data):
            r = dict(a)
            _axpy(r, -one, b)
            data.append(r)
        return SparseMatrix(self.rows, self.cols, self.order, data)

    def __neg__(self) -> "SparseMatrix":
        return SparseMatrix(self.rows, self.cols, self.order, [{c: -v for c, v in r.items()} for r in self._data])

    def __sub__(self, other: "SparseMatrix") -> "SparseMatrix":
        return self + (-other)

    def scale(self, s) -> "SparseMatrix":
        f = field(self.order).lower(s)
        if not f:
            return SparseMatrix.zero(self.rows, self.cols, self.order)
        return SparseMatrix(self.rows, self.cols, self.order, [_scale(r, f) for r in self._data])

    def __matmul__(self, other: "SparseMatrix") -> "SparseMatrix":
        self._check(other)
        if self.cols != other.rows:
            raise DimensionMismatchError(f"{self.shape} @ {other.shape}")
        data = []
        for r in self._data:
            out: dict = {}
            for k, v in r.items():
                _axpy(out, -v, other._data[k])
            data.append(out)
        return SparseMatrix(self.rows, other.cols, self.order, data)

    def apply(self, vec: dict) -> dict:
        """Matrix times a sparse raw column vector."""
        out: dict = {}
        cols = self.column_data()
        for j, v in vec.items():
            _axpy(out, -v, cols[j])
        return out

    def transpose(self) -> "SparseMatrix":
        return SparseMatrix(self.cols, self.rows, self.order, [dict(c) for c in self.column_data()])

    def conjugate(self) -> "SparseMatrix":
        F = field(self.order)
        return SparseMatrix(self.rows, self.cols, self.order,
                            [{c: F.conj(v) for c, v in r.items()} for r in self._data])

    def conj_transpose(self) -> "SparseMatrix":
        return self.conjugate().transpose()

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "SparseMatrix":
        cmap = {c: j for j, c in enumerate(cols)}
        data = []
        for i in rows:
            data.append({cmap[c]: v for c, v in self._data[i].items() if c in cmap})
        return SparseMatrix(len(rows), len(cols), self.order, data)

    def permute(self, row_perm: Sequence[int], col_perm: Sequence[int]) -> "SparseMatrix":
        """Row i of the result is row row_perm[i]; column col_perm[j] becomes column j."""
        return self.submatrix(row_perm, col_perm)

    def kron(self, other: "SparseMatrix") -> "SparseMatrix":
        self._check(other)
        data = []
        for ra in self._data:
            for rb in other._data:
                out = {}
                for ca, va in ra.items():
                    base = ca * other.cols
                    for cb, vb in rb.items():
                        out[base + cb] = va * vb
                data.append(out)
        return SparseMatrix(self.rows * other.rows, self.cols * other.cols, self.order, data)

    @staticmethod
    def block(blocks: Sequence[Sequence["SparseMatrix | None"]], row_sizes: Sequence[int],
              col_sizes: Sequence[int], order: int) -> "SparseMatrix":
        """Assemble from a grid of blocks (None means zero)."""
        col_off = [0]
        for s in col_sizes:
            col_off.append(col_off[-1] + s)
        data = []
        for bi, rs in enumerate(row_sizes):
            rows = [{} for _ in range(rs)]
            for bj, blk in enumerate(blocks[bi]):
                if blk is None:
                    continue
                if blk.shape != (rs, col_sizes[bj]):
                    raise DimensionMismatchError(f"block ({bi},{bj}) has shape {blk.shape}")
                off = col_off[bj]
                for i, r in enumerate(blk._data):
                    for c, v in r.items():
                        rows[i][off + c] = v
            data.extend(rows)
        return SparseMatrix(sum(row_sizes), col_off[-1], order, data)

    # linear algebra

    def rank(self) -> int:
        if self.rows <= self.cols:
            return rank_of_vectors(self._data, self.order)
        return rank_of_vectors(self.column_data(), self.order)

    def kernel(self) -> list[dict]:
        return kernel_vectors(self._data, self.cols, self.order)


# ---------------------------------------------------------------- subspaces


class Subspace:
    """A subspace of Q(z_n)^ambient_dim held in canonical reduced echelon form.

    Two subspaces are equal as sets exactly when their stored bases coincide.
    """

    __slots__ = ("ambient_dim", "order", "_rows")

    def __init__(self, ambient_dim: int, order: int, rows: Sequence[tuple[int, dict]]) -> None:
        self.ambient_dim = ambient_dim
        self.order = order
        self._rows = tuple(rows)

    @classmethod
    def span(cls, vectors: Iterable[dict], ambient_dim: int, order: int = 1) -> "Subspace":
        vectors = list(vectors)
        for v in vectors:
            if v and (max(v) >= ambient_dim or min(v) < 0):
                raise DimensionMismatchError("vector outside the ambient space")
        return cls(ambient_dim, order, _rref(vectors, field(order).one))

    @classmethod
    def from_dense(cls, vectors: Sequence[Sequence], order: int = 1, ambient_dim: int | None = None) -> "Subspace":
        F = field(order)
        n = ambient_dim if ambient_dim is not None else (len(vectors[0]) if vectors else 0)
        return cls.span(({i: F.lower(x) for i, x in enumerate(v) if x} for v in vectors), n, order)

    @classmethod
    def zero(cls, ambient_dim: int, order: int = 1) -> "Subspace":
        return cls(ambient_dim, order, ())

    @classmethod
    def full(cls, ambient_dim: int, order: int = 1) -> "Subspace":
        one = field(order).one
        return cls(ambient_dim, order, [(i, {i: one}) for i in range(ambient_dim)])

    @property
    def dim(self) -> int:
        return len(self._rows)

    def __len__(self) -> int:
        return len(self._rows)

    @property
    def pivots(self) -> tuple[int, ...]:
        return tuple(p for p, _ in self._rows)

    @property
    def vectors(self) -> list[dict]:
        return [dict(v) for _, v in self._rows]

    @property
    def basis(self) -> list[list[CyclotomicScalar]]:
        F = field(self.order)
        return [[F.lift(v.get(i, F.zero)) for i in range(self.ambient_dim)] for _, v in self._rows]

    def __eq__(self, other) -> bool:
        if not isinstance(other, Subspace):
            return NotImplemented
        return (self.ambient_dim, self.order, self._rows) == (other.ambient_dim, other.order, other._rows)

    def __hash__(self):
        return hash((self.ambient_dim, self.order, tuple((p, tuple(sorted(v.items()))) for p, v in self._rows)))

    def __repr__(self) -> str:
        return f"Subspace(dim={self.dim}, ambient={self.ambient_dim})"

    def _check(self, other: "Subspace") -> None:
        if self.ambient_dim != other.ambient_dim:
            raise DimensionMismatchError(f"ambient dimensions {self.ambient_dim} and {other.ambient_dim}")
        if self.order != other.order:
            raise OrderMismatchError("subspaces over different fields")

    def reduce(self, vec: dict) -> dict:
        """Remainder of ``vec`` after eliminating this subspace's pivot coordinates."""
        v = dict(vec)
        rows = dict(self._rows)
        for c in [c for c in v if c in rows]:
            f = v.get(c)
            if f:
                _axpy(v, f, rows[c])
        return v

    def contains_vector(self, vec: dict) -> bool:
        return not self.reduce(vec)

    def contains(self, other: "Subspace") -> bool:
        self._check(other)
        return all(self.contains_vector(v) for _, v in other._rows)

    def __le__(self, other: "Subspace") -> bool:
        return other.contains(self)

    def __add__(self, other: "Subspace") -> "Subspace":
        self._check(other)
        return Subspace.span(self.vectors + other.vectors, self.ambient_dim, self.order)

    def annihilator_rows(self) -> list[dict]:
        """Functionals whose common kernel is this subspace (one per free column)."""
        one = field(self.order).one
        piv = {p: v for p, v in self._rows}
        out = []
        by_col: dict[int, list[int]] = defaultdict(list)
        for p, v in self._rows:
            for k in v:
                if k != p:
                    by_col[k].append(p)
        for f in range(self.ambient_dim):
            if f in piv:
                continue
            row = {f: one}
            for p in by_col.get(f, ()):
                row[p] = -piv[p][f]
            out.append(row)
        return out

    def intersection(self, other: "Subspace") -> "Subspace":
        self._check(other)
        if self.dim > other.dim:
            self, other = other, self
        # solve for combinations of self's basis lying in other
        ann = other.annihilator_rows()
        if not ann:
            return self
        basis = self.vectors
        # matrix (ann x basis): entry = functional(basis_j)
        rows = []
        for a in ann:
            row = {}
            for j, b in enumerate(basis):
                s = None
                for k, x in a.items():
                    y = b.get(k)
                    if y is not None:
                        s = x * y if s is None else s + x * y
                if s:
                    row[j] = s
            rows.append(row)
        combos = kernel_vectors(rows, len(basis), self.order)
        vecs = []
        for c in combos:
            v: dict = {}
            for j, coef in c.items():
                _axpy(v, -coef, basis[j])
            vecs.append(v)
        return Subspace.span(vecs, self.ambient_dim, self.order)

    def __and__(self, other: "Subspace") -> "Subspace":
        return self.intersection(other)

    def image(self, M: SparseMatrix) -> "Subspace":
        if M.cols != self.ambient_dim:
            raise DimensionMismatchError(f"map with {M.cols} columns applied to ambient {self.ambient_dim}")
        return Subspace.span((M.apply(v) for _, v in self._rows), M.rows, self.order)

    @staticmethod
    def preimage(M: SparseMatrix, V: "Subspace") -> "Subspace":
        """{x : M x in V}."""
        if M.rows != V.ambient_dim:
            raise DimensionMismatchError(f"map into {M.rows} dims, subspace of ambient {V.ambient_dim}")
        ann = V.annihilator_rows()
        # rows of (ann . M)
        rows = []
        for a in ann:
            r: dict = {}
            for k, x in a.items():
                _axpy(r, -x, M.row_data[k])
            rows.append(r)
        return Subspace.span(kernel_vectors(rows, M.cols, M.order), M.cols, M.order)

    def quotient_basis(self, sub: "Subspace") -> list[dict]:
        """Vectors of this space whose classes form a basis of self / sub."""
        self._check(sub)
        if not self.contains(sub):
            raise ContainmentError("quotient requires the second subspace to be contained in the first")
        current = sub
        out = []
        for _, v in self._rows:
            if not current.contains_vector(v):
                out.append(dict(v))
                current = Subspace.span(current.vectors + [v], self.ambient_dim, self.order)
        return out

    def quotient_coordinates(self, sub: "Subspace"):
        """Return ``(reps, coords)``: representatives of a basis of self / sub and a
        function sending a vector of self to its coordinates in that basis."""
        reps = self.quotient_basis(sub)
        one = field(self.order).one
        basis: dict[int, tuple[dict, dict]] = {}
        for i, r in enumerate(reps):
            v, t = sub.reduce(r), {i: one}
            _reduce_tagged(v, t, basis)
            p = min(v)
            inv = one / v[p]
            basis[p] = (_scale(v, inv), _scale(t, inv))

        def coords(vec: dict) -> dict:
            v, t = sub.reduce(vec), {}
            _reduce_tagged(v, t, basis, sign=-1)
            if v:
                raise ContainmentError("vector does not lie in the subspace")
            return t

        return reps, coords


def _reduce_tagged(v: dict, t: dict, basis: dict, sign: int = 1) -> None:
    """Eliminate pivots of ``basis`` from v, recording the combination in t."""
    while True:
        hit = [c for c in v if c in basis]
        if not hit:
            return
        c = min(hit)
        f = v[c]
        bv, bt = basis[c]
        _axpy(v, f, bv)
        # v_new = v - f*bv ; the tag tracks  v = (sum tag*reps) + remainder
        _axpy(t, f if sign == 1 else -f, bt)


def induced_quotient_map(M: SparseMatrix, src: Subspace, src_mod: Subspace,
                         dst: Subspace, dst_mod: Subspace) -> SparseMatrix:
    """Matrix of the map src/src_mod -> dst/dst_mod induced by M."""
    src_reps, _ = src.quotient_coordinates(src_mod)
    dst_reps, coords = dst.quotient_coordinates(dst_mod)
    cols = [coords(M.apply(r)) for r in src_reps]
    return SparseMatrix.from_columns(cols, len(dst_reps), M.order)


def rank_kernel_image(M: SparseMatrix) -> tuple[int, Subspace, Subspace]:
    kernel = Subspace.span(M.kernel(), M.cols, M.order)
    rank = M.cols - kernel.dim
    image = Subspace.span(M.column_data(), M.rows, M.order)
    assert image.dim == rank
    return rank, kernel, image


def subspace_ops(op: str, U: Subspace | None = None, V: Subspace | None = None, M: SparseMatrix | None = None):
    """Dispatch helper: ``sum``, ``intersection``, ``preimage``, ``image``, ``quotient``, ``induced``."""
    if op == "sum":
        return U + V
    if op == "intersection":
        return U & V
    if op == "preimage":
        return Subspace.preimage(M, V)
    if op == "image":
        return U.image(M)
    if op == "quotient":
        return U.quotient_basis(V)
    raise ValueError(f"unknown subspace operation {op!r}")
