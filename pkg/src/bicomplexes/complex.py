"""Bounded double complexes and their structural calculus."""
from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Iterable, Mapping, Sequence

from .cyclotomic import OrderMismatchError
from .linalg import SparseMatrix, Subspace, field, kernel_vectors

__all__ = [
    "Bicomplex",
    "RealStructure",
    "ValidationReport",
    "TotalCohomology",
    "validate",
    "direct_sum",
    "shift",
    "mirror",
    "tensor",
    "total_cohomology",
    "blowup_model",
    "dot",
    "dots",
    "split_components",
]

Bidegree = tuple[int, int]


class Bicomplex:
    """A bounded double complex of finite-dimensional Q(z_n)-vector spaces.

    ``dims`` maps bidegrees to dimensions.  ``del_[(p, q)]`` is the matrix of
    the (1,0)-differential out of ``(p, q)``; ``delbar[(p, q)]`` the
    (0,1)-differential.  Missing maps are zero.

    ``max_degree`` marks a window-compiled complex: differentials leaving total
    degree ``max_degree`` were not emitted, so only total degrees below it
    carry complete cohomological information.
    """

    __slots__ = ("field_order", "_dims", "_del", "_delbar", "labels", "basis", "max_degree", "_cache")

    def __init__(
        self,
        field_order: int,
        dims: Mapping[Bidegree, int],
        del_: Mapping[Bidegree, SparseMatrix] | None = None,
        delbar: Mapping[Bidegree, SparseMatrix] | None = None,
        labels: Mapping[Bidegree, Sequence[str]] | None = None,
        basis: Mapping | None = None,
        max_degree: int | None = None,
    ) -> None:
        self.field_order = field_order
        self._dims = {tuple(b): int(n) for b, n in dims.items() if n}
        if any(n < 0 for n in self._dims.values()):
            raise ValueError("negative dimension")
        self._del = self._clean(del_ or {}, (1, 0))
        self._delbar = self._clean(delbar or {}, (0, 1))
        self.labels = {tuple(b): list(v) for b, v in (labels or {}).items() if v}
        self.basis = dict(basis) if basis else None
        self.max_degree = max_degree
        self._cache: dict = {}

    def _clean(self, maps, step) -> dict:
        out = {}
        for (p, q), M in maps.items():
            if M.order != self.field_order:
                raise OrderMismatchError(f"map at {(p, q)} has order {M.order}, complex has {self.field_order}")
            src, dst = self.dim(p, q), self.dim(p + step[0], q + step[1])
            if M.shape != (dst, src):
                raise ValueError(f"map out of {(p, q)} has shape {M.shape}, expected {(dst, src)}")
            if not M.is_zero():
                out[(p, q)] = M
        return out

    # basic access

    def dim(self, p: int, q: int) -> int:
        return self._dims.get((p, q), 0)

    @property
    def dims(self) -> dict[Bidegree, int]:
        return dict(self._dims)

    @property
    def support(self) -> list[Bidegree]:
        return sorted(self._dims)

    def total_dim(self) -> int:
        return sum(self._dims.values())

    def del_(self, p: int, q: int) -> SparseMatrix:
        M = self._del.get((p, q))
        return M if M is not None else SparseMatrix.zero(self.dim(p + 1, q), self.dim(p, q), self.field_order)

    def delbar(self, p: int, q: int) -> SparseMatrix:
        M = self._delbar.get((p, q))
        return M if M is not None else SparseMatrix.zero(self.dim(p, q + 1), self.dim(p, q), self.field_order)

    @property
    def del_maps(self) -> dict[Bidegree, SparseMatrix]:
        return dict(self._del)

    @property
    def delbar_maps(self) -> dict[Bidegree, SparseMatrix]:
        return dict(self._delbar)

    def degrees(self) -> list[int]:
        return sorted({p + q for p, q in self._dims})

    def bounds(self) -> tuple[int, int, int, int]:
        """(pmin, pmax, qmin, qmax) of the support; zeros for the zero complex."""
        if not self._dims:
            return (0, 0, 0, 0)
        ps = [p for p, _ in self._dims]
        qs = [q for _, q in self._dims]
        return (min(ps), max(ps), min(qs), max(qs))

    def label(self, p: int, q: int, i: int) -> str:
        names = self.labels.get((p, q))
        return names[i] if names and i < len(names) else f"e{p},{q}[{i}]"

    def is_truncated(self) -> bool:
        return self.max_degree is not None

    def complete_degrees(self) -> list[int]:
        """Total degrees whose cohomology is fully determined by the stored data."""
        ds = self.degrees()
        if self.max_degree is None:
            return ds
        return [k for k in ds if k < self.max_degree]

    # total complex

    def degree_layout(self, k: int) -> list[tuple[Bidegree, int, int]]:
        """Blocks of total degree k as ``((p, q), offset, dim)`` sorted by p."""
        key = ("layout", k)
        if key not in self._cache:
            out, off = [], 0
            for (p, q) in sorted(b for b in self._dims if b[0] + b[1] == k):
                n = self._dims[(p, q)]
                out.append(((p, q), off, n))
                off += n
            self._cache[key] = out
        return self._cache[key]

    def degree_dim(self, k: int) -> int:
        return sum(n for _, _, n in self.degree_layout(k))

    def total_differential(self, k: int) -> SparseMatrix:
        """Matrix of d = del + delbar from total degree k to k+1."""
        key = ("d", k)
        if key not in self._cache:
            src = self.degree_layout(k)
            dst = {b: off for b, off, _ in self.degree_layout(k + 1)}
            rows = [{} for _ in range(self.degree_dim(k + 1))]
            for (p, q), off, _ in src:
                for M, tgt in ((self._del.get((p, q)), (p + 1, q)), (self._delbar.get((p, q)), (p, q + 1))):
                    if M is None:
                        continue
                    toff = dst[tgt]
                    for i, r in enumerate(M.row_data):
                        row = rows[toff + i]
                        for c, v in r.items():
                            row[off + c] = v
            self._cache[key] = SparseMatrix(len(rows), self.degree_dim(k), self.field_order, rows)
        return self._cache[key]

    # equality

    def __eq__(self, other) -> bool:
        if not isinstance(other, Bicomplex):
            return NotImplemented
        return (
            self.field_order == other.field_order
            and self._dims == other._dims
            and self._del == other._del
            and self._delbar == other._delbar
        )

    def __hash__(self):
        return hash((self.field_order, tuple(sorted(self._dims.items()))))

    def __repr__(self) -> str:
        return f"Bicomplex(order={self.field_order}, dims={dict(sorted(self._dims.items()))})"

    def with_labels(self, labels) -> "Bicomplex":
        return Bicomplex(self.field_order, self._dims, self._del, self._delbar, labels, self.basis, self.max_degree)


# ---------------------------------------------------------------- construction helpers


def dot(p: int = 0, q: int = 0, order: int = 1) -> Bicomplex:
    return Bicomplex(order, {(p, q): 1})


def dots(diamond: Mapping[Bidegree, int], order: int = 1) -> Bicomplex:
    """Complex with zero differential and the given dimensions."""
    return Bicomplex(order, dict(diamond))


# ---------------------------------------------------------------- validation


@dataclass(frozen=True)
class ValidationReport:
    ok: bool
    identity: str | None = None
    bidegree: Bidegree | None = None
    message: str = ""

    def __bool__(self) -> bool:
        return self.ok


def validate(A: Bicomplex) -> ValidationReport:
    """Check del^2 = delbar^2 = del delbar + delbar del = 0 everywhere."""
    for (p, q) in A.support:
        if A.max_degree is not None and p + q >= A.max_degree - 1:
            continue
        d, db = A.del_(p, q), A.delbar(p, q)
        if not (A.del_(p + 1, q) @ d).is_zero():
            return ValidationReport(False, "del^2", (p, q), f"del del != 0 on {(p, q)}")
        if not (A.delbar(p, q + 1) @ db).is_zero():
            return ValidationReport(False, "delbar^2", (p, q), f"delbar delbar != 0 on {(p, q)}")
        if not (A.del_(p, q + 1) @ db + A.delbar(p + 1, q) @ d).is_zero():
            return ValidationReport(False, "anticommutation", (p, q), f"del delbar + delbar del != 0 on {(p, q)}")
    return ValidationReport(True, message="valid")


# ---------------------------------------------------------------- structural operations


def _check_orders(*cs: Bicomplex) -> int:
    orders = {c.field_order for c in cs}
    if len(orders) > 1:
        raise OrderMismatchError(f"complexes over different fields: orders {sorted(orders)}")
    return orders.pop()


def direct_sum(*cs: Bicomplex) -> Bicomplex:
    """Bidegree-wise direct sum; basis of each summand in order."""
    if not cs:
        return Bicomplex(1, {})
    order = _check_orders(*cs)
    support = sorted({b for c in cs for b in c.dims})
    dims = {b: sum(c.dim(*b) for c in cs) for b in support}

    def summed(getter, step):
        out = {}
        for (p, q) in support:
            tgt = (p + step[0], q + step[1])
            if tgt not in dims:
                continue
            blocks = [getter(c, p, q) for c in cs]
            grid = [[blocks[i] if i == j else None for j in range(len(cs))] for i in range(len(cs))]
            M = SparseMatrix.block(grid, [c.dim(*tgt) for c in cs], [c.dim(p, q) for c in cs], order)
            out[(p, q)] = M
        return out

    labels = {}
    if any(c.labels for c in cs):
        for b in support:
            labels[b] = [c.label(*b, i) for c in cs for i in range(c.dim(*b))]
    maxd = [c.max_degree for c in cs if c.max_degree is not None]
    return Bicomplex(order, dims, summed(lambda c, p, q: c.del_(p, q), (1, 0)),
                     summed(lambda c, p, q: c.delbar(p, q), (0, 1)), labels,
                     max_degree=min(maxd) if maxd else None)


def shift(A: Bicomplex, i: int, j: int) -> Bicomplex:
    """A[i, j] with A[i, j]^{p,q} = A^{p-i, q-j}."""
    mv = lambda b: (b[0] + i, b[1] + j)
    return Bicomplex(
        A.field_order,
        {mv(b): n for b, n in A.dims.items()},
        {mv(b): M for b, M in A.del_maps.items()},
        {mv(b): M for b, M in A.delbar_maps.items()},
        {mv(b): v for b, v in A.labels.items()},
        max_degree=None if A.max_degree is None else A.max_degree + i + j,
    )


def mirror(A: Bicomplex) -> Bicomplex:
    """Transpose bidegrees, swap del and delbar, conjugate scalars."""
    tr = lambda b: (b[1], b[0])
    return Bicomplex(
        A.field_order,
        {tr(b): n for b, n in A.dims.items()},
        {tr(b): M.conjugate() for b, M in A.delbar_maps.items()},
        {tr(b): M.conjugate() for b, M in A.del_maps.items()},
        {tr(b): v for b, v in A.labels.items()},
        max_degree=A.max_degree,
    )


def tensor(A: Bicomplex, B: Bicomplex) -> Bicomplex:
    """Tensor product with Koszul sign on the left factor's total degree.

    The basis of (A (x) B)^{p,q} lists pairs of bidegrees ((p1,q1), (p2,q2)) in
    lexicographic order of (p1, q1), each block in Kronecker order.
    """
    order = _check_orders(A, B)
    F = field(order)
    blocks: dict[Bidegree, list[tuple[Bidegree, Bidegree, int]]] = {}
    dims: dict[Bidegree, int] = {}
    for a in A.support:
        for b in B.support:
            t = (a[0] + b[0], a[1] + b[1])
            blocks.setdefault(t, [])
    for t in blocks:
        off = 0
        for a in A.support:
            b = (t[0] - a[0], t[1] - a[1])
            n = A.dim(*a) * B.dim(*b)
            if n:
                blocks[t].append((a, b, off))
                off += n
        dims[t] = off
    offsets = {t: {(a, b): off for a, b, off in lst} for t, lst in blocks.items()}

    def build(getA, getB, step):
        out = {}
        for t, lst in blocks.items():
            tgt = (t[0] + step[0], t[1] + step[1])
            if tgt not in dims:
                continue
            rows = [{} for _ in range(dims[tgt])]
            for a, b, off in lst:
                na, nb = A.dim(*a), B.dim(*b)
                sign = -1 if (a[0] + a[1]) % 2 else 1
                # left factor
                a2 = (a[0] + step[0], a[1] + step[1])
                Ma = getA(*a)
                if (a2, b) in offsets[tgt] and not Ma.is_zero():
                    toff = offsets[tgt][(a2, b)]
                    for i, r in enumerate(Ma.row_data):
                        for c, v in r.items():
                            for k in range(nb):
                                rows[toff + i * nb + k][off + c * nb + k] = v
                b2 = (b[0] + step[0], b[1] + step[1])
                Mb = getB(*b)
                if (a, b2) in offsets[tgt] and not Mb.is_zero():
                    toff = offsets[tgt][(a, b2)]
                    nb2 = B.dim(*b2)
                    for i in range(na):
                        for k, r in enumerate(Mb.row_data):
                            for c, v in r.items():
                                rows[toff + i * nb2 + k][off + i * nb + c] = v if sign == 1 else -v
            M = SparseMatrix(dims[tgt], dims[t], order, rows)
            if not M.is_zero():
                out[t] = M
        return out

    labels = {}
    if A.labels or B.labels:
        for t, lst in blocks.items():
            labels[t] = [f"{A.label(*a, i)}*{B.label(*b, k)}" for a, b, _ in lst
                         for i in range(A.dim(*a)) for k in range(B.dim(*b))]
    del F
    return Bicomplex(order, dims, build(A.del_, B.del_, (1, 0)), build(A.delbar, B.delbar, (0, 1)), labels)


def blowup_model(A: Bicomplex, Z: Bicomplex, codim: int) -> Bicomplex:
    """A (+) Z[1,1] (+) ... (+) Z[codim-1, codim-1]."""
    if codim < 2:
        raise ValueError(f"blow-up centre must have codimension >= 2, got {codim}")
    _check_orders(A, Z)
    return direct_sum(A, *(shift(Z, i, i) for i in range(1, codim)))


# ---------------------------------------------------------------- real structures


@dataclass(frozen=True)
class RealStructure:
    """Antilinear involution: sigma(v) = S[(p,q)] @ conj(v), mapping A^{p,q} to A^{q,p}."""

    maps: Mapping[Bidegree, SparseMatrix]

    def matrix(self, A: Bicomplex, p: int, q: int) -> SparseMatrix:
        M = self.maps.get((p, q))
        return M if M is not None else SparseMatrix.zero(A.dim(q, p), A.dim(p, q), A.field_order)

    def check(self, A: Bicomplex) -> ValidationReport:
        for (p, q) in A.support:
            if A.dim(p, q) != A.dim(q, p):
                return ValidationReport(False, "symmetry", (p, q), "dim A^{p,q} != dim A^{q,p}")
            S = self.matrix(A, p, q)
            back = self.matrix(A, q, p) @ S.conjugate()
            if back != SparseMatrix.identity(A.dim(p, q), A.field_order):
                return ValidationReport(False, "involution", (p, q), "sigma^2 != id")
            if A.max_degree is not None and p + q >= A.max_degree:
                continue
            lhs = self.matrix(A, q + 1, p) @ A.del_(q, p).conjugate() @ S.conjugate()
            if lhs != A.delbar(p, q):
                return ValidationReport(False, "intertwining", (p, q), "sigma del sigma != delbar")
        return ValidationReport(True, message="real structure")


# ---------------------------------------------------------------- components


def split_components(A: Bicomplex) -> list[tuple[Bicomplex, dict[Bidegree, list[int]]]]:
    """Split A into subcomplexes spanned by connected sets of basis vectors.

    Two basis vectors are linked when a differential matrix has a nonzero entry
    between them; each connected set spans a direct summand.  Isolated vectors
    (dots) are gathered into one summand with zero differentials.
    """
    if "components" in A._cache:
        return A._cache["components"]
    parent: dict = {}

    def find(x):
        root = x
        while parent.setdefault(root, root) != root:
            root = parent[root]
        while parent[x] != root:
            parent[x], x = root, parent[x]
        return root

    for (p, q), n in A.dims.items():
        for i in range(n):
            find((p, q, i))
    for maps, step in ((A.del_maps, (1, 0)), (A.delbar_maps, (0, 1))):
        for (p, q), M in maps.items():
            for i, r in enumerate(M.row_data):
                a = find((p + step[0], q + step[1], i))
                for c in r:
                    b = find((p, q, c))
                    if a != b:
                        parent[b] = a
    groups: dict = {}
    for (p, q), n in sorted(A.dims.items()):
        for i in range(n):
            groups.setdefault(find((p, q, i)), {}).setdefault((p, q), []).append(i)
    linked, isolated = [], {}
    for g in groups.values():
        if sum(len(v) for v in g.values()) == 1:
            (b, v), = g.items()
            isolated.setdefault(b, []).extend(v)
        else:
            linked.append(g)
    if isolated:
        linked.append({b: sorted(v) for b, v in isolated.items()})
    out = []
    for idx in sorted(linked, key=lambda g: min((b, v[0]) for b, v in g.items())):
        dims = {b: len(v) for b, v in idx.items()}
        dl, dbl = {}, {}
        for (p, q), cols in idx.items():
            if (p + 1, q) in idx and (p, q) in A.del_maps:
                dl[(p, q)] = A.del_maps[(p, q)].submatrix(idx[(p + 1, q)], cols)
            if (p, q + 1) in idx and (p, q) in A.delbar_maps:
                dbl[(p, q)] = A.delbar_maps[(p, q)].submatrix(idx[(p, q + 1)], cols)
        out.append((Bicomplex(A.field_order, dims, dl, dbl, max_degree=A.max_degree), idx))
    A._cache["components"] = out
    return out


# ---------------------------------------------------------------- total cohomology


@dataclass
class TotalCohomology:
    """Total cohomology with the filtrations induced by columns and rows.

    ``F[k][p]`` is F^p H^k and ``Fbar[k][q]`` is Fbar^q H^k, as subspaces of
    H^k written in the basis of cohomology classes ``representatives[k]``.
    """

    dims: dict[int, int]
    representatives: dict[int, list[dict]] = dc_field(default_factory=dict)
    F: dict[int, dict[int, Subspace]] = dc_field(default_factory=dict)
    Fbar: dict[int, dict[int, Subspace]] = dc_field(default_factory=dict)

    def filtration(self, k: int, p: int, bar: bool = False) -> Subspace:
        table = (self.Fbar if bar else self.F)[k]
        lo, hi = min(table), max(table)
        if p <= lo:
            return table[lo]
        if p > hi:
            return Subspace.zero(self.dims[k], table[lo].order)
        return table[p]


def _degree_cohomology(A: Bicomplex, k: int):
    order = A.field_order
    layout = A.degree_layout(k)
    n = A.degree_dim(k)
    d_out = A.total_differential(k)
    d_in = A.total_differential(k - 1)
    kernel = Subspace.span(kernel_vectors(d_out.row_data, n, order), n, order)
    image = Subspace.span(d_in.column_data(), n, order)
    reps, coords = kernel.quotient_coordinates(image)
    h = len(reps)

    def filtered(pred):
        cols = [off + i for (p, q), off, m in layout if pred(p, q) for i in range(m)]
        if not cols:
            return Subspace.zero(h, order)
        sub = d_out.submatrix(range(d_out.rows), cols)
        vecs = []
        for v in kernel_vectors(sub.row_data, len(cols), order):
            vecs.append(coords({cols[c]: x for c, x in v.items()}))
        return Subspace.span(vecs, h, order)

    ps = [p for (p, _), _, _ in layout]
    qs = [q for (_, q), _, _ in layout]
    F = {p: filtered(lambda a, b, p=p: a >= p) for p in range(min(ps), max(ps) + 2)} if layout else {}
    Fb = {q: filtered(lambda a, b, q=q: b >= q) for q in range(min(qs), max(qs) + 2)} if layout else {}
    return h, reps, F, Fb


def total_cohomology(A: Bicomplex) -> TotalCohomology:
    """dim H^k_d for every complete degree k, plus both induced filtrations."""
    result = TotalCohomology(dims={})
    comps = split_components(A)
    for k in A.complete_degrees():
        total, reps_all = 0, []
        parts = []
        for C, idx in comps:
            if C.degree_dim(k) == 0:
                continue
            h, reps, F, Fb = _degree_cohomology(C, k)
            if h == 0:
                continue
            # embed representatives back into A's degree-k coordinates
            offA = {b: off for b, off, _ in A.degree_layout(k)}
            offC = C.degree_layout(k)
            lift = {}
            for b, off, m in offC:
                for i in range(m):
                    lift[off + i] = offA[b] + idx[b][i]
            reps_all.extend({lift[c]: v for c, v in r.items()} for r in reps)
            parts.append((total, h, F, Fb))
            total += h
        result.dims[k] = total
        result.representatives[k] = reps_all
        layout = A.degree_layout(k)
        if not layout:
            continue
        ps = [p for (p, _), _, _ in layout]
        qs = [q for (_, q), _, _ in layout]

        def assemble(which, rng):
            out = {}
            for p in rng:
                vecs = []
                for start, h, F, Fb in parts:
                    tbl = F if which == 0 else Fb
                    lo, hi = min(tbl), max(tbl)
                    sub = tbl[lo] if p <= lo else (tbl[p] if p <= hi else None)
                    if sub is not None:
                        vecs.extend({start + c: v for c, v in vec.items()} for vec in sub.vectors)
                out[p] = Subspace.span(vecs, total, A.field_order)
            return out

        result.F[k] = assemble(0, range(min(ps), max(ps) + 2))
        result.Fbar[k] = assemble(1, range(min(qs), max(qs) + 2))
    return result
