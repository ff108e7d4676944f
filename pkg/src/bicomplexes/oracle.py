"""Independent decomposition of small double complexes by explicit base changes.

The oracle never looks at spectral sequences.  It works in three stages.

1. While some del delbar is nonzero, pick x and a functional phi with
   phi(del delbar x) = 1.  The span of x, del x, delbar x, del delbar x is a
   square, and the kernel of the retraction built from phi is a complementary
   subcomplex.  Change bases, drop the square, and repeat.
2. Once del delbar = 0, every differential vanishes on images.  Splitting each
   space as (images) + (complement) turns every pair of adjacent antidiagonals
   into a representation of a zigzag quiver of type A.
3. Interval multiplicities of such a representation are recovered from the
   dimensions of Hom(I_J, V) over all intervals J by solving a linear system.

Pivot and functional choices are deterministic (lowest bidegree, then lowest
index).
"""
from __future__ import annotations

from fractions import Fraction

from .complex import Bicomplex, validate
from .linalg import Subspace, field, rank_of_vectors
from .zigzag import BookkeepingError, ZigzagMultiset, ZigzagShape

__all__ = ["OracleInconclusive", "brute_force_decompose", "DEFAULT_BUDGET"]

DEFAULT_BUDGET = 200_000


class OracleInconclusive(RuntimeError):
    """The step budget ran out before the decomposition finished."""


class _Budget:
    def __init__(self, limit: int) -> None:
        self.left = limit

    def spend(self, n: int = 1) -> None:
        self.left -= n
        if self.left < 0:
            raise OracleInconclusive("oracle step budget exhausted")


def _dense(M, F):
    rows = [[F.zero] * M.cols for _ in range(M.rows)]
    for i, r in enumerate(M.row_data):
        for c, v in r.items():
            rows[i][c] = v
    return rows


def _matmul(X, Y, F, inner):
    out = []
    for row in X:
        acc = [F.zero] * (len(Y[0]) if Y else 0)
        for t in range(inner):
            a = row[t]
            if a:
                yr = Y[t]
                for j, b in enumerate(yr):
                    if b:
                        acc[j] = acc[j] + a * b
        out.append(acc)
    return out


class _State:
    def __init__(self, A: Bicomplex) -> None:
        self.F = field(A.field_order)
        self.dims = dict(A.dims)
        self.maps: dict = {}  # (kind, source) -> dense rows; kind 0 = del, 1 = delbar
        for (p, q) in A.support:
            for kind, M in ((0, A.del_(p, q)), (1, A.delbar(p, q))):
                if not M.is_zero():
                    self.maps[(kind, (p, q))] = _dense(M, self.F)

    def dim(self, b):
        return self.dims.get(b, 0)

    def get(self, kind, b):
        tgt = (b[0] + 1, b[1]) if kind == 0 else (b[0], b[1] + 1)
        M = self.maps.get((kind, b))
        if M is None:
            return [[self.F.zero] * self.dim(b) for _ in range(self.dim(tgt))]
        return M

    def ddbar(self, b):
        """del o delbar : A^b -> A^{b+(1,1)}."""
        up = (b[0], b[1] + 1)
        return _matmul(self.get(0, up), self.get(1, b), self.F, self.dim(up))

    def split_square(self, b) -> bool:
        F = self.F
        p, q = b
        cells = [b, (p + 1, q), (p, q + 1), (p + 1, q + 1)]
        if any(self.dim(c) == 0 for c in cells):
            return False
        M = self.ddbar(b)
        hit = next(((i, j) for i, row in enumerate(M) for j, v in enumerate(row) if v), None)
        if hit is None:
            return False
        i, j = hit
        inv = F.one / M[i][j]
        psi = {
            b: [v * inv for v in M[i]],
            (p + 1, q): [-v * inv for v in self.get(1, (p + 1, q))[i]],
            (p, q + 1): [v * inv for v in self.get(0, (p, q + 1))[i]],
            (p + 1, q + 1): [F.one * inv if t == i else F.zero for t in range(self.dim((p + 1, q + 1)))],
        }
        # basis of ker psi: e_t - (psi_t / psi_piv) e_piv for t != piv
        embed, keep = {}, {}
        for c, f in psi.items():
            piv = next(t for t, v in enumerate(f) if v)
            n = len(f)
            cols = []
            for t in range(n):
                if t == piv:
                    continue
                col = [F.zero] * n
                col[t] = F.one
                col[piv] = -f[t] / f[piv]
                cols.append(col)
            embed[c] = cols
            keep[c] = [t for t in range(n) if t != piv]
        new_maps = {}
        for (kind, src), rows in self.maps.items():
            tgt = (src[0] + 1, src[1]) if kind == 0 else (src[0], src[1] + 1)
            if src in embed:
                cols = embed[src]
                rows = [[sum((r[t] * col[t] for t in range(len(r)) if r[t] and col[t]), F.zero) for col in cols]
                        for r in rows]
            if tgt in keep:
                rows = [rows[t] for t in keep[tgt]]
            if rows and rows[0] and any(v for r in rows for v in r):
                new_maps[(kind, src)] = rows
        self.maps = new_maps
        for c in cells:
            self.dims[c] -= 1
            if not self.dims[c]:
                del self.dims[c]
        return True


def _hom_dim(J, dims, maps, F, budget) -> int:
    """dim Hom(I_J, V) for a zigzag-quiver representation V."""
    s0, e0 = J
    offs, n = {}, 0
    for t in range(s0, e0 + 1):
        offs[t] = n
        n += dims.get(t, 0)
    if n == 0:
        return 0
    rows = []
    arrows = [(s, t) for s in range(s0 + (s0 % 2), e0 + 1, 2) for t in (s - 1, s + 1)]
    for s, t in arrows:
        M = maps.get((s, t))
        inside = s0 <= t <= e0
        for i in range(dims.get(t, 0)):
            row = {}
            if M is not None:
                for c in range(dims.get(s, 0)):
                    v = M[i][c]
                    if v:
                        row[offs[s] + c] = v
            if inside:
                row[offs[t] + i] = row.get(offs[t] + i, F.zero) - F.one
                if not row[offs[t] + i]:
                    del row[offs[t] + i]
            if row:
                rows.append(row)
    budget.spend(1 + len(rows))
    return n - rank_of_vectors(rows, F.order)


def _interval_rep(J, F):
    s, e = J
    dims = {t: 1 for t in range(s, e + 1)}
    maps = {}
    for t in range(s, e + 1):
        if t % 2 == 0:
            for u in (t - 1, t + 1):
                if s <= u <= e:
                    maps[(t, u)] = [[F.one]]
    return dims, maps


def _solve(H, h):
    n = len(h)
    aug = [[Fraction(x) for x in row] + [Fraction(y)] for row, y in zip(H, h)]
    for c in range(n):
        piv = next((r for r in range(c, n) if aug[r][c]), None)
        if piv is None:
            raise ArithmeticError("singular Hom matrix")
        aug[c], aug[piv] = aug[piv], aug[c]
        inv = 1 / aug[c][c]
        aug[c] = [v * inv for v in aug[c]]
        for r in range(n):
            if r != c and aug[r][c]:
                f = aug[r][c]
                aug[r] = [a - f * b for a, b in zip(aug[r], aug[c])]
    return [aug[i][n] for i in range(n)]


def _quiver_decompose(k, dims, maps, F, budget):
    pos = sorted(t for t, n in dims.items() if n)
    if not pos:
        return {}
    lo, hi = pos[0], pos[-1]
    intervals = [(s, e) for s in range(lo, hi + 1) for e in range(s, hi + 1)]
    h = [_hom_dim(J, dims, maps, F, budget) for J in intervals]
    reps = [_interval_rep(J, F) for J in intervals]
    H = [[_hom_dim(J, rd, rm, F, budget) for rd, rm in reps] for J in intervals]
    mult = _solve(H, h)
    out = {}
    for J, m in zip(intervals, mult):
        if m.denominator != 1 or m < 0:
            raise BookkeepingError(f"non-integral interval multiplicity {m} for {J}")
        if m:
            out[ZigzagShape(k, *J)] = int(m)
    return out


def brute_force_decompose(A: Bicomplex, budget: int = DEFAULT_BUDGET) -> ZigzagMultiset:
    """Decompose A into squares and zigzags without using spectral data."""
    if A.is_truncated():
        raise ValueError("the oracle needs the whole complex; this one is window-compiled")
    report = validate(A)
    if not report:
        raise ValueError(f"not a double complex: {report.message}")
    steps = _Budget(budget)
    st = _State(A)
    F = st.F
    result = ZigzagMultiset()

    # stage 1: split off squares
    progress = True
    while progress:
        progress = False
        for b in sorted(st.dims):
            steps.spend()
            if st.split_square(b):
                result.add_square(b)
                progress = True
                break

    # stage 2: images and complements
    image: dict = {}
    for c in sorted(st.dims):
        vecs = []
        for kind, src in ((0, (c[0] - 1, c[1])), (1, (c[0], c[1] - 1))):
            if (kind, src) in st.maps:
                M = st.maps[(kind, src)]
                for j in range(len(M[0])):
                    vecs.append({i: M[i][j] for i in range(len(M)) if M[i][j]})
        image[c] = Subspace.span(vecs, st.dim(c), A.field_order)

    def coords_in_image(c, col):
        # reduced echelon basis: the coordinate on the basis vector with pivot t is col[t]
        return [col.get(t, F.zero) for t in image[c].pivots]

    ks = sorted({p + q for p, q in st.dims})
    for k in ks:
        dims, maps = {}, {}
        for (p, q), n in st.dims.items():
            if p + q == k:
                free = [t for t in range(n) if t not in set(image[(p, q)].pivots)]
                dims[2 * p] = len(free)
                for kind, tgt, tpos in ((1, (p, q + 1), 2 * p - 1), (0, (p + 1, q), 2 * p + 1)):
                    if (kind, (p, q)) in st.maps and free:
                        M = st.maps[(kind, (p, q))]
                        cols = [coords_in_image(tgt, {i: M[i][j] for i in range(len(M)) if M[i][j]}) for j in free]
                        maps[(2 * p, tpos)] = [[cols[j][i] for j in range(len(free))] for i in range(image[tgt].dim)]
            elif p + q == k + 1:
                dims[2 * p - 1] = image[(p, q)].dim
        maps = {key: M for key, M in maps.items() if dims.get(key[1], 0) and dims.get(key[0], 0)}
        for shape, m in _quiver_decompose(k, dims, maps, F, steps).items():
            result.add_zigzag(shape, m)

    if not result.bookkeeping_ok(A):
        raise BookkeepingError("oracle decomposition does not reproduce the dimensions")
    return result
