"""Seeded random double complexes for self-tests and oracle comparisons."""
from __future__ import annotations

import random

from .complex import Bicomplex, direct_sum
from .cyclotomic import CyclotomicScalar
from .linalg import SparseMatrix, field
from .zigzag import ZigzagMultiset, ZigzagShape, square_model, zigzag_model

__all__ = [
    "random_shapes",
    "random_complex",
    "random_complex_with_decomposition",
    "change_basis",
    "random_basis_change",
]


def random_shapes(rng: random.Random, size: int = 4, max_pieces: int = 8):
    """Random list of indecomposable summand descriptions inside [0,size)^2."""
    pieces = []
    for _ in range(rng.randint(1, max_pieces)):
        if rng.random() < 0.2:
            pieces.append(("square", (rng.randrange(size - 1), rng.randrange(size - 1))))
            continue
        for _ in range(20):
            k = rng.randrange(0, 2 * size - 2)
            start = rng.randrange(-1, 2 * size)
            s = ZigzagShape(k, start, start + rng.randint(0, 4))
            if all(0 <= p < size and 0 <= q < size for p, q in s.cells):
                pieces.append(("zigzag", s))
                break
    return pieces


def _random_scalar(rng: random.Random, order: int):
    F = field(order)
    if order == 1:
        return F.lower(rng.choice([1, -1, 2, -2, 3]))
    return F.lower(CyclotomicScalar.from_powers(order, {rng.randrange(order): rng.choice([1, -1, 2])}))


def random_basis_change(rng: random.Random, n: int, order: int, ops: int = 6):
    """A random invertible n x n matrix together with its inverse."""
    F = field(order)
    P = [[F.one if i == j else F.zero for j in range(n)] for i in range(n)]
    Pinv = [row[:] for row in P]
    if n < 2:
        if n == 1:
            c = _random_scalar(rng, order)
            P[0][0], Pinv[0][0] = c, F.one / c
        return P, Pinv
    for _ in range(ops):
        i, j = rng.sample(range(n), 2)
        c = _random_scalar(rng, order)
        # P <- E P with E = I + c e_i e_j^T ; Pinv <- Pinv E^{-1}
        P[i] = [a + c * b for a, b in zip(P[i], P[j])]
        for row in Pinv:
            row[j] = row[j] - c * row[i]
    return P, Pinv


def _to_sparse(rows, order):
    return SparseMatrix(len(rows), len(rows[0]) if rows else 0, order,
                        [{c: v for c, v in enumerate(r) if v} for r in rows])


def change_basis(A: Bicomplex, P: dict, Pinv: dict) -> Bicomplex:
    """Conjugate every differential: d'_b = P_target d_b P_b^{-1}."""
    order = A.field_order
    S = {b: _to_sparse(P[b], order) for b in P}
    Si = {b: _to_sparse(Pinv[b], order) for b in Pinv}
    dl = {b: S[(b[0] + 1, b[1])] @ M @ Si[b] for b, M in A.del_maps.items()}
    dbl = {b: S[(b[0], b[1] + 1)] @ M @ Si[b] for b, M in A.delbar_maps.items()}
    return Bicomplex(order, A.dims, dl, dbl)


def random_complex_with_decomposition(seed: int, size: int = 4, max_dim: int = 4, order: int = 1):
    """Random valid complex together with the multiset it was assembled from.

    The complex is a random sum of squares and zigzags inside [0,size)^2 with
    every dim A^{p,q} <= max_dim, hidden by random invertible base changes at
    every bidegree.
    """
    rng = random.Random(seed)
    parts, dims = [], {}
    truth = ZigzagMultiset()
    for kind, data in random_shapes(rng, size):
        C = square_model(*data, order=order) if kind == "square" else zigzag_model(data, order)
        if any(dims.get(b, 0) + n > max_dim for b, n in C.dims.items()):
            continue
        for b, n in C.dims.items():
            dims[b] = dims.get(b, 0) + n
        parts.append(C)
        if kind == "square":
            truth.add_square(data)
        else:
            truth.add_zigzag(data)
    A = direct_sum(*parts) if parts else Bicomplex(order, {})
    P, Pinv = {}, {}
    for b, n in A.dims.items():
        P[b], Pinv[b] = random_basis_change(rng, n, order)
    return change_basis(A, P, Pinv), truth


def random_complex(seed: int, size: int = 4, max_dim: int = 4, order: int = 1) -> Bicomplex:
    """Random valid complex on [0,size)^2 with every dim A^{p,q} <= max_dim."""
    return random_complex_with_decomposition(seed, size, max_dim, order)[0]
