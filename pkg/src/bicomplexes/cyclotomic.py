"""Exact arithmetic in cyclotomic fields Q(z), z a primitive n-th root of unity.

Elements are stored as coefficient tuples of length phi(n) in the power basis
1, z, ..., z^(phi(n)-1), reduced modulo the n-th cyclotomic polynomial.
Coefficients are ``gmpy2.mpq`` rationals, always in lowest terms.
"""
from __future__ import annotations

import re
from fractions import Fraction
from functools import lru_cache
from numbers import Rational

from gmpy2 import mpq

__all__ = [
    "CyclotomicScalar",
    "OrderMismatchError",
    "cyclotomic_polynomial",
    "euler_phi",
    "parse_scalar",
    "to_rational",
]


class OrderMismatchError(ValueError):
    """Raised when scalars from different cyclotomic fields are combined."""


@lru_cache(maxsize=None)
def euler_phi(n: int) -> int:
    if n < 1:
        raise ValueError(f"cyclotomic order must be positive, got {n}")
    result, m, p = n, n, 2
    while p * p <= m:
        if m % p == 0:
            while m % p == 0:
                m //= p
            result -= result // p
        p += 1
    if m > 1:
        result -= result // m
    return result


def _poly_divexact(num: list[int], den: list[int]) -> list[int]:
    # coefficient lists, lowest degree first; den is monic
    num = list(num)
    out = [0] * (len(num) - len(den) + 1)
    for i in range(len(out) - 1, -1, -1):
        c = num[i + len(den) - 1]
        out[i] = c
        if c:
            for j, d in enumerate(den):
                num[i + j] -= c * d
    if any(num[: len(den) - 1]):
        raise ArithmeticError("inexact polynomial division")
    return out


@lru_cache(maxsize=None)
def cyclotomic_polynomial(n: int) -> tuple[int, ...]:
    """Integer coefficients of the n-th cyclotomic polynomial, lowest degree first."""
    poly = [-1] + [0] * (n - 1) + [1]
    for d in range(1, n):
        if n % d == 0:
            poly = _poly_divexact(poly, list(cyclotomic_polynomial(d)))
    return tuple(poly)


@lru_cache(maxsize=None)
def _power_table(n: int) -> tuple[tuple[int, ...], ...]:
    """Reduced coefficient vectors of z^k for 0 <= k < n."""
    phi = euler_phi(n)
    cyc = cyclotomic_polynomial(n)
    table = []
    vec = [0] * phi
    vec[0] = 1
    for _ in range(n):
        table.append(tuple(vec))
        # multiply by z: shift, then reduce z^phi = -sum(cyc[i] z^i)
        top = vec[-1]
        vec = [0] + vec[:-1]
        if top:
            for i in range(phi):
                vec[i] -= top * cyc[i]
    return tuple(table)


def to_rational(x) -> mpq:
    if isinstance(x, int):
        return mpq(x)
    if type(x) is type(mpq(0)):
        return x
    if isinstance(x, (Fraction, Rational)):
        return mpq(x.numerator, x.denominator)
    if isinstance(x, str):
        return mpq(Fraction(x))
    raise TypeError(f"cannot interpret {x!r} as an exact rational")


_ZERO = mpq(0)
_ONE = mpq(1)


class CyclotomicScalar:
    """An element of Q(z_n), immutable and hashable."""

    __slots__ = ("order", "coeffs", "_hash")

    def __init__(self, order: int, coeffs) -> None:
        phi = euler_phi(order)
        coeffs = tuple(to_rational(c) for c in coeffs)
        if len(coeffs) != phi:
            raise ValueError(f"expected {phi} coefficients for order {order}, got {len(coeffs)}")
        object.__setattr__(self, "order", order)
        object.__setattr__(self, "coeffs", coeffs)
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, name, value):
        raise AttributeError("CyclotomicScalar is immutable")

    @classmethod
    def _raw(cls, order: int, coeffs: tuple) -> "CyclotomicScalar":
        obj = object.__new__(cls)
        object.__setattr__(obj, "order", order)
        object.__setattr__(obj, "coeffs", coeffs)
        object.__setattr__(obj, "_hash", None)
        return obj

    # constructors

    @classmethod
    def rational(cls, order: int, value) -> "CyclotomicScalar":
        phi = euler_phi(order)
        return cls._raw(order, (to_rational(value),) + (_ZERO,) * (phi - 1))

    @classmethod
    def zero(cls, order: int) -> "CyclotomicScalar":
        return cls.rational(order, 0)

    @classmethod
    def one(cls, order: int) -> "CyclotomicScalar":
        return cls.rational(order, 1)

    @classmethod
    def root_of_unity(cls, order: int, power: int = 1) -> "CyclotomicScalar":
        """z_n ** power."""
        return cls._raw(order, tuple(mpq(c) for c in _power_table(order)[power % order]))

    @classmethod
    def from_powers(cls, order: int, terms: dict[int, object]) -> "CyclotomicScalar":
        """Sum of c_k * z^k for an arbitrary (unreduced) exponent map."""
        phi = euler_phi(order)
        table = _power_table(order)
        acc = [_ZERO] * phi
        for k, c in terms.items():
            c = to_rational(c)
            if not c:
                continue
            for i, t in enumerate(table[k % order]):
                if t:
                    acc[i] += c * t
        return cls._raw(order, tuple(acc))

    # predicates

    def __bool__(self) -> bool:
        return any(self.coeffs)

    def is_rational(self) -> bool:
        return not any(self.coeffs[1:])

    def __eq__(self, other) -> bool:
        if isinstance(other, CyclotomicScalar):
            return self.order == other.order and self.coeffs == other.coeffs
        try:
            q = to_rational(other)
        except TypeError:
            return NotImplemented
        return self.is_rational() and self.coeffs[0] == q

    def __hash__(self) -> int:
        h = self._hash
        if h is None:
            h = hash(self.coeffs[0]) if self.is_rational() else hash((self.order, self.coeffs))
            object.__setattr__(self, "_hash", h)
        return h

    # arithmetic

    def _coerce(self, other) -> "CyclotomicScalar":
        if isinstance(other, CyclotomicScalar):
            if other.order != self.order:
                raise OrderMismatchError(f"cannot combine Q(z_{self.order}) and Q(z_{other.order})")
            return other
        return CyclotomicScalar.rational(self.order, other)

    def __add__(self, other):
        try:
            o = self._coerce(other)
        except TypeError:
            return NotImplemented
        return CyclotomicScalar._raw(self.order, tuple(a + b for a, b in zip(self.coeffs, o.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        return CyclotomicScalar._raw(self.order, tuple(-a for a in self.coeffs))

    def __sub__(self, other):
        try:
            o = self._coerce(other)
        except TypeError:
            return NotImplemented
        return CyclotomicScalar._raw(self.order, tuple(a - b for a, b in zip(self.coeffs, o.coeffs)))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, CyclotomicScalar):
            try:
                q = to_rational(other)
            except TypeError:
                return NotImplemented
            return CyclotomicScalar._raw(self.order, tuple(a * q for a in self.coeffs))
        o = self._coerce(other)
        phi = len(self.coeffs)
        if phi == 1:
            return CyclotomicScalar._raw(self.order, (self.coeffs[0] * o.coeffs[0],))
        prod = [_ZERO] * (2 * phi - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(o.coeffs):
                    if b:
                        prod[i + j] += a * b
        table = _power_table(self.order)
        out = prod[:phi]
        for k in range(phi, 2 * phi - 1):
            c = prod[k]
            if c:
                for i, t in enumerate(table[k % self.order]):
                    if t:
                        out[i] += c * t
        return CyclotomicScalar._raw(self.order, tuple(out))

    __rmul__ = __mul__

    def inverse(self) -> "CyclotomicScalar":
        if not self:
            raise ZeroDivisionError("inverse of zero in a cyclotomic field")
        phi = len(self.coeffs)
        if phi == 1:
            return CyclotomicScalar._raw(self.order, (_ONE / self.coeffs[0],))
        # solve (multiplication-by-self matrix) * x = e_0
        cols = []
        basis = [CyclotomicScalar._raw(self.order, tuple(_ONE if i == j else _ZERO for i in range(phi)))
                 for j in range(phi)]
        for b in basis:
            cols.append((self * b).coeffs)
        aug = [[cols[j][i] for j in range(phi)] + [_ONE if i == 0 else _ZERO] for i in range(phi)]
        for c in range(phi):
            piv = next(r for r in range(c, phi) if aug[r][c])
            aug[c], aug[piv] = aug[piv], aug[c]
            inv = _ONE / aug[c][c]
            aug[c] = [v * inv for v in aug[c]]
            for r in range(phi):
                if r != c and aug[r][c]:
                    f = aug[r][c]
                    aug[r] = [v - f * w for v, w in zip(aug[r], aug[c])]
        return CyclotomicScalar._raw(self.order, tuple(aug[i][phi] for i in range(phi)))

    def __truediv__(self, other):
        if not isinstance(other, CyclotomicScalar):
            try:
                q = to_rational(other)
            except TypeError:
                return NotImplemented
            if not q:
                raise ZeroDivisionError("division by zero")
            return CyclotomicScalar._raw(self.order, tuple(a / q for a in self.coeffs))
        return self * self._coerce(other).inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        result = CyclotomicScalar.one(self.order)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def conjugate(self) -> "CyclotomicScalar":
        """Image under z -> z^-1 (complex conjugation)."""
        n = self.order
        return CyclotomicScalar.from_powers(n, {(-k) % n: c for k, c in enumerate(self.coeffs) if c})

    # formatting

    def __str__(self) -> str:
        return format_scalar(self)

    def __repr__(self) -> str:
        return f"CyclotomicScalar({self.order}, {format_scalar(self)!r})"


def format_scalar(x: CyclotomicScalar) -> str:
    """Exact string form, e.g. ``"1/2"``, ``"-3*z^1"``, ``"1+2/3*z^1"``."""
    parts = []
    for k, c in enumerate(x.coeffs):
        if not c:
            continue
        cs = str(c)
        if k == 0:
            parts.append(cs)
        else:
            parts.append(f"{cs}*z^{k}")
    if not parts:
        return "0"
    out = parts[0]
    for p in parts[1:]:
        out += p if p.startswith("-") else "+" + p
    return out


_TERM = re.compile(r"([+-]?)\s*(\d+(?:/\d+)?)?\s*(?:\*?\s*(z)(?:\^(\d+))?)?")


def parse_scalar(text: str, order: int) -> CyclotomicScalar:
    """Inverse of :func:`format_scalar`; also accepts ``i`` for z when order is 4."""
    s = text.replace(" ", "")
    if order == 4:
        s = re.sub(r"(?<![a-z])i(?![a-z])", "z", s)
    if not s:
        raise ValueError("empty scalar")
    terms: dict[int, object] = {}
    pos = 0
    while pos < len(s):
        m = _TERM.match(s, pos)
        if not m or m.end() == pos or (m.group(2) is None and m.group(3) is None):
            raise ValueError(f"cannot parse scalar {text!r} at offset {pos}")
        sign, coef, zed, power = m.groups()
        c = Fraction(coef) if coef is not None else Fraction(1)
        if sign == "-":
            c = -c
        k = 0 if zed is None else int(power or 1)
        terms[k] = terms.get(k, 0) + c
        pos = m.end()
    return CyclotomicScalar.from_powers(order, terms)
