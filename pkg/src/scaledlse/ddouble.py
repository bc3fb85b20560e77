"""Double-double arithmetic on numpy arrays.

A :class:`DD` value is the unevaluated sum ``hi + lo`` of two float64 arrays
with ``|lo| <= ulp(hi)/2``, giving roughly 106 significand bits.  All
operations are elementwise and broadcast like numpy.

The error-free transformations follow Dekker and Knuth.  Splitting multiplies
by ``2**27 + 1``, so inputs must stay below about ``1e300`` in magnitude;
near the subnormal range the low word loses bits and precision drops.
"""
from __future__ import annotations

import numpy as np

UNIT_ROUNDOFF = 2.0 ** -106

_SPLITTER = 134217729.0  # 2**27 + 1


def two_sum(a, b):
    s = a + b
    bb = s - a
    err = (a - (s - bb)) + (b - bb)
    return s, err


def quick_two_sum(a, b):
    """Like :func:`two_sum` but requires ``|a| >= |b|``."""
    s = a + b
    return s, b - (s - a)


def split(a):
    c = _SPLITTER * a
    hi = c - (c - a)
    return hi, a - hi


def two_prod(a, b):
    p = a * b
    ahi, alo = split(a)
    bhi, blo = split(b)
    err = ((ahi * bhi - p) + ahi * blo + alo * bhi) + alo * blo
    return p, err


def _promote(x) -> "DD":
    if isinstance(x, DD):
        return x
    hi = np.asarray(x, dtype=float)
    return DD(hi, np.zeros_like(hi))


class DD:
    """Array of double-double numbers."""

    __slots__ = ("hi", "lo")
    __array_ufunc__ = None  # make ndarray <op> DD dispatch to DD

    def __init__(self, hi, lo=None):
        self.hi = np.asarray(hi, dtype=float)
        self.lo = np.zeros_like(self.hi) if lo is None else np.asarray(lo, dtype=float)

    @classmethod
    def zeros(cls, shape) -> "DD":
        return cls(np.zeros(shape), np.zeros(shape))

    @property
    def shape(self):
        return self.hi.shape

    @property
    def T(self) -> "DD":
        return DD(self.hi.T, self.lo.T)

    def copy(self) -> "DD":
        return DD(self.hi.copy(), self.lo.copy())

    def to_float(self) -> np.ndarray:
        return self.hi + self.lo

    def __repr__(self):
        return f"DD(hi={self.hi!r}, lo={self.lo!r})"

    def __getitem__(self, idx) -> "DD":
        return DD(self.hi[idx], self.lo[idx])

    def __setitem__(self, idx, value):
        value = _promote(value)
        self.hi[idx] = value.hi
        self.lo[idx] = value.lo

    def __neg__(self) -> "DD":
        return DD(-self.hi, -self.lo)

    def __abs__(self) -> "DD":
        neg = self.hi < 0
        return DD(np.where(neg, -self.hi, self.hi), np.where(neg, -self.lo, self.lo))

    def __add__(self, other) -> "DD":
        other = _promote(other)
        s, e = two_sum(self.hi, other.hi)
        t, f = two_sum(self.lo, other.lo)
        e = e + t
        s, e = quick_two_sum(s, e)
        e = e + f
        s, e = quick_two_sum(s, e)
        return DD(s, e)

    __radd__ = __add__

    def __sub__(self, other) -> "DD":
        return self + (-_promote(other))

    def __rsub__(self, other) -> "DD":
        return _promote(other) + (-self)

    def __mul__(self, other) -> "DD":
        other = _promote(other)
        p, e = two_prod(self.hi, other.hi)
        e = e + (self.hi * other.lo + self.lo * other.hi)
        p, e = quick_two_sum(p, e)
        return DD(p, e)

    __rmul__ = __mul__

    def __truediv__(self, other) -> "DD":
        other = _promote(other)
        q1 = self.hi / other.hi
        r = self - other * q1
        q2 = r.hi / other.hi
        r = r - other * q2
        q3 = r.hi / other.hi
        q1, q2 = quick_two_sum(q1, q2)
        return DD(q1, q2) + q3

    def __rtruediv__(self, other) -> "DD":
        return _promote(other) / self

    def sqrt(self) -> "DD":
        x = np.sqrt(self.hi)
        safe = np.where(x > 0, x, 1.0)
        y = DD(x)
        r = self - y * y
        corr = np.where(x > 0, r.hi / (2.0 * safe), 0.0)
        return y + corr


def where(mask, a, b):
    """Elementwise select that accepts ndarray or :class:`DD` operands."""
    if isinstance(a, DD) or isinstance(b, DD):
        a, b = _promote(a), _promote(b)
        return DD(np.where(mask, a.hi, b.hi), np.where(mask, a.lo, b.lo))
    return np.where(mask, a, b)


def sqrt(x):
    if isinstance(x, DD):
        return x.sqrt()
    return np.sqrt(x)


def leading(x) -> np.ndarray:
    """Native-precision view of ``x`` (the high word for DD)."""
    return x.hi if isinstance(x, DD) else np.asarray(x)


def gram(m: np.ndarray) -> DD:
    """Return ``m.T @ m`` accumulated in double-double.

    Each product is formed exactly with :func:`two_prod` before summation.
    """
    m = np.asarray(m, dtype=float)
    cols = m.shape[1]
    acc = DD.zeros((cols, cols))
    for row in m:
        p = np.outer(row, row)
        rhi, rlo = split(row)
        err = ((np.outer(rhi, rhi) - p) + np.outer(rhi, rlo) + np.outer(rlo, rhi)) + np.outer(rlo, rlo)
        acc = acc + DD(*quick_two_sum(p, err))
    return acc
