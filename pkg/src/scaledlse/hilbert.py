"""Generalized Hilbert matrices and the continuous least-squares fit.

``H_n(a, b)[i, k] = integral_a^b x**(i+k) dx`` is the Gram matrix of the
monomials ``1, x, ..., x**(n-1)`` on ``(a, b)``.  Fitting a function with
the polynomial of degree ``n-1`` minimizing the L2 error leads to the system
``H c = moments`` with ``moments[k] = integral_a^b x**k f(x) dx``.
"""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .basis import BasisSpec, NormalSystem
from .errors import DomainError, HilbertOverflowError
from .linalg import EXTENDED, ConditionReport, cond2, solve_lu
from .scaling import apply_scaling, column_scales, scaled_solve


@dataclass(frozen=True)
class HilbertSpec:
    n: int
    a: float = 0.0
    b: float = 1.0

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 1:
            raise DomainError(f"size must be a positive integer, got {self.n!r}")
        if not (np.isfinite(self.a) and np.isfinite(self.b)) or not self.a < self.b:
            raise DomainError(f"need finite a < b, got ({self.a}, {self.b})")


def _power_integral(a: float, b: float, p: int) -> float:
    """``integral_a^b x**(p-1) dx = (b**p - a**p) / p``."""
    try:
        bp = float(b) ** p
        ap = float(a) ** p
    except OverflowError:
        raise HilbertOverflowError(p, max(abs(a), abs(b))) from None
    val = (bp - ap) / p
    if not np.isfinite(val):
        raise HilbertOverflowError(p, max(abs(a), abs(b)))
    return val


def hilbert_matrix(spec: HilbertSpec) -> np.ndarray:
    n = spec.n
    powers = [_power_integral(spec.a, spec.b, p) for p in range(1, 2 * n)]
    return np.array([[powers[i + k] for k in range(n)] for i in range(n)])


def continuous_moments(poly_coeffs, spec: HilbertSpec) -> np.ndarray:
    """``integral_a^b x**k f(x) dx`` for ``k < n`` and ``f = sum c_i x**i``."""
    c = np.asarray(poly_coeffs, dtype=float).reshape(-1)
    return np.array([
        sum(ci * _power_integral(spec.a, spec.b, i + k + 1) for i, ci in enumerate(c))
        for k in range(spec.n)
    ])


def continuous_lse_fit(poly_coeffs, n: int, spec: HilbertSpec, scaled: bool = False) -> np.ndarray:
    """Best L2 polynomial of degree ``n - 1`` to ``f`` on ``(spec.a, spec.b)``."""
    s = HilbertSpec(n, spec.a, spec.b)
    h = hilbert_matrix(s)
    rhs = continuous_moments(poly_coeffs, s)
    if not scaled:
        return solve_lu(h, rhs)
    ns = NormalSystem(h, rhs, BasisSpec.polynomial(n - 1))
    return scaled_solve(ns, with_cond=False).coeffs


def l2_error_squared(poly_coeffs, fit_coeffs, spec: HilbertSpec) -> float:
    """``integral_a^b (f - P)**2 dx`` in closed form for polynomial ``f`` and ``P``."""
    f = np.asarray(poly_coeffs, dtype=float)
    p = np.asarray(fit_coeffs, dtype=float)
    d = np.zeros(max(len(f), len(p)))
    d[: len(f)] += f
    d[: len(p)] -= p
    sq = np.polynomial.polynomial.polymul(d, d)
    return float(sum(ci * _power_integral(spec.a, spec.b, i + 1) for i, ci in enumerate(sq)))


@dataclass(frozen=True)
class SweepPoint:
    b: float
    raw: ConditionReport | None
    scaled: ConditionReport | None
    ratio: float
    error: str | None = None


def _sweep_one(n: int, b: float, precision: str) -> SweepPoint:
    try:
        h = hilbert_matrix(HilbertSpec(n, 0.0, b))
    except HilbertOverflowError as exc:
        return SweepPoint(b, None, None, float("nan"), str(exc))
    raw = cond2(h, precision)
    scaled = cond2(apply_scaling(h, column_scales(h)), precision)
    return SweepPoint(b, raw, scaled, raw.cond / scaled.cond)


def hilbert_cond_sweep(n: int, b_values, precision: str = EXTENDED, workers: int = 1) -> list[SweepPoint]:
    """Raw vs column-scaled conditioning of ``H_n(0, b)`` for each ``b``.

    Results keep the order of ``b_values`` whatever ``workers`` is.
    """
    bs = [float(b) for b in b_values]
    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            return list(pool.map(lambda b: _sweep_one(n, b, precision), bs))
    return [_sweep_one(n, b, precision) for b in bs]
