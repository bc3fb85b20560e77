"""Dense small-matrix linear algebra.

Matrices are plain 2-D float64 numpy arrays.  Condition numbers come from a
cyclic Jacobi eigenvalue iteration which can run either in native float64 or
in double-double (``precision="extended"``) for matrices whose conditioning
is beyond what float64 can resolve.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import ddouble
from .ddouble import DD
from .errors import DimensionError, DomainError, SingularMatrixError

NATIVE = "native"
EXTENDED = "extended"

UNIT_ROUNDOFF = {NATIVE: 2.0 ** -53, EXTENDED: ddouble.UNIT_ROUNDOFF}
JACOBI_TOL = {NATIVE: 1e-14, EXTENDED: 1e-30}
MAX_SWEEPS = 100
SYMMETRY_TOL = 1e-12


def normalize_precision(precision: str) -> str:
    p = precision.lower()
    if p in ("native", "double", "float64"):
        return NATIVE
    if p in ("extended", "dd", "double-double"):
        return EXTENDED
    raise DomainError(f"unknown precision {precision!r}")


@dataclass(frozen=True)
class ConditionReport:
    """2-norm condition number with the precision it was computed at.

    When ``saturated`` is set the smallest singular value fell below the
    resolvable floor of the precision used, so ``cond`` is only a lower bound.
    """

    cond: float
    precision_used: str
    saturated: bool


def as_matrix(m, *, square: bool = False) -> np.ndarray:
    a = np.array(m, dtype=float)
    if a.ndim != 2 or a.shape[0] < 1 or a.shape[1] < 1:
        raise DimensionError(f"expected a non-empty 2-D matrix, got shape {a.shape}")
    if square and a.shape[0] != a.shape[1]:
        raise DimensionError(f"expected a square matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise DomainError("matrix has non-finite entries")
    return a


def _lu_inplace(a: np.ndarray):
    """Partial-pivoting LU of ``a`` in place.

    Returns ``(perm, parity, zero_col)`` where ``zero_col`` is the first
    column without a nonzero pivot, or ``None``.
    """
    n = a.shape[0]
    perm = np.arange(n)
    parity = 1
    for k in range(n):
        p = k + int(np.argmax(np.abs(a[k:, k])))
        if a[p, k] == 0.0:
            return perm, parity, k
        if p != k:
            a[[k, p]] = a[[p, k]]
            perm[[k, p]] = perm[[p, k]]
            parity = -parity
        a[k + 1:, k] /= a[k, k]
        a[k + 1:, k + 1:] -= np.outer(a[k + 1:, k], a[k, k + 1:])
    return perm, parity, None


def determinant_parts(m) -> tuple[float, int]:
    """Return ``(mantissa, exponent)`` with ``det(m) == mantissa * 2**exponent``.

    The mantissa is 0 or has magnitude in [0.5, 1), so huge or tiny
    determinants of large minors neither overflow nor underflow.
    """
    a = as_matrix(m, square=True)
    _, parity, zero_col = _lu_inplace(a)
    if zero_col is not None:
        return 0.0, 0
    mant, expo = float(parity), 0
    for pivot in np.diag(a):
        f, e = math.frexp(pivot)
        mant, e2 = math.frexp(mant * f)
        expo += e + e2
    return mant, expo


def determinant(m) -> float:
    """Determinant via LU with partial pivoting.

    The sign is exact; relative accuracy degrades with conditioning.
    """
    mant, expo = determinant_parts(m)
    try:
        return math.ldexp(mant, expo)
    except OverflowError:
        return math.copysign(math.inf, mant)


def solve_lu(m, rhs) -> np.ndarray:
    a = as_matrix(m, square=True)
    b = np.array(rhs, dtype=float)
    if b.shape != (a.shape[0],):
        raise DimensionError(f"rhs has shape {b.shape}, expected ({a.shape[0]},)")
    perm, _, zero_col = _lu_inplace(a)
    if zero_col is not None:
        raise SingularMatrixError(f"zero pivot in column {zero_col}")
    n = a.shape[0]
    y = b[perm]
    for i in range(1, n):
        y[i] -= a[i, :i] @ y[:i]
    x = y
    for i in range(n - 1, -1, -1):
        x[i] = (x[i] - a[i, i + 1:] @ x[i + 1:]) / a[i, i]
    return x


def is_symmetric(a: np.ndarray, tol: float = SYMMETRY_TOL) -> bool:
    scale = np.max(np.abs(a))
    return bool(np.max(np.abs(a - a.T)) <= tol * scale)


def _round_robin(n: int):
    """Disjoint pair sets covering every (p, q), p < q, once per sweep."""
    players = list(range(n)) + ([-1] if n % 2 else [])
    k = len(players)
    rounds = []
    for _ in range(k - 1):
        pairs = [(players[i], players[k - 1 - i]) for i in range(k // 2)]
        pairs = [(min(p, q), max(p, q)) for p, q in pairs if p >= 0 and q >= 0]
        rounds.append((np.array([p for p, _ in pairs]), np.array([q for _, q in pairs])))
        players = [players[0], players[-1]] + players[1:-1]
    return rounds


def _rotate(a, P, Q):
    """Apply one round of disjoint Jacobi rotations annihilating a[P, Q]."""
    app, aqq, apq = a[P, P], a[Q, Q], a[P, Q]
    active = ddouble.leading(apq) != 0.0
    if not active.any():
        return
    diff = aqq - app
    # |theta| > 1e100: t = 1/(2 theta) = apq/diff without forming theta
    big = np.abs(ddouble.leading(apq)) * 1e100 < np.abs(ddouble.leading(diff))
    theta = diff / (ddouble.where(active & ~big, apq, 1.0) * 2.0)
    sign = np.where(ddouble.leading(theta) >= 0, 1.0, -1.0)
    t = sign / (abs(theta) + ddouble.sqrt(theta * theta + 1.0))
    t = ddouble.where(big, apq / ddouble.where(big, diff, 1.0), t)
    t = ddouble.where(active, t, 0.0)
    c = 1.0 / ddouble.sqrt(t * t + 1.0)
    s = t * c
    new_pp = app - t * apq
    new_qq = aqq + t * apq

    cp, cq = a[:, P], a[:, Q]
    a[:, P] = cp * c - cq * s
    a[:, Q] = cp * s + cq * c
    c2, s2 = c[:, None], s[:, None]
    rp, rq = a[P, :], a[Q, :]
    a[P, :] = rp * c2 - rq * s2
    a[Q, :] = rp * s2 + rq * c2
    a[P, P] = new_pp
    a[Q, Q] = new_qq
    a[P, Q] = 0.0
    a[Q, P] = 0.0


def _jacobi(a, precision: str):
    """Cyclic Jacobi on a symmetric matrix (ndarray or DD).

    Returns ``(eigenvalues, converged)``; eigenvalues are unsorted floats.
    """
    a = a.copy()
    n = a.shape[0]
    tol = JACOBI_TOL[precision]
    schedule = _round_robin(n)
    converged = False
    for sweep in range(MAX_SWEEPS + 1):
        lead = ddouble.leading(a)
        diag = np.diag(lead)
        off = np.linalg.norm(lead - np.diag(diag))
        if off <= tol * np.linalg.norm(diag):
            converged = True
            break
        if sweep == MAX_SWEEPS:
            break
        for P, Q in schedule:
            _rotate(a, P, Q)
    if isinstance(a, DD):
        eig = np.array([a.hi[i, i] + a.lo[i, i] for i in range(n)])
    else:
        eig = np.diag(a).copy()
    return eig, converged


def eigvals_sym(m, precision: str = NATIVE) -> np.ndarray:
    """Eigenvalues of a symmetric matrix, in descending order."""
    precision = normalize_precision(precision)
    a = as_matrix(m, square=True)
    if not is_symmetric(a):
        raise DomainError("matrix is not symmetric")
    work = DD(a) if precision == EXTENDED else a
    eig, _ = _jacobi(work, precision)
    return np.sort(eig)[::-1]


def cond2(m, precision: str = NATIVE) -> ConditionReport:
    """2-norm condition number ``sigma_max / sigma_min``.

    Symmetric input is handled through its eigenvalues directly.  Otherwise
    the eigenvalues of ``m.T @ m`` are taken (formed in double-double on the
    extended path), which squares the dynamic range the iteration has to
    resolve; saturation is judged on that squared range.
    """
    precision = normalize_precision(precision)
    a = as_matrix(m, square=True)
    if is_symmetric(a):
        power = 1
        work = DD(a) if precision == EXTENDED else a
    else:
        power = 2
        if precision == EXTENDED:
            work = ddouble.gram(a)
        else:
            g = a.T @ a
            work = np.triu(g) + np.triu(g, 1).T
    eig, converged = _jacobi(work, precision)
    mags = np.abs(eig)
    largest, smallest = mags.max(), mags.min()
    if largest == 0.0 or smallest == 0.0:
        return ConditionReport(math.inf, precision, True)
    ratio = smallest / largest
    saturated = (not converged) or ratio < 10.0 * UNIT_ROUNDOFF[precision]
    cond = max(1.0, float((largest / smallest) ** (1.0 / power)))
    return ConditionReport(cond, precision, bool(saturated))
