"""Independent oracles shared by the test modules.

None of these call into the package, so they can check it.
"""
from fractions import Fraction

import mpmath
import numpy as np
import pytest


def full_pivot_solve(m, rhs):
    """Gaussian elimination with complete pivoting, plain Python floats."""
    n = len(m)
    a = [list(map(float, row)) + [float(r)] for row, r in zip(m, rhs)]
    cols = list(range(n))
    for k in range(n):
        pi, pj = max(((i, j) for i in range(k, n) for j in range(k, n)), key=lambda ij: abs(a[ij[0]][ij[1]]))
        a[k], a[pi] = a[pi], a[k]
        for row in a:
            row[k], row[pj] = row[pj], row[k]
        cols[k], cols[pj] = cols[pj], cols[k]
        for i in range(k + 1, n):
            f = a[i][k] / a[k][k]
            for j in range(k, n + 1):
                a[i][j] -= f * a[k][j]
    y = [0.0] * n
    for i in range(n - 1, -1, -1):
        y[i] = (a[i][n] - sum(a[i][j] * y[j] for j in range(i + 1, n))) / a[i][i]
    x = [0.0] * n
    for k, c in enumerate(cols):
        x[c] = y[k]
    return np.array(x)


def fraction_det(m):
    """Exact determinant by cofactor expansion over Fractions."""
    m = [[Fraction(x) for x in row] for row in m]
    if len(m) == 1:
        return m[0][0]
    return sum((-1) ** j * m[0][j] * fraction_det([r[:j] + r[j + 1:] for r in m[1:]]) for j in range(len(m)))


def mp_cond2(m, dps=60):
    """Reference 2-norm condition number from mpmath SVD of the float matrix."""
    with mpmath.workdps(dps):
        s = mpmath.svd_r(mpmath.matrix(np.asarray(m).tolist()), compute_uv=False)
        s = [abs(x) for x in s]
        return float(max(s) / min(s))


def gram_area(u, v):
    u, v = np.asarray(u, float), np.asarray(v, float)
    g = np.array([[u @ u, u @ v], [v @ u, v @ v]])
    return float(np.sqrt(max(np.linalg.det(g), 0.0)))


def random_matrix_with_cond(rng, n, cond):
    """Random n x n matrix with singular values log-spaced from 1 to 1/cond."""
    u, _ = np.linalg.qr(rng.standard_normal((n, n)))
    v, _ = np.linalg.qr(rng.standard_normal((n, n)))
    s = np.logspace(0, -np.log10(cond), n)
    return (u * s) @ v.T


def random_spd_with_cond(rng, n, cond):
    q, _ = np.linalg.qr(rng.standard_normal((n, n)))
    s = np.logspace(0, -np.log10(cond), n)
    a = (q * s) @ q.T
    return np.triu(a) + np.triu(a, 1).T


def rel_err(x, y):
    x, y = np.asarray(x, float), np.asarray(y, float)
    return float(np.max(np.abs(x - y)) / np.max(np.abs(y)))


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)
