"""Monomial bases, design matrices and normal equations."""
from __future__ import annotations

import itertools
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import DimensionError, DomainError


@dataclass(frozen=True)
class Dataset:
    """``n`` sample points in ``dim`` dimensions with one measured value each."""

    points: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        pts = np.array(self.points, dtype=float)
        if pts.ndim == 1:
            pts = pts[:, None]
        vals = np.array(self.values, dtype=float).reshape(-1)
        if pts.ndim != 2 or pts.shape[0] < 1 or pts.shape[1] < 1:
            raise DimensionError(f"points must be a non-empty (n, d) array, got {pts.shape}")
        if vals.shape[0] != pts.shape[0]:
            raise DimensionError(f"{pts.shape[0]} points but {vals.shape[0]} values")
        if not (np.all(np.isfinite(pts)) and np.all(np.isfinite(vals))):
            raise DomainError("dataset contains non-finite numbers")
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "values", vals)

    @property
    def n(self) -> int:
        return self.points.shape[0]

    @property
    def dim(self) -> int:
        return self.points.shape[1]


@dataclass(frozen=True)
class BasisSpec:
    """Ordered monomial terms; term ``k`` is ``prod_j x_j ** terms[k][j]``."""

    terms: tuple

    def __post_init__(self):
        terms = tuple(tuple(int(e) for e in t) for t in self.terms)
        if not terms:
            raise DomainError("basis needs at least one term")
        if len({len(t) for t in terms}) != 1:
            raise DimensionError("all terms must have the same number of exponents")
        if any(e < 0 for t in terms for e in t):
            raise DomainError("exponents must be non-negative")
        if len(set(terms)) != len(terms):
            raise DomainError("basis terms must be distinct")
        object.__setattr__(self, "terms", terms)

    @property
    def dim(self) -> int:
        return len(self.terms[0])

    @property
    def m(self) -> int:
        return len(self.terms)

    @classmethod
    def constant(cls, dim: int = 2) -> "BasisSpec":
        return cls(((0,) * dim,))

    @classmethod
    def linear(cls) -> "BasisSpec":
        """``a + b x + c y``"""
        return cls(((0, 0), (1, 0), (0, 1)))

    @classmethod
    def bilinear(cls) -> "BasisSpec":
        """``a + b x + c y + d x y``"""
        return cls(((0, 0), (1, 0), (0, 1), (1, 1)))

    @classmethod
    def polynomial(cls, degree: int) -> "BasisSpec":
        """1-D powers ``1, x, ..., x**degree``."""
        if degree < 0:
            raise DomainError("degree must be non-negative")
        return cls(tuple((k,) for k in range(degree + 1)))

    @classmethod
    def total_degree(cls, degree: int, dim: int = 2) -> "BasisSpec":
        """All monomials in ``dim`` variables of total degree <= ``degree``."""
        if degree < 0:
            raise DomainError("degree must be non-negative")
        terms = [e for e in itertools.product(range(degree + 1), repeat=dim) if sum(e) <= degree]
        terms.sort(key=lambda e: (sum(e), tuple(-x for x in e)))
        return cls(tuple(terms))


@dataclass(frozen=True)
class NormalSystem:
    """``n_matrix @ xi = rhs`` with ``n_matrix = A.T A`` and ``rhs = A.T f``."""

    n_matrix: np.ndarray
    rhs: np.ndarray
    basis: BasisSpec | None = None

    @property
    def m(self) -> int:
        return self.rhs.shape[0]


def _check_dims(basis: BasisSpec, dim: int):
    if basis.dim != dim:
        raise DimensionError(f"basis has {basis.dim} variables, data has {dim}")


def _monomials(points: np.ndarray, basis: BasisSpec) -> np.ndarray:
    out = np.ones((points.shape[0], basis.m))
    for k, term in enumerate(basis.terms):
        for j, e in enumerate(term):
            if e:  # 0**0 stays 1
                out[:, k] *= points[:, j] ** e
    return out


def design_matrix(data: Dataset, basis: BasisSpec) -> np.ndarray:
    _check_dims(basis, data.dim)
    return _monomials(data.points, basis)


def normal_equations(a, values, basis: BasisSpec | None = None) -> NormalSystem:
    """Assemble ``A.T A`` and ``A.T f``.

    Only the upper triangle is summed and then mirrored, so the result is
    exactly symmetric.
    """
    a = np.asarray(a, dtype=float)
    f = np.asarray(values, dtype=float).reshape(-1)
    if a.ndim != 2 or a.shape[0] != f.shape[0]:
        raise DimensionError(f"design matrix {a.shape} does not match {f.shape[0]} values")
    n, m = a.shape
    if n < m:
        warnings.warn(f"underdetermined system: {n} samples for {m} unknowns", stacklevel=2)
    nm = np.empty((m, m))
    for i in range(m):
        for j in range(i, m):
            nm[i, j] = nm[j, i] = np.dot(a[:, i], a[:, j])
    rhs = a.T @ f
    return NormalSystem(nm, rhs, basis)


def evaluate(basis: BasisSpec, coeffs, point) -> float:
    c = np.asarray(coeffs, dtype=float)
    if c.shape != (basis.m,):
        raise DimensionError(f"{c.shape[0]} coefficients for {basis.m} terms")
    p = np.atleast_1d(np.asarray(point, dtype=float))
    _check_dims(basis, p.shape[0])
    return float(_monomials(p[None, :], basis)[0] @ c)


def evaluate_many(basis: BasisSpec, coeffs, points) -> np.ndarray:
    pts = np.asarray(points, dtype=float)
    if pts.ndim == 1:
        pts = pts[:, None]
    _check_dims(basis, pts.shape[1])
    return _monomials(pts, basis) @ np.asarray(coeffs, dtype=float)


def vertical_sse(data: Dataset, basis: BasisSpec, coeffs) -> float:
    """Sum of squared vertical residuals ``sum (f_i - model(x_i))**2``."""
    r = data.values - evaluate_many(basis, coeffs, data.points)
    return float(r @ r)
