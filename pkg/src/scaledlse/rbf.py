"""Least-squares RBF approximation through the raw or column-scaled normal equations.

The model is ``s(x) = sum_j c_j phi(|x - center_j|)`` optionally plus a linear
polynomial tail ``t_0 + t_1 x + t_2 y``.  With the tail the coordinate
columns reach the data span while kernel columns stay O(1), which is where
column scaling pays off.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .basis import Dataset, normal_equations
from .errors import DimensionError, DomainError, NumericalError, SingularMatrixError
from .linalg import NATIVE, ConditionReport, cond2, solve_lu
from .projective import to_homogeneous
from .scaling import apply_scaling, column_scales, scaled_solve

GAUSSIAN = "gaussian"
MULTIQUADRIC = "multiquadric"
KERNELS = (GAUSSIAN, MULTIQUADRIC)
TAILS = ("none", "linear")


def kernel_values(kernel: str, shape: float, r):
    er2 = (shape * np.asarray(r, dtype=float)) ** 2
    if kernel == GAUSSIAN:
        return np.exp(-er2)
    if kernel == MULTIQUADRIC:
        return np.sqrt(1.0 + er2)
    raise DomainError(f"unknown kernel {kernel!r}; expected one of {KERNELS}")


@dataclass(frozen=True)
class RbfModel:
    centers: np.ndarray
    kernel: str
    shape: float
    coeffs: np.ndarray
    tail_coeffs: np.ndarray = field(default_factory=lambda: np.zeros(0))

    def __post_init__(self):
        if not self.shape > 0:
            raise DomainError("shape parameter must be positive")
        if len(self.coeffs) != len(self.centers):
            raise DimensionError("one coefficient per center required")


def _validate(centers: np.ndarray, kernel: str, shape: float):
    if kernel not in KERNELS:
        raise DomainError(f"unknown kernel {kernel!r}; expected one of {KERNELS}")
    if not shape > 0:
        raise DomainError("shape parameter must be positive")
    if len(np.unique(centers, axis=0)) != len(centers):
        raise DomainError("centers must be pairwise distinct")


def rbf_design(points: Dataset, centers, kernel: str = GAUSSIAN, shape: float = 1.0) -> np.ndarray:
    """Collocation matrix ``phi(|point_i - center_j|)``, shape ``(n, M)``."""
    c = np.atleast_2d(np.asarray(centers, dtype=float))
    if c.shape[1] != points.dim:
        raise DimensionError(f"centers are {c.shape[1]}-D, points are {points.dim}-D")
    _validate(c, kernel, shape)
    if c.shape[0] > points.n:
        raise DomainError(f"{c.shape[0]} centers exceed {points.n} points")
    r = np.linalg.norm(points.points[:, None, :] - c[None, :, :], axis=2)
    return kernel_values(kernel, shape, r)


def _tail_columns(pts: np.ndarray, tail: str) -> np.ndarray:
    if tail == "none":
        return np.zeros((pts.shape[0], 0))
    if tail == "linear":
        return np.column_stack([np.ones(pts.shape[0]), pts])
    raise DomainError(f"unknown tail {tail!r}; expected one of {TAILS}")


def select_centers(points: Dataset, count: int, seed: int = 42) -> np.ndarray:
    """Uniform random subsample of the data points; prefixes are nested for a fixed seed."""
    if not 1 <= count <= points.n:
        raise DomainError(f"cannot pick {count} centers from {points.n} points")
    order = np.random.default_rng(seed).permutation(points.n)
    return points.points[order[:count]]


@dataclass(frozen=True)
class RbfFit:
    model: RbfModel
    raw_cond: ConditionReport
    scaled_cond: ConditionReport
    normal_matrix: np.ndarray

    def __iter__(self):
        return iter((self.model, self.raw_cond, self.scaled_cond))


def rbf_fit(points: Dataset, centers, kernel: str = GAUSSIAN, shape: float = 1.0,
            scaled: bool = False, tail: str = "none", precision: str = NATIVE) -> RbfFit:
    """Fit by normal equations; unpacks as ``model, raw_cond, scaled_cond``."""
    c = np.atleast_2d(np.asarray(centers, dtype=float))
    a = np.column_stack([rbf_design(points, c, kernel, shape), _tail_columns(points.points, tail)])
    ns = normal_equations(a, points.values)
    b = to_homogeneous(ns).b_matrix
    raw_cond = cond2(ns.n_matrix, precision)
    try:
        scaled_cond = cond2(apply_scaling(b, column_scales(b))[:, 1:], precision)
    except NumericalError:
        # zero right-hand side column: scale the coordinate block alone
        block = ns.n_matrix
        scaled_cond = cond2(apply_scaling(block, column_scales(block)), precision)
    try:
        coeffs = scaled_solve(ns, with_cond=False).coeffs if scaled else solve_lu(ns.n_matrix, ns.rhs)
    except NumericalError as exc:
        raise SingularMatrixError(f"RBF normal system is singular: {exc}", raw_cond, scaled_cond) from exc
    m = c.shape[0]
    model = RbfModel(c, kernel, float(shape), coeffs[:m], coeffs[m:])
    return RbfFit(model, raw_cond, scaled_cond, ns.n_matrix)


def rbf_eval_many(model: RbfModel, points) -> np.ndarray:
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    if pts.shape[1] != model.centers.shape[1]:
        raise DimensionError("point dimension does not match centers")
    r = np.linalg.norm(pts[:, None, :] - model.centers[None, :, :], axis=2)
    out = kernel_values(model.kernel, model.shape, r) @ model.coeffs
    if len(model.tail_coeffs):
        out = out + _tail_columns(pts, "linear") @ model.tail_coeffs
    return out


def rbf_eval(model: RbfModel, point) -> float:
    return float(rbf_eval_many(model, np.asarray(point, dtype=float)[None, :])[0])
