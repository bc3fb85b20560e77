"""Column scaling of the homogeneous system and the scaled solve pipeline.

Dividing column ``j`` of ``B = [-c | N]`` by ``q_j = max_i |b_ij|`` changes
the unit of each axis without changing the projective solution, since the
cofactors are multilinear in the columns.  The scaled coordinate block
``N diag(1/q_1..q_m)`` is usually far better conditioned than ``N`` when the
data span several decades.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .basis import NormalSystem
from .errors import DimensionError, DomainError, SingularColumnError
from .linalg import NATIVE, ConditionReport, as_matrix, cond2
from .projective import dehomogenize, outer_product_solve, to_homogeneous, HomogeneousSystem

MAX_ABS = "max"
NORM2 = "norm2"


@dataclass(frozen=True)
class ScaleVector:
    q: np.ndarray

    def __post_init__(self):
        q = np.array(self.q, dtype=float).reshape(-1)
        if not (np.all(np.isfinite(q)) and np.all(q > 0)):
            raise DomainError("scale factors must be positive and finite")
        object.__setattr__(self, "q", q)

    def __len__(self):
        return self.q.shape[0]


def column_scales(b, strategy: str = MAX_ABS) -> ScaleVector:
    """Per-column scale factors; ``max`` is the infinity norm, ``norm2`` the 2-norm."""
    a = as_matrix(b)
    if strategy == MAX_ABS:
        q = np.max(np.abs(a), axis=0)
    elif strategy == NORM2:
        q = np.linalg.norm(a, axis=0)
    else:
        raise DomainError(f"unknown scaling strategy {strategy!r}")
    zero = np.flatnonzero(q == 0.0)
    if zero.size:
        raise SingularColumnError(f"column {int(zero[0])} is identically zero")
    return ScaleVector(q)


def apply_scaling(b, q) -> np.ndarray:
    a = as_matrix(b)
    q = q if isinstance(q, ScaleVector) else ScaleVector(q)
    if len(q) != a.shape[1]:
        raise DimensionError(f"{len(q)} scales for {a.shape[1]} columns")
    return a / q.q


@dataclass(frozen=True)
class ScaledSolution:
    coeffs: np.ndarray
    raw_cond: ConditionReport
    scaled_cond: ConditionReport
    scales: ScaleVector

    def __iter__(self):
        return iter((self.coeffs, self.raw_cond, self.scaled_cond))

    @property
    def ratio(self) -> float:
        return self.raw_cond.cond / self.scaled_cond.cond


def scaled_solve(ns: NormalSystem, precision: str = NATIVE, strategy: str = MAX_ABS,
                 with_cond: bool = True) -> ScaledSolution:
    """Solve the normal equations through the column-scaled homogeneous system.

    Returned coefficients are in the original basis.  The two condition
    reports are for ``N`` and for the scaled coordinate block of ``B``.
    Unpacks as ``coeffs, raw_cond, scaled_cond``.
    """
    hs = to_homogeneous(ns)
    q = column_scales(hs.b_matrix, strategy)
    scaled = apply_scaling(hs.b_matrix, q)
    sol = outer_product_solve(HomogeneousSystem(scaled))
    coeffs = dehomogenize(sol, q)
    if with_cond:
        raw_cond = cond2(ns.n_matrix, precision)
        scaled_cond = cond2(scaled[:, 1:], precision)
    else:
        raw_cond = scaled_cond = None
    return ScaledSolution(coeffs, raw_cond, scaled_cond, q)


def bivector_magnitudes(b) -> np.ndarray:
    """Areas ``|u ^ v|`` for every unordered pair of rows ``u, v`` (i < j order).

    Computed from the wedge components ``u_k v_l - u_l v_k`` on rows rescaled
    to unit max-norm, which avoids the cancellation in
    ``|u|^2 |v|^2 - (u.v)^2`` for nearly parallel rows.
    """
    a = as_matrix(b)
    if a.shape[0] < 2:
        raise DimensionError("need at least two rows")
    norms = np.max(np.abs(a), axis=1)
    unit = a / np.where(norms > 0, norms, 1.0)[:, None]
    iu, ju = np.triu_indices(a.shape[1], k=1)
    out = []
    for i in range(a.shape[0]):
        for j in range(i + 1, a.shape[0]):
            u, v = unit[i], unit[j]
            comps = u[iu] * v[ju] - u[ju] * v[iu]
            out.append(norms[i] * norms[j] * float(np.sqrt(comps @ comps)))
    return np.array(out)
