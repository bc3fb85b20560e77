"""Homogeneous form of the normal equations and its cofactor solution.

``N xi = c`` is rewritten as ``B zeta = 0`` with ``B = [-c | N]``.  The null
vector of the ``m x (m+1)`` matrix ``B`` is the generalized cross product of
its rows: component ``k`` is the signed minor obtained by deleting column
``k``.  Euclidean coefficients follow from ``xi_j = zeta_j / zeta_0``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .basis import NormalSystem
from .errors import DegenerateSystemError, DimensionError, NoAffineSolutionError
from .linalg import as_matrix, determinant_parts


@dataclass(frozen=True)
class HomogeneousSystem:
    b_matrix: np.ndarray

    def __post_init__(self):
        b = as_matrix(self.b_matrix)
        if b.shape[1] != b.shape[0] + 1:
            raise DimensionError(f"homogeneous system must be m x (m+1), got {b.shape}")
        object.__setattr__(self, "b_matrix", b)

    @property
    def m(self) -> int:
        return self.b_matrix.shape[0]


@dataclass(frozen=True)
class HomogeneousSolution:
    """Projective solution; any nonzero multiple represents the same point."""

    zeta: np.ndarray


def to_homogeneous(ns: NormalSystem) -> HomogeneousSystem:
    return HomogeneousSystem(np.column_stack([-np.asarray(ns.rhs, dtype=float), ns.n_matrix]))


def outer_product_solve(hs: HomogeneousSystem) -> HomogeneousSolution:
    """Null vector of ``B`` as the signed minors ``(-1)**k det(B without column k)``.

    Every minor is kept as mantissa and binary exponent, and the whole vector
    is shifted by a common power of two before conversion.  That shift is an
    exact projective rescaling, so no solution component is divided by another.
    """
    b = hs.b_matrix
    m = hs.m
    parts = []
    for k in range(m + 1):
        mant, expo = determinant_parts(np.delete(b, k, axis=1))
        parts.append(((-1) ** k * mant, expo))
    live = [e for mant, e in parts if mant != 0.0]
    if not live:
        raise DegenerateSystemError("all cofactors vanish; rank(B) < m")
    top = max(live)
    zeta = np.array([np.ldexp(mant, e - top) if mant != 0.0 else 0.0 for mant, e in parts])
    return HomogeneousSolution(zeta)


def dehomogenize(sol: HomogeneousSolution, scales=None) -> np.ndarray:
    """Euclidean coefficients from a projective solution.

    With column scales ``q`` (one per column of ``B``, index 0 for the
    right-hand side) the solution belongs to ``B diag(1/q)``; it is mapped
    back by ``xi_j = (q_0 zeta_j) / (q_j zeta_0)``.
    """
    zeta = np.asarray(sol.zeta, dtype=float)
    if zeta[0] == 0.0:
        raise NoAffineSolutionError("homogeneous coordinate is zero; no finite solution")
    if scales is None:
        return zeta[1:] / zeta[0]
    q = np.asarray(getattr(scales, "q", scales), dtype=float)
    if q.shape != zeta.shape:
        raise DimensionError(f"{q.shape[0]} scales for {zeta.shape[0]} homogeneous components")
    return (q[0] * zeta[1:]) / (q[1:] * zeta[0])
