"""Least-squares fitting with column-scaled normal equations.

Scaling each column of the homogeneous system ``[-A^T f | A^T A]`` by its
largest entry leaves the solution unchanged but can cut the condition number
by many orders of magnitude when the data span several decades.
"""
from .basis import (BasisSpec, Dataset, NormalSystem, design_matrix, evaluate, evaluate_many,
                    normal_equations, vertical_sse)
from .errors import (DegenerateSystemError, DimensionError, DomainError, HilbertOverflowError,
                     NoAffineSolutionError, NumericalError, SingularColumnError, SingularMatrixError)
from .hilbert import (HilbertSpec, continuous_lse_fit, continuous_moments, hilbert_cond_sweep,
                      hilbert_matrix, l2_error_squared)
from .linalg import ConditionReport, cond2, determinant, eigvals_sym, solve_lu
from .projective import (HomogeneousSolution, HomogeneousSystem, dehomogenize, outer_product_solve,
                         to_homogeneous)
from .rbf import RbfModel, rbf_design, rbf_eval, rbf_fit, select_centers
from .scaling import ScaleVector, apply_scaling, bivector_magnitudes, column_scales, scaled_solve

__version__ = "0.1.0"
