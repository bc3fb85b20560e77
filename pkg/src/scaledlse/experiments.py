"""Data generators and conditioning experiments.

Everything here is deterministic given its seed, so rerunning an experiment
reproduces its output files byte for byte.
"""
from __future__ import annotations

import csv
import io
import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass

import numpy as np

from .basis import BasisSpec, Dataset, design_matrix, evaluate_many, normal_equations
from .errors import DomainError, NumericalError
from .linalg import NATIVE, UNIT_ROUNDOFF, cond2, normalize_precision
from .projective import to_homogeneous
from .rbf import rbf_eval_many, rbf_fit, select_centers
from .scaling import apply_scaling, bivector_magnitudes, column_scales

DEFAULT_SIZES = (4, 6, 9, 11, 16, 21)
SWEEP_HEADER = ("label", "n_points", "cond_raw", "cond_scaled", "ratio",
                "saturated_raw", "saturated_scaled", "precision")
HIST_HEADER = ("bin_lo", "bin_hi", "count_raw", "count_scaled")


def r5_grid(lo: float, hi: float) -> np.ndarray:
    """Renard R5 values ``lo * 10**(j/5)`` from ``lo`` up to ``hi``."""
    if not (lo > 0 and hi > 0):
        raise DomainError("R5 bounds must be positive")
    if not hi > lo:
        raise DomainError(f"empty R5 span ({lo}, {hi})")
    steps = math.floor(5.0 * math.log10(hi / lo) + 1e-9)
    base = math.log10(lo)
    return np.array([10.0 ** (base + j / 5.0) for j in range(steps + 1)])


def axis_values(lo: float, hi: float, kind: str = "r5") -> np.ndarray:
    """Axis for the regular mesh: ``r5`` (log-equidistant) or ``uniform``.

    The uniform axis has as many values as the R5 one over the same span.
    """
    grid = r5_grid(lo, hi)
    if kind == "r5":
        return grid
    if kind == "uniform":
        return np.linspace(lo, hi, len(grid))
    raise DomainError(f"unknown axis kind {kind!r}")


def subsample_axis(axis, count: int) -> np.ndarray:
    axis = np.asarray(axis, dtype=float)
    if not 1 <= count <= len(axis):
        raise DomainError(f"cannot take {count} of {len(axis)} axis values")
    idx = np.unique(np.round(np.linspace(0, len(axis) - 1, count)).astype(int))
    return axis[idx]


def grid_dataset(axis, truth_coeffs, basis: BasisSpec, noise_rel: float = 0.0, seed: int = 42) -> Dataset:
    if basis.dim != 2:
        raise DomainError("grid datasets are two-dimensional")
    if noise_rel < 0:
        raise DomainError("noise_rel must be non-negative")
    axis = np.asarray(axis, dtype=float)
    xx, yy = np.meshgrid(axis, axis, indexing="ij")
    pts = np.column_stack([xx.ravel(), yy.ravel()])
    f = evaluate_many(basis, truth_coeffs, pts)
    g = np.random.default_rng(seed).standard_normal(len(f))
    return Dataset(pts, f * (1.0 + noise_rel * g))


@dataclass(frozen=True)
class ExperimentRow:
    label: str
    n_points: int
    cond_raw: float
    cond_scaled: float
    ratio: float
    saturated_raw: bool
    saturated_scaled: bool
    precision: str
    error: str | None = None


def _row(label, n_points, raw, scaled, precision) -> ExperimentRow:
    return ExperimentRow(label, n_points, raw.cond, scaled.cond, raw.cond / scaled.cond,
                         raw.saturated, scaled.saturated, precision)


def _failed_row(label, n_points, precision, exc) -> ExperimentRow:
    nan = float("nan")
    return ExperimentRow(label, n_points, nan, nan, nan, True, True, precision, f"{type(exc).__name__}: {exc}")


def normal_conditioning(ns):
    """Homogeneous matrix ``B = [-c | N]`` and its column-scaled version."""
    b = to_homogeneous(ns).b_matrix
    return b, apply_scaling(b, column_scales(b))


def cond_experiment(basis: BasisSpec, lo: float = 10.0, hi: float = 1e5, sizes=DEFAULT_SIZES,
                    precision: str = NATIVE, axis: str = "r5", label: str = "basis",
                    workers: int = 1) -> list[ExperimentRow]:
    """Raw vs scaled conditioning of the normal matrix on meshes of growing size.

    Each size ``k`` keeps ``k`` of the axis values (spread over the whole
    span), giving a ``k x k`` mesh.  Failures are recorded in the row.
    """
    precision = normalize_precision(precision)
    full = axis_values(lo, hi, axis)
    truth = np.ones(basis.m)

    def one(k: int) -> ExperimentRow:
        name = f"{label}:{axis}:{k}x{k}"
        try:
            if k * k < basis.m:
                raise DomainError(f"{k * k} points for {basis.m} unknowns")
            data = grid_dataset(subsample_axis(full, k), truth, basis)
            ns = normal_equations(design_matrix(data, basis), data.values, basis)
            _, scaled = normal_conditioning(ns)
            return _row(name, data.n, cond2(ns.n_matrix, precision), cond2(scaled[:, 1:], precision), precision)
        except (DomainError, NumericalError) as exc:
            return _failed_row(name, k * k, precision, exc)

    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            return list(pool.map(one, sizes))
    return [one(k) for k in sizes]


def hilbert_rows(n: int, b_values, precision: str = "extended") -> list[ExperimentRow]:
    from .hilbert import hilbert_cond_sweep

    precision = normalize_precision(precision)
    rows = []
    for pt in hilbert_cond_sweep(n, b_values, precision):
        label = f"H{n}(0,{pt.b:.10g})"
        if pt.error:
            rows.append(_failed_row(label, n, precision, OverflowError(pt.error)))
        else:
            rows.append(_row(label, n, pt.raw, pt.scaled, precision))
    return rows


@dataclass(frozen=True)
class Terrain:
    """Sum of Gaussian bumps ``a_k exp(-|x - c_k|^2 / (2 w_k^2))``."""

    amplitudes: np.ndarray
    centers: np.ndarray
    widths: np.ndarray

    def __call__(self, pts) -> np.ndarray:
        pts = np.atleast_2d(np.asarray(pts, dtype=float))
        d2 = np.sum((pts[:, None, :] - self.centers[None, :, :]) ** 2, axis=2)
        return np.exp(-d2 / (2.0 * self.widths ** 2)) @ self.amplitudes


def terrain_function(span: float, seed: int = 42, bumps: int = 5) -> Terrain:
    if not span > 10:
        raise DomainError("terrain span must exceed the lower corner 10")
    rng = np.random.default_rng([seed, 0])
    extent = span - 10.0
    return Terrain(
        amplitudes=rng.uniform(0.5, 2.0, bumps),
        centers=rng.uniform(10.0, span, (bumps, 2)),
        widths=rng.uniform(0.15, 0.35, bumps) * extent,
    )


def synthetic_terrain(n_points: int, span: float = 1e5, seed: int = 42) -> Dataset:
    """Uniform random samples of a smooth five-bump surface on ``<10, span>^2``."""
    if n_points < 1:
        raise DomainError("need at least one point")
    surface = terrain_function(span, seed)
    pts = np.random.default_rng([seed, 1]).uniform(10.0, span, (n_points, 2))
    return Dataset(pts, surface(pts))


@dataclass(frozen=True)
class Histogram:
    edges: np.ndarray
    counts: np.ndarray


def bivector_range(*magnitude_sets) -> tuple[float, float]:
    """Log-histogram range over one or more magnitude sets, floored at unit roundoff."""
    eps = UNIT_ROUNDOFF[NATIVE]
    allm = np.concatenate([np.asarray(m, dtype=float) for m in magnitude_sets])
    pos = allm[allm > 0]
    lo = max(pos.min(), eps) if pos.size else eps
    hi = max(allm.max(), lo)
    if hi <= lo:
        hi = lo * 10.0
    return lo, hi


def bivector_report(m, bins: int = 50, lo: float | None = None, hi: float | None = None) -> Histogram:
    """Histogram of row-pair bivector magnitudes over log-spaced bins.

    Magnitudes outside ``[lo, hi]`` (including zeros) are counted in the
    nearest end bin so the counts always add up to the number of row pairs.
    """
    if bins < 1:
        raise DomainError("bins must be positive")
    mags = bivector_magnitudes(m)
    if lo is None or hi is None:
        dlo, dhi = bivector_range(mags)
        lo = dlo if lo is None else lo
        hi = dhi if hi is None else hi
    edges = np.logspace(np.log10(lo), np.log10(hi), bins + 1)
    clipped = np.clip(mags, edges[0], edges[-1])
    idx = np.clip(np.searchsorted(edges, clipped, side="right") - 1, 0, bins - 1)
    return Histogram(edges, np.bincount(idx, minlength=bins))


def bivector_histograms(ns, bins: int = 50) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Shared-edge histograms for the raw and scaled coordinate blocks of ``B``."""
    b, scaled = normal_conditioning(ns)
    raw_m, scaled_m = bivector_magnitudes(b[:, 1:]), bivector_magnitudes(scaled[:, 1:])
    lo, hi = bivector_range(raw_m, scaled_m)
    raw_h = bivector_report(b[:, 1:], bins, lo, hi)
    scaled_h = bivector_report(scaled[:, 1:], bins, lo, hi)
    return raw_h.edges, raw_h.counts, scaled_h.counts


def rbf_demo(points: int = 2000, centers: int = 100, kernel: str = "gaussian", shape: float = 1e-4,
             span: float = 1e5, seed: int = 42, scaled: bool = True, tail: str = "linear",
             precision: str = NATIVE):
    """Fit the synthetic terrain; returns ``(fit, data, approx, abs_error)``."""
    data = synthetic_terrain(points, span, seed)
    c = select_centers(data, centers, seed)
    fit = rbf_fit(data, c, kernel, shape, scaled=scaled, tail=tail, precision=precision)
    approx = rbf_eval_many(fit.model, data.points)
    return fit, data, approx, np.abs(approx - data.values)


# -- emission ---------------------------------------------------------------

def _fmt(x) -> str:
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, float):
        return "nan" if math.isnan(x) else f"{x:.5e}"
    return str(x)


def rows_to_csv(rows, header=SWEEP_HEADER) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        rec = asdict(r) if hasattr(r, "__dataclass_fields__") else dict(zip(header, r))
        w.writerow([_fmt(rec[h]) for h in header])
    return buf.getvalue()


def _jsonable(x):
    if isinstance(x, float) and not math.isfinite(x):
        return None if math.isnan(x) else ("inf" if x > 0 else "-inf")
    if isinstance(x, dict):
        return {k: _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, np.generic):
        return _jsonable(x.item())
    if isinstance(x, np.ndarray):
        return _jsonable(x.tolist())
    return x


def to_json(obj) -> str:
    if isinstance(obj, list) and obj and hasattr(obj[0], "__dataclass_fields__"):
        obj = [asdict(r) for r in obj]
    return json.dumps(_jsonable(obj), indent=2, sort_keys=True) + "\n"
