"""Command-line entry point: ``scaledlse <subcommand> ...``.

Exit codes: 0 success, 2 bad input, 3 numerical failure.
"""
from __future__ import annotations

import argparse
import csv
import io
import logging
import sys
import time
from pathlib import Path

import numpy as np

from . import experiments as ex
from .basis import BasisSpec, Dataset, design_matrix, normal_equations, vertical_sse
from .errors import DomainError, NumericalError
from .linalg import cond2, normalize_precision, solve_lu
from .scaling import scaled_solve

log = logging.getLogger("scaledlse")

EXIT_OK, EXIT_INPUT, EXIT_NUMERIC = 0, 2, 3


def parse_basis(text: str) -> BasisSpec:
    if text == "linear":
        return BasisSpec.linear()
    if text == "bilinear":
        return BasisSpec.bilinear()
    if text == "constant":
        return BasisSpec.constant(2)
    if text.startswith("poly:"):
        try:
            degree = int(text[5:])
        except ValueError:
            raise DomainError(f"bad polynomial degree in {text!r}") from None
        return BasisSpec.total_degree(degree, 2)
    raise DomainError(f"unknown basis {text!r}; use linear, bilinear or poly:<deg>")


def read_dataset(path: str) -> Dataset:
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = [h.strip() for h in next(reader, [])]
        if header != ["x", "y", "f"]:
            raise DomainError(f"{path}: expected header x,y,f, got {','.join(header)!r}")
        rows = []
        for lineno, row in enumerate(reader, start=2):
            if not row or all(not c.strip() for c in row):
                continue
            if len(row) != 3:
                raise DomainError(f"{path}:{lineno}: expected 3 fields, got {len(row)}")
            try:
                rows.append([float(c) for c in row])
            except ValueError:
                raise DomainError(f"{path}:{lineno}: not a number in {row!r}") from None
    if not rows:
        raise DomainError(f"{path}: no samples")
    arr = np.array(rows)
    return Dataset(arr[:, :2], arr[:, 2])


def _write(path: str, text: str):
    Path(path).write_text(text)


def _mirror_json(out: str, obj):
    _write(str(Path(out).with_suffix(".json")), ex.to_json(obj))


def cmd_fit(args) -> int:
    data = read_dataset(args.input)
    basis = parse_basis(args.basis)
    ns = normal_equations(design_matrix(data, basis), data.values, basis)
    if args.scaled:
        res = scaled_solve(ns, args.precision)
        coeffs, raw, scaled = res
    else:
        coeffs = solve_lu(ns.n_matrix, ns.rhs)
        raw = cond2(ns.n_matrix, args.precision)
        _, sb = ex.normal_conditioning(ns)
        scaled = cond2(sb[:, 1:], args.precision)
    result = {
        "basis": [list(t) for t in basis.terms],
        "coefficients": coeffs.tolist(),
        "sse": vertical_sse(data, basis, coeffs),
        "scaled": bool(args.scaled),
        "cond_raw": raw.cond,
        "cond_scaled": scaled.cond,
        "saturated_raw": raw.saturated,
        "saturated_scaled": scaled.saturated,
        "precision": raw.precision_used,
    }
    if args.json:
        sys.stdout.write(ex.to_json(result))
    else:
        for (term, c) in zip(basis.terms, coeffs):
            sys.stdout.write(f"coef{term}\t{c:.17g}\n")
        sys.stdout.write(f"sse\t{result['sse']:.17g}\n")
        sys.stdout.write(f"cond_raw\t{raw.cond:.6e}{' (lower bound)' if raw.saturated else ''}\n")
        sys.stdout.write(f"cond_scaled\t{scaled.cond:.6e}{' (lower bound)' if scaled.saturated else ''}\n")
    return EXIT_OK


def _parse_sizes(text: str):
    try:
        return tuple(int(s) for s in text.split(",") if s.strip())
    except ValueError:
        raise DomainError(f"bad size list {text!r}") from None


def cmd_cond_sweep(args) -> int:
    rows = ex.cond_experiment(parse_basis(args.basis), args.lo, args.hi, _parse_sizes(args.sizes),
                              args.precision, axis=args.axis, label=args.basis)
    _write(args.out, ex.rows_to_csv(rows))
    if args.json:
        _mirror_json(args.out, rows)
    return EXIT_NUMERIC if all(r.error for r in rows) else EXIT_OK


def cmd_hilbert_sweep(args) -> int:
    if args.steps < 1:
        raise DomainError("--steps must be positive")
    bs = np.linspace(args.b_from, args.b_to, args.steps) if args.steps > 1 else [args.b_from]
    rows = ex.hilbert_rows(args.n, bs, args.precision)
    _write(args.out, ex.rows_to_csv(rows))
    if args.json:
        _mirror_json(args.out, rows)
    return EXIT_NUMERIC if all(r.error for r in rows) else EXIT_OK


def cmd_bivector_hist(args) -> int:
    basis = parse_basis(args.basis)
    axis = ex.axis_values(args.lo, args.hi, args.axis)
    data = ex.grid_dataset(axis, np.ones(basis.m), basis, seed=args.seed)
    ns = normal_equations(design_matrix(data, basis), data.values, basis)
    edges, raw, scaled = ex.bivector_histograms(ns, args.bins)
    rows = [(edges[i], edges[i + 1], int(raw[i]), int(scaled[i])) for i in range(args.bins)]
    _write(args.out, ex.rows_to_csv(rows, ex.HIST_HEADER))
    if args.json:
        _mirror_json(args.out, [dict(zip(ex.HIST_HEADER, r)) for r in rows])
    return EXIT_OK


def cmd_rbf_demo(args) -> int:
    fit, data, approx, err = ex.rbf_demo(args.points, args.centers, args.kernel, args.shape, args.span,
                                         args.seed, args.scaled, args.tail, args.precision)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(("x", "y", "f", "approx", "abs_error"))
    for (x, y), f, a, e in zip(data.points, data.values, approx, err):
        w.writerow([f"{x:.6e}", f"{y:.6e}", f"{f:.6e}", f"{a:.6e}", f"{e:.6e}"])
    _write(args.out, buf.getvalue())
    summary = {
        "cond_raw": fit.raw_cond.cond, "cond_scaled": fit.scaled_cond.cond,
        "ratio": fit.raw_cond.cond / fit.scaled_cond.cond,
        "saturated_raw": fit.raw_cond.saturated, "saturated_scaled": fit.scaled_cond.saturated,
        "max_abs_error": float(err.max()), "rms_error": float(np.sqrt(np.mean(err ** 2))),
    }
    if args.json:
        _mirror_json(args.out, summary)
    sys.stdout.write(" ".join(f"{k}={v:.6g}" if isinstance(v, float) else f"{k}={v}"
                              for k, v in summary.items()) + "\n")
    return EXIT_OK


def _precision(text: str) -> str:
    try:
        return normalize_precision(text)
    except DomainError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="scaledlse", description=__doc__.splitlines()[0])
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, func, help_):
        sp = sub.add_parser(name, help=help_)
        sp.add_argument("--seed", type=int, default=argparse.SUPPRESS)
        sp.set_defaults(func=func)
        return sp

    sp = add("fit", cmd_fit, "least-squares fit of an x,y,f CSV")
    sp.add_argument("--input", required=True)
    sp.add_argument("--basis", default="linear")
    sp.add_argument("--scaled", action="store_true")
    sp.add_argument("--json", action="store_true")
    sp.add_argument("--precision", type=_precision, default="native")

    sp = add("cond-sweep", cmd_cond_sweep, "raw vs scaled conditioning on meshes of growing size")
    sp.add_argument("--basis", default="linear")
    sp.add_argument("--lo", type=float, default=10.0)
    sp.add_argument("--hi", type=float, default=1e5)
    sp.add_argument("--sizes", default=",".join(map(str, ex.DEFAULT_SIZES)))
    sp.add_argument("--axis", choices=("r5", "uniform"), default="r5")
    sp.add_argument("--precision", type=_precision, default="native")
    sp.add_argument("--out", required=True)
    sp.add_argument("--json", action="store_true")

    sp = add("hilbert-sweep", cmd_hilbert_sweep, "conditioning of H_n(0, b) over a range of b")
    sp.add_argument("--n", type=int, default=5)
    sp.add_argument("--b-from", type=float, default=10.0)
    sp.add_argument("--b-to", type=float, default=1000.0)
    sp.add_argument("--steps", type=int, default=100)
    sp.add_argument("--precision", type=_precision, default="extended")
    sp.add_argument("--out", required=True)
    sp.add_argument("--json", action="store_true")

    sp = add("bivector-hist", cmd_bivector_hist, "bivector magnitude histograms, raw vs scaled")
    sp.add_argument("--basis", default="bilinear")
    sp.add_argument("--lo", type=float, default=10.0)
    sp.add_argument("--hi", type=float, default=1e5)
    sp.add_argument("--bins", type=int, default=50)
    sp.add_argument("--axis", choices=("r5", "uniform"), default="r5")
    sp.add_argument("--out", required=True)
    sp.add_argument("--json", action="store_true")

    sp = add("rbf-demo", cmd_rbf_demo, "RBF approximation of a synthetic terrain")
    sp.add_argument("--points", type=int, default=2000)
    sp.add_argument("--centers", type=int, default=100)
    sp.add_argument("--kernel", choices=("gaussian", "multiquadric"), default="gaussian")
    sp.add_argument("--shape", type=float, default=1e-4)
    sp.add_argument("--span", type=float, default=1e5)
    sp.add_argument("--tail", choices=("none", "linear"), default="linear")
    sp.add_argument("--scaled", action="store_true")
    sp.add_argument("--precision", type=_precision, default="native")
    sp.add_argument("--out", required=True)
    sp.add_argument("--json", action="store_true")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(name)s: %(message)s")
    start = time.perf_counter()
    try:
        code = args.func(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (NumericalError, OverflowError, ArithmeticError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    log.info("%s finished in %.3f s", args.command, time.perf_counter() - start)
    return code


if __name__ == "__main__":
    sys.exit(main())
