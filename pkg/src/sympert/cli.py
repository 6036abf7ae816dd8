"""Command-line harness.

Exit codes: 0 ok, 1 check failed, 2 usage/parse error, 3 domain error
(e.g. not positive definite), 4 numeric failure, 5 insufficient data.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import warnings

import numpy as np

from .blockops import is_orthosymplectic, is_symplectic
from .errors import DomainError, InsufficientDataError, NumericError
from .perturb import METRICS, align_orthosymplectic, perturbation_report, scaling_study, symplectic_correction
from .williamson import williamson_decompose

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_DOMAIN, EXIT_NUMERIC, EXIT_DATA = range(6)


class UsageError(Exception):
    pass


def read_matrix_file(path) -> np.ndarray:
    """Load ``{"n": n, "data": [[...], ...]}`` holding a ``2n x 2n`` matrix."""
    try:
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
    except (OSError, ValueError) as exc:
        raise UsageError(f"cannot read matrix file {path}: {exc}") from exc
    if not isinstance(doc, dict) or "n" not in doc or "data" not in doc:
        raise UsageError(f"{path}: expected an object with keys 'n' and 'data'")
    n = doc["n"]
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise UsageError(f"{path}: 'n' must be a positive integer")
    data = doc["data"]
    if (
        not isinstance(data, list)
        or len(data) != 2 * n
        or any(not isinstance(row, list) or len(row) != 2 * n for row in data)
    ):
        raise UsageError(f"{path}: 'data' must be a {2 * n}x{2 * n} array")
    try:
        M = np.array(data, dtype=float)
    except (TypeError, ValueError) as exc:
        raise UsageError(f"{path}: non-numeric entries") from exc
    if not np.all(np.isfinite(M)):
        raise UsageError(f"{path}: non-finite entries")
    return M


def write_matrix_file(path, M) -> None:
    M = np.asarray(M, dtype=float)
    if M.ndim != 2 or M.shape[0] != M.shape[1] or M.shape[0] % 2:
        raise DomainError("matrix file holds a square matrix of even size")
    with open(path, "w", encoding="utf-8") as fh:
        json.dump({"n": M.shape[0] // 2, "data": M.tolist()}, fh)
        fh.write("\n")


def _emit(doc, out) -> None:
    text = json.dumps(doc, indent=2) + "\n"
    if out in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)


def cmd_williamson(args) -> int:
    A = read_matrix_file(args.input)
    _emit(williamson_decompose(A, args.cluster_tol).to_dict(), args.out)
    return EXIT_OK


def cmd_check(args) -> int:
    M = read_matrix_file(args.input)
    check = is_symplectic if args.kind == "symplectic" else is_orthosymplectic
    res = check(M, args.tol)
    _emit({"pass": res.passed, "residuals": res.residuals}, args.out)
    return EXIT_OK if res.passed else EXIT_FAIL


def cmd_perturb(args) -> int:
    A = read_matrix_file(args.a)
    H = read_matrix_file(args.h)
    if A.shape != H.shape:
        raise UsageError("A and H must have the same size")
    base = williamson_decompose(A, args.cluster_tol)
    pert = williamson_decompose(A + H, args.cluster_tol)
    clusters = base.clusters
    report = perturbation_report(A, H, base.S, pert.S, clusters)
    align = align_orthosymplectic(base.S, pert.S, clusters)
    corr = symplectic_correction(base.S, pert.S, clusters)
    doc = {
        "clusters": [{"mu": c["mu"], "alpha": c["alpha"]} for c in clusters.to_dict()],
        "D": base.D.tolist(),
        "D_perturbed": pert.D.tolist(),
        "report": report.to_dict(),
        "align_residual": align.residual,
        "correction_residuals": {str(i): v for i, v in corr.residuals.items()},
    }
    _emit(doc, args.out)
    return EXIT_OK


def _parse_spectrum(text: str) -> list[float]:
    try:
        values = [float(x) for x in text.split(",") if x.strip()]
    except ValueError as exc:
        raise UsageError(f"bad --spectrum {text!r}") from exc
    if not values or any(not np.isfinite(v) or v <= 0 for v in values):
        raise UsageError("--spectrum needs positive numbers")
    return sorted(values)


def _workers() -> int:
    env = os.environ.get("THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError as exc:
            raise UsageError(f"THREADS must be an integer, got {env!r}") from exc
    return os.cpu_count() or 1


def cmd_scan(args) -> int:
    spectrum = _parse_spectrum(args.spectrum)
    if args.points < 3:
        raise UsageError("--points must be at least 3")
    if not (0 < args.t_min < args.t_max):
        raise UsageError("need 0 < --t-min < --t-max")
    ts = np.logspace(np.log10(args.t_min), np.log10(args.t_max), args.points)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        study = scaling_study(
            spectrum,
            args.seed,
            ts,
            args.conditioning,
            args.drop_below,
            cluster_tol=args.cluster_tol,
            workers=_workers(),
        )
    for w in caught:
        print(f"warning: {w.message}", file=sys.stderr)

    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["t", *METRICS])
    for row in study.rows():
        writer.writerow([f"{x:.17g}" for x in row])
    if args.csv:
        with open(args.csv, "w", encoding="utf-8", newline="") as fh:
            fh.write(buf.getvalue())
    summary = study.summary()
    summary["config"].update({"t_min": args.t_min, "t_max": args.t_max, "points": args.points})
    if args.json:
        _emit(summary, args.json)
    if not args.csv and not args.json:
        sys.stdout.write(buf.getvalue())
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="sympert", description="Williamson normal form and block perturbation checks")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("williamson", help="symplectic diagonalization of a positive definite matrix")
    p.add_argument("--input", required=True)
    p.add_argument("--cluster-tol", type=float, default=1e-8)
    p.add_argument("--out", default="-")
    p.set_defaults(func=cmd_williamson)

    p = sub.add_parser("check", help="test a matrix for (ortho)symplecticity")
    p.add_argument("--input", required=True)
    p.add_argument("--kind", choices=("symplectic", "orthosymplectic"), default="symplectic")
    p.add_argument("--tol", type=float, default=None, help="default 1e-8 * dimension")
    p.add_argument("--out", default="-")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("perturb", help="block residuals between diagonalizers of A and A+H")
    p.add_argument("--a", required=True)
    p.add_argument("--h", required=True)
    p.add_argument("--cluster-tol", type=float, default=1e-8)
    p.add_argument("--out", default="-")
    p.set_defaults(func=cmd_perturb)

    p = sub.add_parser("scan", help="residual scaling over a log-spaced sweep of t")
    p.add_argument("--spectrum", required=True, help='comma-separated, e.g. "1,1,2"')
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--t-min", type=float, default=1e-6)
    p.add_argument("--t-max", type=float, default=1e-2)
    p.add_argument("--points", type=int, default=9)
    p.add_argument("--conditioning", type=float, default=4.0)
    p.add_argument("--drop-below", type=float, default=1e-13)
    p.add_argument("--cluster-tol", type=float, default=1e-8)
    p.add_argument("--csv")
    p.add_argument("--json")
    p.set_defaults(func=cmd_scan)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except NumericError as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except InsufficientDataError as exc:
        print(f"insufficient data: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
