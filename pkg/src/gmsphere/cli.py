"""Command-line harness: ``gmsphere verify | scan | list``.

Every flag of ``verify`` and ``scan`` can also be set through an environment
variable with the prefix ``GMSPHERE_`` (GMSPHERE_SEED, GMSPHERE_SAMPLES,
GMSPHERE_OUT, GMSPHERE_FILTER with comma-separated globs, GMSPHERE_TIMING,
GMSPHERE_STEPS).  Flags win over the environment.

Exit codes: 0 all checks pass, 1 some check fails, 2 usage error.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import time
from contextlib import contextmanager

import numpy as np

from . import checks, riemann
from .sp2 import MetricParams

ENV_PREFIX = "GMSPHERE_"


class UsageError(Exception):
    pass


def _env(name: str, default=None):
    return os.environ.get(ENV_PREFIX + name, default)


def _u64(text: str) -> int:
    value = int(text, 0)
    if not 0 <= value < 2**64:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return value


def _positive(text: str) -> int:
    value = int(text)
    if value <= 0:
        raise argparse.ArgumentTypeError("must be positive")
    return value


def _tol(text: str) -> tuple[str, float]:
    name, sep, value = text.partition("=")
    if not sep:
        raise argparse.ArgumentTypeError("expected <check>=<float>")
    try:
        return name, float(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad tolerance {value!r}") from None


def _grid(args) -> list[tuple[float, float]] | None:
    mus, nus = args.mu or [], args.nu or []
    if len(mus) != len(nus):
        raise UsageError("--mu and --nu must be given the same number of times")
    for m, n in zip(mus, nus):
        if m <= 0 or n <= 0:
            raise UsageError("mu and nu must be positive")
    return list(zip(mus, nus)) or None


@contextmanager
def _output(path: str | None, newline: str | None = None):
    if path is None or path == "-":
        yield sys.stdout
        return
    try:
        handle = open(path, "w", newline=newline)
    except OSError as exc:
        raise UsageError(f"cannot write {path}: {exc.strerror}") from None
    with handle:
        yield handle


def _json_float(x: float):
    return float(x) if np.isfinite(x) else None


def verify(args) -> int:
    if args.list:
        return list_checks(args)
    patterns = None
    if not args.all:
        patterns = args.filter or ([p for p in _env("FILTER", "").split(",") if p] or None)
    try:
        selected = checks.select(patterns)
    except KeyError as exc:
        raise UsageError(f"no check matches {exc.args[0]!r}") from None
    overrides = dict(args.tol or [])
    unknown = sorted(set(overrides) - set(checks.REGISTRY))
    if unknown:
        raise UsageError(f"unknown check id in --tol: {', '.join(unknown)}")
    grid = _grid(args)

    failed = 0
    with _output(args.out) as out:
        for check in selected:
            start = time.perf_counter()
            try:
                res = checks.run(check, args.seed, args.samples, grid, overrides.get(check.id))
                worst, samples, detail, status = (res.outcome.worst, res.outcome.samples, res.outcome.detail,
                                                  "pass" if res.passed else "fail")
                tol = res.tolerance
            except (ValueError, ArithmeticError) as exc:
                worst, samples, detail, status = float("nan"), 0, f"error: {exc}", "fail"
                tol = overrides.get(check.id, check.tolerance)
            entry = {
                "check": check.id,
                "anchor": check.anchor,
                "status": status,
                "worst": _json_float(worst),
                "kind": check.kind,
                "tolerance": tol,
                "samples": samples,
                "detail": detail,
            }
            if args.timing:
                entry["wall_time"] = round(time.perf_counter() - start, 3)
            out.write(json.dumps(entry) + "\n")
            out.flush()
            failed += status == "fail"
            if not args.quiet:
                print(f"{status.upper():4s} {check.id} worst={worst:.3e}", file=sys.stderr)
    if not args.quiet:
        print(f"{len(selected) - failed}/{len(selected)} checks passed", file=sys.stderr)
    return 1 if failed else 0


def list_checks(args) -> int:
    for check in checks.REGISTRY.values():
        print(f"{check.id}\t{check.anchor}")
    return 0


# ---------------------------------------------------------------------------
# curvature scans


def _scan_points(metric_id: str, steps: int):
    if metric_id == "sigma2":
        return [np.array([s, 0.0]) for s in np.linspace(0.0, np.pi / 2, steps)]
    if metric_id == "sigma31":
        return [np.array([t, np.pi / 2, 0.0]) for t in np.linspace(0.05, np.pi - 0.05, steps)]
    if metric_id == "sigma32":
        return riemann.sigma32_grid(steps, n_psi=steps)
    if metric_id == "hemisphere":
        top = np.arccos(2 * riemann.SIGMA32_MARGIN)
        return [riemann.hemisphere_point(om, ps)[:2]
                for om in np.linspace(0.0, top, steps) for ps in np.linspace(0.3, np.pi - 0.3, steps)]
    # Berger metrics are homogeneous; sweep the chart coordinate that carries the degeneracy
    return [np.array([0.3, x2, 0.3]) for x2 in np.linspace(0.2, np.pi / 2 - 0.2, steps)]


def _scan_row(metric_id: str, M, P: MetricParams, x) -> tuple[float, float, float]:
    if metric_id == "sigma2" and x[0] == 0.0:
        # coordinate singularity at the pole: extrapolate in s
        k = riemann.sigma2_curvature_at_pole(P)
        return k, k, 2 * k
    r = riemann.curvature_report(M, x)
    return r.k_min, r.k_max, r.scalar


def scan(args) -> int:
    if args.metric not in riemann.METRIC_IDS:
        raise UsageError(f"unknown metric id {args.metric!r}; choose from {', '.join(riemann.METRIC_IDS)}")
    grid = _grid(args) or [(0.5, 0.5)]
    steps = args.steps
    if steps < 2:
        raise UsageError("--steps must be at least 2")
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    pairs = " ".join(f"({m:g},{n:g})" for m, n in grid)
    buf.write(f"# metric={args.metric} mu_nu={pairs} steps={steps}\n")
    dim = None
    for mu, nu in grid:
        P = MetricParams(mu, nu)
        M = riemann.metric_by_id(args.metric, P)
        for x in _scan_points(args.metric, steps):
            if dim is None:
                dim = len(x)
                writer.writerow(["mu", "nu", *[f"x{i + 1}" for i in range(dim)], "k_min", "k_max", "scalar"])
            lo, hi, sc = _scan_row(args.metric, M, P, x)
            writer.writerow([f"{mu:g}", f"{nu:g}", *[f"{c:.12g}" for c in x], f"{lo:.12g}", f"{hi:.12g}", f"{sc:.12g}"])
    with _output(args.out, newline="") as out:
        out.write(buf.getvalue())
    return 0


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="gmsphere", description="Numerical checks for the Gromoll-Meyer sphere.")
    sub = parser.add_subparsers(dest="command", required=True)

    def grid_flags(p):
        p.add_argument("--mu", type=float, action="append", help="mu of a metric (repeatable, paired with --nu)")
        p.add_argument("--nu", type=float, action="append", help="nu of a metric (repeatable)")
        p.add_argument("--out", default=_env("OUT"), help="output path (default stdout)")

    v = sub.add_parser("verify", help="run registered checks and write a JSON-lines report")
    which = v.add_mutually_exclusive_group()
    which.add_argument("--all", action="store_true", help="run every check")
    which.add_argument("--filter", action="append", help="glob over check ids (repeatable)")
    which.add_argument("--list", action="store_true", help="list check ids with anchors")
    v.add_argument("--seed", type=_u64, default=_u64(_env("SEED", "0")), help="unsigned 64-bit seed (default 0)")
    samples = _env("SAMPLES")
    v.add_argument("--samples", type=_positive, default=_positive(samples) if samples else None,
                   help="override every check's sample count")
    v.add_argument("--tol", type=_tol, action="append", metavar="CHECK=F", help="tolerance override")
    v.add_argument("--timing", action="store_true", default=_env("TIMING", "") not in ("", "0"),
                   help="record wall time (makes reports non-reproducible)")
    v.add_argument("--quiet", action="store_true", help="no progress lines on stderr")
    grid_flags(v)
    v.set_defaults(func=verify)

    s = sub.add_parser("scan", help="curvature of a metric over a grid, as CSV")
    s.add_argument("metric", help=f"one of {', '.join(riemann.METRIC_IDS)}")
    s.add_argument("--steps", type=int, default=int(_env("STEPS", "20")), help="grid points per axis (default 20)")
    grid_flags(s)
    s.set_defaults(func=scan)

    ls = sub.add_parser("list", help="list check ids with anchors")
    ls.set_defaults(func=list_checks)
    return parser


def main(argv=None) -> int:
    try:
        parser = build_parser()
    except (ValueError, argparse.ArgumentTypeError) as exc:
        print(f"gmsphere: bad environment setting: {exc}", file=sys.stderr)
        return 2
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"gmsphere: {exc}", file=sys.stderr)
        return 2
    except BrokenPipeError:
        # reader went away (e.g. piped into head); silence the flush at exit
        os.dup2(os.open(os.devnull, os.O_WRONLY), sys.stdout.fileno())
        return 1


if __name__ == "__main__":
    sys.exit(main())
