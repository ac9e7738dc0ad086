"""Command-line entry point.

Exit codes: 0 success, 1 failed selftest criteria, 2 domain errors (bad
profile or arguments out of range), 3 numeric non-convergence under
``--strict``, 64 usage errors.
"""
from __future__ import annotations

import argparse
import json
import math
import sys
from contextlib import nullcontext
from fractions import Fraction

import numpy as np

from . import __version__
from .profile import ProfileError, Profile, moment, profile_from_json
from .report import SCHEMA_VERSION, csv_text, dumps

EXIT_OK, EXIT_FAILED, EXIT_DOMAIN, EXIT_NUMERIC, EXIT_USAGE = 0, 1, 2, 3, 64


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(f"{self.prog}: error: {message}")


def _json_arg(text: str) -> dict:
    """Inline JSON or ``@path``."""
    try:
        if text.startswith("@"):
            with open(text[1:], encoding="utf-8") as fh:
                return json.load(fh)
        return json.loads(text)
    except (OSError, json.JSONDecodeError) as exc:
        raise ProfileError(f"cannot read JSON argument: {exc}") from exc


def parse_grid(spec: str) -> np.ndarray:
    """``lo:hi:n`` (n equally spaced points) or a comma-separated list."""
    try:
        if ":" in spec:
            lo, hi, n = spec.split(":")
            n = int(n)
            if n < 1:
                raise ValueError
            return np.linspace(float(lo), float(hi), n)
        return np.array([float(v) for v in spec.split(",")])
    except ValueError as exc:
        raise ProfileError(f"bad grid {spec!r}; expected lo:hi:n or a comma list") from exc


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--out", default="-", help="output path, '-' for stdout, or csv|json")
    p.add_argument("--format", choices=("json", "csv"), default=None)
    p.add_argument("--tol", type=float, default=None, help="absolute tolerance")
    p.add_argument("--threads", type=int, default=None, help="cap on BLAS threads")
    p.add_argument("--strict", action="store_true",
                   help="exit 3 when a result is flagged as not converged")


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="maxradial", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=f"maxradial {__version__}")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("transform", help="two-dimensional transform on a grid against the oracle")
    p.add_argument("--profile", required=True)
    p.add_argument("--grid", required=True, help="lo:hi:n or list; the grid is its square")
    p.add_argument("--method", choices=("via_f0hat", "via_derivative", "both"), default="both")
    p.add_argument("--no-oracle", action="store_true")
    _common(p)

    p = sub.add_parser("check-pd", help="positive definiteness verdict")
    p.add_argument("--profile", required=True)
    p.add_argument("--method", choices=("f1", "direct", "both"), default="both")
    p.add_argument("--points", type=int, default=4096)
    p.add_argument("--x-max", type=float, default=None)
    _common(p)

    p = sub.add_parser("check-wiener", help="membership criteria with their ladders")
    p.add_argument("--profile", required=True)
    p.add_argument("--criterion", choices=("t3", "t4", "r3", "astar"), required=True)
    p.add_argument("--t-max", type=float, default=64.0, help="astar: last t")
    p.add_argument("--radius", type=float, default=None, help="astar: scan radius (2 t-max)")
    _common(p)

    p = sub.add_parser("spline", help="spline construction and the h family")
    ssub = p.add_subparsers(dest="action", required=True, parser_class=_Parser)
    q = ssub.add_parser("construct")
    q.add_argument("--r", type=int, required=True)
    q.add_argument("--d", type=int, required=True)
    q.add_argument("--verify", action="store_true")
    _common(q)
    q = ssub.add_parser("compare")
    q.add_argument("--d", type=int, required=True)
    _common(q)
    q = ssub.add_parser("eval-h")
    q.add_argument("--mu", type=float, required=True)
    q.add_argument("--nu", type=float, required=True)
    q.add_argument("--grid", required=True)
    _common(q)

    p = sub.add_parser("dimwalk", help="descent to R^d or ascent back to R")
    p.add_argument("--f1", required=True, help="profile JSON (f1 for down, f_d for up)")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--direction", choices=("down", "up"), required=True)
    p.add_argument("--grid", required=True)
    p.add_argument("--ascent", choices=("auto", "exact", "numeric"), default="auto")
    _common(p)

    p = sub.add_parser("summability", help="multiplier kernels on the torus")
    p.add_argument("--generator", required=True)
    p.add_argument("--scale", type=float, required=True, help="n (riesz, sharp) or eps (profile)")
    p.add_argument("--measure", choices=("norm", "positivity", "periodization"), required=True)
    p.add_argument("--K", type=int, default=None)
    p.add_argument("--grid-density", type=int, default=None)
    _common(p)

    p = sub.add_parser("selftest", help="run the acceptance suite")
    _common(p)
    return ap


# ---------------------------------------------------------------------------
# commands; each returns (payload or text, exit code)


def _profile(text: str) -> Profile:
    return profile_from_json(_json_arg(text))


def cmd_transform(a):
    from .transform import fhat_2d, oracle_2d

    p = _profile(a.profile)
    axis = parse_grid(a.grid)
    tol = 1e-6 if a.tol is None else a.tol
    rows, worst = [], 0.0
    for y1 in axis:
        for y2 in axis:
            y = (float(y1), float(y2))
            f = fhat_2d(p, y, "via_derivative" if a.method == "via_derivative" else "via_f0hat")
            g = fhat_2d(p, y, "via_derivative") if a.method == "both" else math.nan
            o = oracle_2d(p, y).value if not a.no_oracle else math.nan
            diffs = [abs(f - v) for v in (g, o) if not math.isnan(v)]
            d = max(diffs) if diffs else math.nan
            worst = max(worst, d) if not math.isnan(d) else worst
            rows.append((y[0], y[1], f, g, o, d))
    code = EXIT_NUMERIC if a.strict and worst > tol else EXIT_OK
    if _fmt(a, "csv") == "csv":
        return csv_text(("y1", "y2", "fhat", "oracle", "abs_diff"),
                        [(r[0], r[1], r[2], r[4], r[5]) for r in rows]), code
    results = {"method": a.method, "tolerance": tol, "max_abs_diff": worst,
               "points": [{"y1": r[0], "y2": r[1], "fhat": r[2], "fhat_via_derivative": r[3],
                           "oracle": r[4], "abs_diff": r[5]} for r in rows]}
    return _envelope(a, p, results), code


def cmd_check_pd(a):
    from .positivity import INCONCLUSIVE, DirectScanSpec, ScanSpec, check_pd_direct, check_pd_via_f1

    p = _profile(a.profile)
    m1 = moment(p, 1.0) if a.tol is not None else 0.0
    out = {}
    if a.method in ("f1", "both"):
        rel = a.tol / (2 * m1) if a.tol is not None and m1 > 0 else 1e-9
        out["via_f1"] = check_pd_via_f1(p, ScanSpec(x_max=a.x_max, points=a.points, rel_tol=rel))
    if a.method in ("direct", "both"):
        rel = a.tol / (8 * m1) if a.tol is not None and m1 > 0 else 1e-9
        out["direct"] = check_pd_direct(p, DirectScanSpec(rel_tol=rel))
    verdicts = [v.verdict for v in out.values()]
    agree = len(set(verdicts)) == 1
    bad = INCONCLUSIVE in verdicts or not agree
    results = {"verdict": verdicts[0] if agree else "disagreement", **out}
    return _envelope(a, p, results), EXIT_NUMERIC if a.strict and bad else EXIT_OK


def cmd_check_wiener(a):
    from .membership import (INCONCLUSIVE, astar_tail_profile, remark3_radial_criterion,
                             theorem3_sufficient, theorem4_criterion)

    p = _profile(a.profile)
    if a.criterion == "t4":
        r = theorem4_criterion(p)
        bad = r.classification == INCONCLUSIVE
    elif a.criterion == "r3":
        r = remark3_radial_criterion(p)
        bad = r.classification == INCONCLUSIVE
    elif a.criterion == "t3":
        r = theorem3_sufficient(p)
        bad = any(x.classification == INCONCLUSIVE for x in r.reports)
    else:
        if not a.t_max > 1:
            raise ProfileError("--t-max must exceed 1")
        radius = 2 * a.t_max if a.radius is None else a.radius
        n = int(round((a.t_max - 0.5) / 0.05)) + 1
        r = astar_tail_profile(p, np.linspace(0.5, a.t_max, n), radius)
        bad = r.boundary_flag
    results = {"criterion": a.criterion, "report": r}
    return _envelope(a, p, results), EXIT_NUMERIC if a.strict and bad else EXIT_OK


def cmd_spline(a):
    from .splines import (HmuNuSpec, SplineSpec, compare_A2_variants, construct_A,
                          h_mu_nu_many, verify_A_properties)

    try:
        if a.action == "construct":
            spec = SplineSpec(a.r, a.d)
            A = construct_A(spec)
            results = {"r": a.r, "d": a.d, "exponent": _frac(A.m),
                       "coefficients": [_frac(c) for c in A.coeffs]}
            if a.verify:
                results["check"] = verify_A_properties(A, spec)
            return _envelope(a, None, results), EXIT_OK
        if a.action == "compare":
            return _envelope(a, None, compare_A2_variants(a.d)), EXIT_OK
        spec = HmuNuSpec(a.mu, a.nu)
    except ValueError as exc:
        raise ProfileError(str(exc)) from exc
    xs = parse_grid(a.grid)
    if np.any(xs < 0):
        raise ProfileError("h is evaluated for x >= 0")
    hs = h_mu_nu_many(spec, xs)
    if _fmt(a, "csv") == "csv":
        return csv_text(("x", "h"), zip(xs, hs)), EXIT_OK
    return _envelope(a, None, {"mu": a.mu, "nu": a.nu, "x": xs, "h": hs}), EXIT_OK


def cmd_dimwalk(a):
    from .dimwalk import ascend_estimate, ascend_odd, descend_many
    from .profile import Spline

    p = _profile(a.f1)
    ts = parse_grid(a.grid)
    if np.any(ts < 0):
        raise ProfileError("grid must be nonnegative")
    unstable = False
    if a.direction == "down":
        header, rows = ("t", "f_d"), list(zip(ts, descend_many(p, a.d, ts)))
    else:
        if np.any(ts <= 0):
            raise ProfileError("ascent needs u > 0")
        header, rows = ("u", "f1", "error"), []
        exact = a.ascent == "exact" or (a.ascent == "auto" and isinstance(p, Spline))
        for u in ts:
            if exact:
                rows.append((u, ascend_odd(p, a.d, float(u), "exact"), 0.0))
            else:
                rtol = 1e-6 if a.tol is None else a.tol
                est = ascend_estimate(p, a.d, float(u), rtol=rtol)
                unstable |= not est.stable
                rows.append((u, est.value, est.error))
    code = EXIT_NUMERIC if a.strict and unstable else EXIT_OK
    if _fmt(a, "csv") == "csv":
        return csv_text(header, rows), code
    cols = {h: [float(r[i]) for r in rows] for i, h in enumerate(header)}
    return _envelope(a, p, {"d": a.d, "direction": a.direction, **cols}), code


def cmd_summability(a):
    from .summability import (generator_from_json, kernel, kernel_l1_norm, midpoint_grid,
                              periodization_check, sample_multiplier)

    gen = generator_from_json(_json_arg(a.generator))
    if not a.scale > 0:
        raise ProfileError("--scale must be positive")
    by_eps = gen.kind == "profile"
    fld_args = {"eps": a.scale} if by_eps else {"n": a.scale}
    if a.measure == "periodization":
        if not by_eps:
            raise ProfileError("periodization needs a profile generator")
        tol = 1e-4 if a.tol is None else a.tol
        K = a.K if a.K is not None else sample_multiplier(gen, eps=a.scale).K
        r = periodization_check(gen.profile, a.scale, K, tol=tol)
        return _envelope(a, gen, {"measure": a.measure, "report": r}), \
            EXIT_NUMERIC if a.strict and r.flagged else EXIT_OK
    fld = sample_multiplier(gen, K=a.K, **fld_args)
    if a.measure == "norm":
        r = kernel_l1_norm(fld, a.grid_density or 512)
        results = {"measure": a.measure, "field": fld, "norm": r.value, "error": r.error,
                   "grid": r.grid}
        bad = fld.tail_flag or (a.tol is not None and r.error > a.tol)
    else:
        k = kernel(fld, midpoint_grid(a.grid_density or 256))
        i, j = np.unravel_index(int(np.argmin(k.values)), k.values.shape)
        tol = 1e-9 if a.tol is None else a.tol
        results = {"measure": a.measure, "field": fld, "min": float(k.values[i, j]),
                   "argmin": [float(k.x1[i]), float(k.x2[j])], "mean": float(np.mean(k.values)),
                   "imag_residue": k.imag_residue, "nonnegative": bool(k.values[i, j] >= -tol)}
        bad = fld.tail_flag
    return _envelope(a, gen, results), EXIT_NUMERIC if a.strict and bad else EXIT_OK


def cmd_selftest(a):
    from .acceptance import full_suite, suite_report, table

    results = full_suite()
    code = EXIT_OK if all(r.passed for r in results) else EXIT_FAILED
    if _fmt(a, "text") == "json":
        return _envelope(a, None, suite_report(results)), code
    return table(results) + "\n", code


COMMANDS = {"transform": cmd_transform, "check-pd": cmd_check_pd, "check-wiener": cmd_check_wiener,
            "spline": cmd_spline, "dimwalk": cmd_dimwalk, "summability": cmd_summability,
            "selftest": cmd_selftest}


# ---------------------------------------------------------------------------


def _frac(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}" if x.denominator != 1 else str(x.numerator)


def _fmt(a, default: str) -> str:
    if a.format:
        return a.format
    if a.out in ("csv", "json"):
        return a.out
    for ext in ("csv", "json"):
        if a.out.endswith("." + ext):
            return ext
    return default


def _envelope(a, echo, results) -> str:
    report = {"schema_version": SCHEMA_VERSION, "tool": "maxradial", "version": __version__,
              "command": a.argv, "input": None if echo is None else echo.to_json(),
              "results": results}
    return dumps(report)


def _write(text: str, out: str) -> None:
    if out in ("-", "csv", "json"):
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def run(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        a = build_parser().parse_args(argv)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:  # --help and --version
        return int(exc.code or 0)
    a.argv = argv
    limits = nullcontext()
    if a.threads is not None:
        if a.threads < 1:
            print("maxradial: --threads must be positive", file=sys.stderr)
            return EXIT_USAGE
        from threadpoolctl import threadpool_limits

        limits = threadpool_limits(limits=a.threads)
    try:
        with limits:
            text, code = COMMANDS[a.command](a)
    except (ProfileError, ValueError, ArithmeticError) as exc:
        print(f"maxradial: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    _write(text, a.out)
    return code


def main() -> None:
    sys.exit(run())
