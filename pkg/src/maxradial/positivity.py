"""Positive definiteness of f0(max(|x1|, |x2|)).

The two-dimensional transform is nonnegative exactly when g(t) = t f0hat(t) is
nondecreasing, i.e. when the cosine transform of the companion profile
f1(t) = t f0(t) + int_t^inf f0 is nonnegative.  Both the one-dimensional route
and a direct scan of fhat are provided so that they can be compared.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from typing import NamedTuple

import numpy as np

from .profile import Profile, moment
from .quadrature import DEFAULT_SPEC, QuadratureSpec, integrate
from .transform import companion, cosine_transform, cosine_transform_many, fhat_quadrant

__all__ = [
    "STRICTLY_POSITIVE",
    "NONNEGATIVE",
    "INDEFINITE",
    "INCONCLUSIVE",
    "ScanSpec",
    "DirectScanSpec",
    "PDVerdict",
    "GMonotonicity",
    "cos_transform_f1",
    "default_scan_end",
    "check_pd_via_f1",
    "check_pd_direct",
    "monotonicity_of_g",
]

STRICTLY_POSITIVE = "strictly_positive"
NONNEGATIVE = "nonnegative"
INDEFINITE = "indefinite"
INCONCLUSIVE = "inconclusive"
_MAX_REFINED = 16


@dataclass(frozen=True)
class ScanSpec:
    """One-dimensional scan of the cosine transform of f1 on [0, x_max]."""
    x_max: float | None = None
    points: int = 4096
    refine: int = 10
    rel_tol: float = 1e-9

    def __post_init__(self):
        if self.points < 8 or self.refine < 1 or self.rel_tol < 0:
            raise ValueError("invalid scan specification")
        if self.x_max is not None and not self.x_max > 0:
            raise ValueError("x_max must be positive")


@dataclass(frozen=True)
class DirectScanSpec:
    """Scan of fhat on {0, h, ..., n h}^2 restricted to 0 <= y1 <= y2."""
    y_max: float | None = None
    n: int = 200
    rel_tol: float = 1e-9

    def __post_init__(self):
        if self.n < 4 or self.rel_tol < 0:
            raise ValueError("invalid scan specification")
        if self.y_max is not None and not self.y_max > 0:
            raise ValueError("y_max must be positive")


@dataclass(frozen=True)
class PDVerdict:
    verdict: str
    witness: tuple | None
    min_margin: float
    tolerance: float
    grid_spec: dict
    method: str
    details: dict

    def to_json(self) -> dict:
        out = asdict(self)
        out["witness"] = None if self.witness is None else list(self.witness)
        return out


class GMonotonicity(NamedTuple):
    min_g_prime: float
    argmin: float
    sign_changes: int
    nondecreasing: bool
    direct_verdict: str
    consistent: bool

    def to_json(self) -> dict:
        return self._asdict()


def cos_transform_f1(q: Profile, x: float, spec: QuadratureSpec = DEFAULT_SPEC) -> float:
    """int_0^inf q(u) cos(ux) du for a companion profile ``q``."""
    return cosine_transform(q, x, spec)


def default_scan_end(p: Profile, periods: float = 50.0) -> float:
    """50 periods of the support radius, or 50 reciprocal decay lengths."""
    if math.isfinite(p.support_radius):
        return periods * 2 * math.pi / p.support_radius
    return periods / p.characteristic_length()


def _classify(min_margin: float, tol: float, strict_ok: bool, resolved_zero: bool) -> str:
    if min_margin < -tol:
        return INDEFINITE
    if min_margin > tol:
        return STRICTLY_POSITIVE if strict_ok else NONNEGATIVE
    return NONNEGATIVE if resolved_zero else INCONCLUSIVE


def _variation(fn, edges: np.ndarray) -> float:
    v = np.asarray(fn(edges), dtype=float)
    if not np.all(np.isfinite(v)):
        return math.inf
    return float(np.sum(np.abs(np.diff(v))))


def _tail_bound(q: Profile, x: float) -> tuple[float, str]:
    """Bound on |int q cos(ux)| for u >= x by integrating by parts.

    Twice when the variation of q' is finite (q'(0) = 0), else once.
    """
    end = q.integration_end(1e-17)
    sing = sorted({0.0, end, *[s for s in q.singular_points if s < end]})
    coarse = _graded_grid(sing, 2000)
    fine = _graded_grid(sing, 8000)
    v2c, v2f = _variation(q.d1, coarse), _variation(q.d1, fine)
    if math.isfinite(v2f) and abs(v2f - v2c) <= 1e-2 * max(v2f, 1e-300):
        return v2f / x ** 2, "second_order"
    return _variation(q, fine) / x, "first_order"


def _graded_grid(nodes, n: int) -> np.ndarray:
    # clustered at both ends of every interval between nodes
    u = 0.5 - 0.5 * np.cos(np.linspace(0.0, math.pi, n + 1))
    pieces = [a + (b - a) * u[:-1] for a, b in zip(nodes[:-1], nodes[1:])]
    pieces.append(np.array([nodes[-1]]))
    return np.concatenate(pieces)


def _local_minima(v: np.ndarray) -> np.ndarray:
    inner = np.flatnonzero((v[1:-1] <= v[:-2]) & (v[1:-1] <= v[2:])) + 1
    return np.concatenate([[0] if v[0] <= v[1] else [], inner,
                           [len(v) - 1] if v[-1] <= v[-2] else []]).astype(int)


def _bisect(fn, lo: float, hi: float, iters: int = 60) -> tuple[float, float]:
    """Shrink [lo, hi] with fn(lo) >= 0 > fn(hi); returns the bracket."""
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        if mid in (lo, hi):
            break
        if fn(mid) >= 0:
            lo = mid
        else:
            hi = mid
    return lo, hi


def check_pd_via_f1(p: Profile, scan: ScanSpec = ScanSpec(),
                    spec: QuadratureSpec = DEFAULT_SPEC) -> PDVerdict:
    """Decide positive definiteness through the cosine transform of f1.

    The witness of an indefinite verdict is the first scanned point past the
    first sign change where the transform is below ``-tolerance``; its left
    neighbour is located by bisection.
    """
    q = companion(p)
    x_max = scan.x_max if scan.x_max is not None else default_scan_end(p)
    xs = np.linspace(0.0, x_max, scan.points)
    vals = cosine_transform_many(q, xs)
    scale = abs(float(vals[0]))
    tol = scan.rel_tol * scale

    # refine around near-zero local minima
    step = xs[1] - xs[0]
    minima = _local_minima(vals)
    minima = minima[vals[minima] <= max(1e-3 * scale, tol)]
    near = sorted(minima[np.argsort(vals[minima], kind="stable")[:_MAX_REFINED]].tolist())
    extra_x, extra_v = [], []
    if near:
        fine = np.concatenate([np.linspace(max(xs[i] - step, 0.0), min(xs[i] + step, x_max),
                                           2 * scan.refine + 1) for i in near])
        extra_x.append(fine)
        extra_v.append(cosine_transform_many(q, fine))
    all_x = np.concatenate([xs, *extra_x])
    all_v = np.concatenate([vals, *extra_v])
    order = np.argsort(all_x, kind="stable")
    all_x, all_v = all_x[order], all_v[order]
    k = int(np.argmin(all_v))
    min_margin = float(all_v[k])

    moment_left = integrate(lambda t: t * np.asarray(q.d1(t), dtype=float), 0.0,
                            q.integration_end(1e-17), spec=spec,
                            breakpoints=q.breakpoints).value
    int_f1 = float(vals[0])
    tail, tail_kind = _tail_bound(q, x_max)
    pv = _pv_proxy(q, spec)

    witness = None
    first_root = None
    if min_margin < -tol:
        i = int(np.flatnonzero(all_v < -tol)[0])
        # first root of the transform in the first bracket with a sign change
        sign = np.flatnonzero((all_v[:-1] >= 0) & (all_v[1:] < 0))
        if sign.size:
            s = int(sign[0])
            fn = lambda x: cos_transform_f1(q, x, spec)
            r_lo, r_hi = _bisect(fn, all_x[s], all_x[s + 1])
            first_root = 0.5 * (r_lo + r_hi)
            _, w_hi = _bisect(lambda x: fn(x) + tol, r_lo, all_x[i])
            witness = (float(w_hi), float(fn(w_hi)))
        else:
            witness = (float(all_x[i]), float(all_v[i]))

    verdict = _classify(min_margin, tol, strict_ok=moment_left < 0,
                        resolved_zero=scale == 0.0 and tail == 0.0)
    grid = {"x_min": 0.0, "x_max": float(x_max), "points": scan.points,
            "refine": scan.refine, "refined_minima": len(near)}
    details = {
        "int_t_f1_prime": float(moment_left),
        "minus_int_f1": -int_f1,
        "tail_bound": float(tail),
        "tail_bound_kind": tail_kind,
        "first_root": first_root,
        "pv_proxy": pv,
        "hypotheses": {"first_abs_moment": moment(p, 1.0, absolute=True, spec=spec),
                       "t_f0_at_end": _t_f0_at_end(p)},
    }
    return PDVerdict(verdict, witness, min_margin, float(tol), grid, "f1", details)


def _t_f0_at_end(p: Profile) -> float:
    end = p.integration_end(1e-16)
    if math.isfinite(p.support_radius):
        return 0.0
    return float(end * abs(p(end)))


def _pv_proxy(q: Profile, spec: QuadratureSpec) -> dict:
    """int_eps^1 q'(t)/t dt on eps = 2^-4, ..., 2^-20."""
    top = min(1.0, q.integration_end(1e-17))
    eps = [2.0 ** -k for k in range(4, 21, 4)]
    vals = [integrate(lambda t: np.asarray(q.d1(t), dtype=float) / t, e, top, spec=spec,
                      breakpoints=q.breakpoints).value for e in eps]
    return {"eps": eps, "values": vals, "last_increment": abs(vals[-1] - vals[-2])}


def default_direct_end(p: Profile) -> float:
    if math.isfinite(p.support_radius):
        return 10 * 2 * math.pi / p.support_radius
    return 20.0 / p.characteristic_length()


def check_pd_direct(p: Profile, scan: DirectScanSpec = DirectScanSpec()) -> PDVerdict:
    """Scan fhat itself on a square grid of the quadrant 0 <= y1 <= y2.

    The witness of an indefinite verdict is the most negative grid sample.
    """
    y_max = scan.y_max if scan.y_max is not None else default_direct_end(p)
    y, F = fhat_quadrant(p, y_max / scan.n, scan.n)
    upper = np.triu(np.ones_like(F, dtype=bool))
    vals = F[upper]
    scale = abs(float(F[0, 0]))
    tol = scan.rel_tol * scale
    flat = int(np.argmin(np.where(upper, F, np.inf)))
    i, j = np.unravel_index(flat, F.shape)
    min_margin = float(F[i, j])
    witness = (float(y[i]), float(y[j]), min_margin) if min_margin < -tol else None
    verdict = _classify(min_margin, tol, strict_ok=scale > 0,
                        resolved_zero=scale == 0.0 and float(np.max(np.abs(vals))) == 0.0)
    grid = {"y_max": float(y_max), "n": scan.n, "region": "0 <= y1 <= y2"}
    return PDVerdict(verdict, witness, min_margin, float(tol), grid, "direct", {})


def monotonicity_of_g(p: Profile, scan: ScanSpec = ScanSpec(),
                      direct: DirectScanSpec = DirectScanSpec()) -> GMonotonicity:
    """min g'(x) = min x C1(x) on the scan, compared with the direct verdict."""
    x_max = scan.x_max if scan.x_max is not None else default_scan_end(p)
    xs = np.linspace(0.0, x_max, scan.points)
    gp = xs * cosine_transform_many(companion(p), xs)
    tol = scan.rel_tol * abs(float(moment(p, 1.0)))
    k = int(np.argmin(gp[1:])) + 1
    signs = np.sign(np.where(np.abs(gp) <= tol, 0.0, gp))
    nz = signs[signs != 0]
    changes = int(np.count_nonzero(nz[1:] != nz[:-1]))
    nondecreasing = bool(gp[k] >= -tol)
    d = check_pd_direct(p, direct).verdict
    consistent = nondecreasing == (d in (STRICTLY_POSITIVE, NONNEGATIVE))
    return GMonotonicity(float(gp[k]), float(xs[k]), changes, nondecreasing, d, consistent)
