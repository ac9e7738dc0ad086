"""Fourier transforms of max-norm radial functions f(x) = f0(max(|x1|, |x2|)).

The two-dimensional transform reduces to the sine transform of the profile,

    fhat(y1, y2) = 2 [(1/y1 + 1/y2) f0hat(y1 + y2) - (1/y1 - 1/y2) f0hat(y2 - y1)]
                 = 2 (g(y1 + y2) - g(y2 - y1)) / (y1 y2),      g(t) = t f0hat(t),

with the axis extension fhat(0, y) = 4 g'(y) / y = 4 int f1(u) cos(uy) du and
fhat(0, 0) = 8 int t f0(t) dt.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import NamedTuple, Sequence

import numpy as np

from .profile import Profile, ProfileError, SampledCurve, Tabulated, build_f1, moment
from .quadrature import (
    DEFAULT_SPEC,
    QuadratureSpec,
    filon_transform,
    gauss_legendre,
    graded_edges,
    integrate,
)

__all__ = [
    "PlanePoint",
    "GFunction",
    "GDerivative",
    "OracleResult",
    "Lemma3Report",
    "AXIS_THRESHOLD",
    "companion",
    "sine_transform",
    "cosine_transform",
    "sine_transform_many",
    "cosine_transform_many",
    "fhat_2d",
    "fhat_quadrant",
    "oracle_2d",
    "norm_oracle",
    "g_derivative",
    "lemma3_bound",
    "lemma5_asymptotic",
    "lemma5_quadrature",
]

AXIS_THRESHOLD = 1e-6


@dataclass(frozen=True)
class PlanePoint:
    y1: float
    y2: float

    def __post_init__(self):
        if not (math.isfinite(self.y1) and math.isfinite(self.y2)):
            raise ValueError("frequency coordinates must be finite")


def _point(y) -> PlanePoint:
    return y if isinstance(y, PlanePoint) else PlanePoint(float(y[0]), float(y[1]))


@lru_cache(maxsize=256)
def companion(p: Profile) -> Profile:
    """Cached f1 = build_f1(p)."""
    return build_f1(p)


# ---------------------------------------------------------------------------
# one-dimensional transforms


def _upper(p: Profile) -> float:
    return p.support_radius if math.isfinite(p.support_radius) else math.inf


def _trig(p: Profile, t: float, kind: str, spec: QuadratureSpec) -> float:
    if t < 0:
        raise ValueError("transform variable must be >= 0")
    r = integrate(p, 0.0, _upper(p), osc_freq=t, kind=kind, spec=spec,
                  breakpoints=p.breakpoints)
    return r.value


def sine_transform(p: Profile, t: float, spec: QuadratureSpec = DEFAULT_SPEC) -> float:
    """f0hat(t) = int_0^inf f0(u) sin(ut) du."""
    if t == 0:
        return 0.0
    return _trig(p, t, "sin", spec)


def cosine_transform(p: Profile, x: float, spec: QuadratureSpec = DEFAULT_SPEC) -> float:
    """int_0^inf q(u) cos(ux) du."""
    return _trig(p, x, "cos", spec)


def panel_edges(p: Profile, width: float | None = None) -> np.ndarray:
    """Panels resolving the profile (not the oscillation) for Filon transforms."""
    if isinstance(p, Tabulated):
        return np.asarray(p.curve.grid, dtype=float)
    end = p.integration_end(1e-17)
    if width is None:
        width = min(0.05 * end, 0.5 * p.characteristic_length())
    sing = [0.0] + [s for s in p.singular_points if s <= end]
    return graded_edges(0.0, end, width, singular=sing)


def sine_transform_many(p: Profile, ts) -> np.ndarray:
    """f0hat at many points at once (Legendre-Filon panels)."""
    ts = np.asarray(ts, dtype=float)
    return filon_transform(p, panel_edges(p), ts.ravel(), kind="sin").reshape(ts.shape)


def cosine_transform_many(p: Profile, xs) -> np.ndarray:
    xs = np.asarray(xs, dtype=float)
    return filon_transform(p, panel_edges(p), xs.ravel(), kind="cos").reshape(xs.shape)


# ---------------------------------------------------------------------------
# two-dimensional transform


def _axis_value(p: Profile, y: float, spec: QuadratureSpec) -> float:
    if y < AXIS_THRESHOLD:
        return 8.0 * moment(p, 1.0, spec=spec)
    return 4.0 * cosine_transform(companion(p), y, spec)


def fhat_2d(p: Profile, y, method: str = "via_f0hat",
            spec: QuadratureSpec = DEFAULT_SPEC) -> float:
    """Two-dimensional Fourier transform of f0(max(|x1|, |x2|)) at ``y``.

    ``method`` is ``via_f0hat`` (reduction to the sine transform) or
    ``via_derivative`` (the product-of-sines integral of f0').  Within
    ``AXIS_THRESHOLD`` of an axis both use the axis extension.
    """
    y = _point(y)
    a, b = sorted((abs(y.y1), abs(y.y2)))
    if a < AXIS_THRESHOLD:
        return _axis_value(p, b, spec)
    if method == "via_f0hat":
        s_sum = sine_transform(p, a + b, spec)
        s_dif = sine_transform(p, b - a, spec)
        return 2.0 * ((1 / a + 1 / b) * s_sum - (1 / a - 1 / b) * s_dif)
    if method == "via_derivative":
        if p.derivative_order_available < 1:
            raise ProfileError("via_derivative needs a first derivative")
        d1 = p.d1
        c_sum = integrate(d1, 0.0, _upper(p), osc_freq=a + b, kind="cos", spec=spec,
                          breakpoints=p.breakpoints).value
        c_dif = integrate(d1, 0.0, _upper(p), osc_freq=b - a, kind="cos", spec=spec,
                          breakpoints=p.breakpoints).value
        # -(4/(ab)) int f0' sin(ta) sin(tb) = (2/(ab)) int f0' [cos((a+b)t) - cos((b-a)t)]
        return 2.0 * (c_sum - c_dif) / (a * b)
    raise ValueError(f"unknown method {method!r}")


@dataclass(frozen=True, eq=False)
class GFunction:
    """g(t) = t f0hat(t) tabulated on a uniform grid, with f1's cosine transform.

    Both curves are interpolated by cubic splines; they serve dense scans of
    the two-dimensional transform.
    """
    profile: Profile
    curve: SampledCurve
    c1: SampledCurve
    _splines: tuple = field(default=(), repr=False)

    @classmethod
    def build(cls, p: Profile, s_max: float, step: float = 0.01) -> "GFunction":
        from scipy.interpolate import CubicSpline

        n = max(4, int(math.ceil(s_max / step)))
        s = np.linspace(0.0, n * step, n + 1)
        g = s * sine_transform_many(p, s)
        c1 = cosine_transform_many(companion(p), s)
        obj = cls(p, SampledCurve(s, g), SampledCurve(s, c1))
        object.__setattr__(obj, "_splines", (CubicSpline(s, g), CubicSpline(s, c1)))
        return obj

    @property
    def s_max(self) -> float:
        return float(self.curve.grid[-1])

    def __call__(self, s):
        s = np.abs(np.asarray(s, dtype=float))
        if np.any(s > self.s_max * (1 + 1e-12)):
            raise ValueError("g requested beyond the tabulated range")
        return self._splines[0](s)

    def g_prime(self, s):
        """g'(s) = s * int f1(u) cos(us) du."""
        s = np.asarray(s, dtype=float)
        return s * self._splines[1](np.abs(s))

    def fhat(self, y1, y2):
        """Vectorized transform from the interpolated tables."""
        a = np.abs(np.asarray(y1, dtype=float))
        b = np.abs(np.asarray(y2, dtype=float))
        lo, hi = np.minimum(a, b), np.maximum(a, b)
        axis = lo < AXIS_THRESHOLD
        safe_lo = np.where(axis, 1.0, lo)
        off = 2.0 * (self(lo + hi) - self(hi - lo)) / (safe_lo * np.where(hi > 0, hi, 1.0))
        on = 4.0 * self._splines[1](hi)
        return np.where(axis, on, off)


def fhat_quadrant(p: Profile, h: float, n: int) -> tuple[np.ndarray, np.ndarray]:
    """fhat on the grid {0, h, ..., nh}^2 without interpolation.

    ``g`` is computed exactly at the multiples of ``h`` needed by the
    reduction (sums and differences of grid points lie on the same grid).
    Returns ``(y, F)`` with ``F[i, j] = fhat(y[i], y[j])``.
    """
    s = h * np.arange(2 * n + 1)
    g = s * sine_transform_many(p, s)
    y = s[: n + 1]
    c1 = cosine_transform_many(companion(p), y)
    i = np.arange(n + 1)
    lo = np.minimum.outer(i, i)
    hi = np.maximum.outer(i, i)
    with np.errstate(divide="ignore", invalid="ignore"):
        F = 2.0 * (g[lo + hi] - g[hi - lo]) / (y[lo] * y[hi])
    F[lo == 0] = 4.0 * c1[hi[lo == 0]]
    return y, F


class OracleResult(NamedTuple):
    value: float
    tail_bound: float
    box_half_width: float


def _default_box(p: Profile) -> float:
    if math.isfinite(p.support_radius):
        return p.support_radius
    return 40.0 * p.characteristic_length()


def _tail_norm(p: Profile, w: float, spec: QuadratureSpec) -> float:
    """8 int_W^inf t |f0(t)| dt, a bound on the mass of f outside [-W, W]^2."""
    if w >= p.support_radius:
        return 0.0
    r = integrate(lambda t: t * np.abs(p(t)), w, math.inf, spec=spec)
    return 8.0 * r.value


def _iterated_box(p: Profile, a: float, b: float, w: float, power: float | None,
                  order: int = 12) -> float:
    """4 int_0^W int_0^W F(max(x1, x2)) cos(a x1) cos(b x2) dx2 dx1.

    F = f0, or |f0|^power when ``power`` is given.  The inner integral is split
    on the diagonal: for x2 < x1 the integrand is F(x1) cos(b x2); for
    x2 > x1 it is F(x2) cos(b x2), accumulated panel by panel.
    """
    if power is None:
        F = p
    else:
        def F(t):
            return np.abs(p(t)) ** power
    width = min(w / 16.0, 1.0 / (a + b + 1.0))
    sing = [0.0] + [x for x in p.singular_points if 0 < x <= w]
    edges = graded_edges(0.0, w, width, singular=sing)
    x, wt = gauss_legendre(order)
    lo, hi = edges[:-1], edges[1:]
    half = 0.5 * (hi - lo)
    nodes = 0.5 * (lo + hi)[:, None] + half[:, None] * x[None, :]
    weights = half[:, None] * wt[None, :]

    # panel integrals of F(u) cos(bu) and their tail sums
    panel = np.sum(F(nodes) * np.cos(b * nodes) * weights, axis=1)
    tail_after = np.concatenate([np.cumsum(panel[::-1])[::-1][1:], [0.0]])

    x1 = nodes.ravel()
    w1 = weights.ravel()
    end = np.repeat(hi, order)
    # int_{x1}^{panel end} F(u) cos(bu) du
    ph = 0.5 * (end - x1)
    pu = 0.5 * (end + x1)[:, None] + ph[:, None] * x[None, :]
    partial = np.sum(F(pu) * np.cos(b * pu) * wt[None, :], axis=1) * ph
    upper = partial + np.repeat(tail_after, order)
    lower = F(x1) * (np.sin(b * x1) / b if b > 0 else x1)
    return 4.0 * float(np.sum(w1 * np.cos(a * x1) * (lower + upper)))


def oracle_2d(p: Profile, y, box_half_width: float | None = None,
              spec: QuadratureSpec = DEFAULT_SPEC) -> OracleResult:
    """Brute-force fhat(y) by iterated panel quadrature over [0, W]^2.

    The tail bound is the mass of |f| outside the box; it is zero when the
    box covers the support.
    """
    y = _point(y)
    w = _default_box(p) if box_half_width is None else float(box_half_width)
    if not w > 0:
        raise ValueError("box half width must be positive")
    value = _iterated_box(p, abs(y.y1), abs(y.y2), w, None)
    return OracleResult(value, _tail_norm(p, w, spec), w)


def norm_oracle(p: Profile, power: float = 1.0, box_half_width: float | None = None,
                spec: QuadratureSpec = DEFAULT_SPEC) -> OracleResult:
    """Brute-force int_{R^2} |f|^power by iterated quadrature over the box."""
    w = _default_box(p) if box_half_width is None else float(box_half_width)
    value = _iterated_box(p, 0.0, 0.0, w, power)
    tail = 0.0
    if w < p.support_radius:
        r = integrate(lambda t: t * np.abs(p(t)) ** power, w, math.inf, spec=spec)
        tail = 8.0 * r.value
    return OracleResult(value, tail, w)


# ---------------------------------------------------------------------------
# g' by two independent paths


class GDerivative(NamedTuple):
    path_a: float
    path_b: float
    discrepancy: float
    consistent: bool


def g_derivative(p: Profile, t: float, spec: QuadratureSpec = DEFAULT_SPEC,
                 flag_above: float = 1e-5) -> GDerivative:
    """g'(t) as (a) -int u f0'(u) sin(ut) du and (b) t int f1(u) cos(ut) du."""
    if t < 0:
        raise ValueError("t must be >= 0")
    if t == 0:
        return GDerivative(0.0, 0.0, 0.0, True)
    if p.derivative_order_available < 1:
        raise ProfileError("path (a) needs a first derivative")
    a = -integrate(lambda u: u * p.d1(u), 0.0, _upper(p), osc_freq=t, kind="sin",
                   spec=spec, breakpoints=p.breakpoints).value
    b = t * cosine_transform(companion(p), t, spec)
    d = abs(a - b)
    return GDerivative(a, b, d, d <= flag_above)


# ---------------------------------------------------------------------------
# L1 bound through the variation of g


class Lemma3Report(NamedTuple):
    variation: float
    lhs_estimate: float
    ratio: float
    t_ladder: tuple
    variation_ladder: tuple
    log_growth: float
    log_growth_r2: float


def _fit_log(ts, vs) -> tuple[float, float]:
    x = np.log(np.asarray(ts))
    v = np.asarray(vs)
    A = np.vstack([np.ones_like(x), x]).T
    coef, *_ = np.linalg.lstsq(A, v, rcond=None)
    pred = A @ coef
    ss = float(np.sum((v - v.mean()) ** 2))
    r2 = 1.0 - float(np.sum((v - pred) ** 2)) / ss if ss > 0 else 1.0
    return float(coef[1]), r2


def lemma3_bound(p: Profile, t_max: float, step: float = 0.05,
                 levels: int = 6) -> Lemma3Report:
    """Variation int_0^T |g'| against int_{[-T, T]^2} |fhat|, T = t_max.

    ``log_growth`` is the slope of the variation against log T over the
    ladder T = t_max / 2^k; a divergent variation grows like c log T.
    """
    if not t_max > 0:
        raise ValueError("t_max must be positive")
    n = max(8, int(math.ceil(t_max / step)))
    h = t_max / n
    y, F = fhat_quadrant(p, h, n)
    absF = np.abs(F)
    # trapezoid over the quadrant, times 4 for the full box
    wt = np.full(n + 1, h)
    wt[0] = wt[-1] = h / 2
    lhs = 4.0 * float(wt @ absF @ wt)

    # |g'| = |y C1(y)| on a fine grid, trapezoid; cumulative for the ladder
    fine = np.linspace(0.0, t_max, 8 * n + 1)
    gp = np.abs(fine * cosine_transform_many(companion(p), fine))
    cum = np.concatenate([[0.0], np.cumsum(0.5 * (gp[1:] + gp[:-1]) * np.diff(fine))])
    variation = float(cum[-1])
    ts = [t_max / 2 ** k for k in range(levels)][::-1]
    vs = [float(np.interp(t, fine, cum)) for t in ts]
    c, r2 = _fit_log(ts, vs)
    ratio = lhs / variation if variation > 0 else (0.0 if lhs == 0 else math.inf)
    return Lemma3Report(variation, lhs, ratio, tuple(ts), tuple(vs), c, r2)


# ---------------------------------------------------------------------------
# int_0^1 (1-t)^alpha e^{itx} dt


def _lemma5_base(beta: float, x: float, n_terms: int) -> complex:
    from scipy.special import gamma

    out = gamma(beta + 1) / x ** (1 + beta) * complex(
        math.cos(x - math.pi * (beta + 1) / 2), math.sin(x - math.pi * (beta + 1) / 2))
    if n_terms >= 2:
        out += 1j / x
    if n_terms >= 3:
        out += beta / x ** 2
    return out


def lemma5_asymptotic(alpha: float, x: float, n_terms: int = 3) -> complex:
    """Large-x expansion of int_0^1 (1-t)^alpha e^{itx} dt.

    For alpha in (-1, 0] the expansion is
    Gamma(alpha+1) x^{-1-alpha} e^{i(x - pi(alpha+1)/2)} + i/x + alpha/x^2;
    larger exponents are reduced by I(a) = i/x - (a i/x) I(a-1).
    """
    if not alpha > -1:
        raise ValueError("alpha must exceed -1")
    if not x > 0:
        raise ValueError("x must be positive")
    if n_terms not in (1, 2, 3):
        raise ValueError("n_terms must be 1, 2 or 3")
    exps = [alpha]
    while exps[-1] > 0:
        exps.append(exps[-1] - 1)
    value = _lemma5_base(exps[-1], x, n_terms)
    for a in reversed(exps[:-1]):
        value = 1j / x - (a * 1j / x) * value
    return value


def lemma5_quadrature(alpha: float, x: float,
                      spec: QuadratureSpec = QuadratureSpec(abs_tol=1e-13, rel_tol=1e-12)) -> complex:
    """Quadrature oracle for int_0^1 (1-t)^alpha e^{itx} dt.

    The substitution v = (1-t)^(alpha+1) removes the endpoint singularity:
    the integral equals (1/(alpha+1)) int_0^1 exp(ix(1 - v^(1/(alpha+1)))) dv.
    """
    if not alpha > -1:
        raise ValueError("alpha must exceed -1")
    k = 1.0 / (alpha + 1.0)

    def h(v):
        return np.exp(1j * x * (1.0 - np.power(v, k)))

    # split where the phase has advanced by about pi
    n = max(1, int(math.ceil(x / math.pi)))
    brk = [(1 - j / n) ** (alpha + 1) for j in range(1, n)]
    r = integrate(h, 0.0, 1.0, spec=spec, breakpoints=brk)
    return complex(r.value) * k
