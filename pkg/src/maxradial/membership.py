"""Wiener-algebra criteria for max-norm radial functions.

Convergence of an improper integral is judged from a ladder of partial
integrals.  With L = ln(1/eps) (or ln T for tails) the increments per unit L
give a density D(L); the classifier fits

    ln D = a - beta L + gamma ln L

over the last ladder points.  beta > 0.02 means power decay of the integrand
in eps (convergent), beta < -0.02 means growth (divergent).  In the borderline
band the partial integrals are fitted as I ~ L^p: p > 0.2 with R^2 > 0.99 is
divergent, |p| <= 0.05 is convergent, anything else is inconclusive.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .profile import Profile, ProfileError, SampledCurve, Tabulated, modulus_l1_ladder
from .quadrature import QuadratureSpec, integrate
from .transform import GFunction

__all__ = [
    "CONVERGENT",
    "DIVERGENT",
    "INCONCLUSIVE",
    "DEFAULT_EPSILONS",
    "ConvergenceReport",
    "Theorem3Report",
    "AStarReport",
    "classify_ladder",
    "epsilon_ladder",
    "theorem4_criterion",
    "theorem3_sufficient",
    "remark3_radial_criterion",
    "astar_tail_profile",
    "log_borderline_profile",
    "indicator_profile",
]

CONVERGENT = "convergent"
DIVERGENT = "divergent"
INCONCLUSIVE = "inconclusive"

DEFAULT_EPSILONS = tuple(2.0 ** -k for k in range(4, 21))
FIT_POINTS = 8
DECAY_THRESHOLD = 0.02
GROWTH_EXPONENT = 0.2
FLAT_EXPONENT = 0.05
GROWTH_R2 = 0.99
LADDER_SPEC = QuadratureSpec(abs_tol=1e-15, rel_tol=1e-10, max_subdivisions=4000)


@dataclass(frozen=True)
class ConvergenceReport:
    classification: str
    epsilon_ladder: tuple[tuple[float, float], ...]
    fitted_exponent: float
    value_if_convergent: float | None
    decay_rate: float
    r_squared: float
    rule: str

    def to_json(self) -> dict:
        return {
            "classification": self.classification,
            "epsilon_ladder": [list(e) for e in self.epsilon_ladder],
            "fitted_exponent": self.fitted_exponent,
            "value_if_convergent": self.value_if_convergent,
            "decay_rate": self.decay_rate,
            "r_squared": self.r_squared,
            "rule": self.rule,
        }


def _r2(y: np.ndarray, fit: np.ndarray) -> float:
    ss = float(np.sum((y - y.mean()) ** 2))
    return 1.0 if ss == 0 else 1.0 - float(np.sum((y - fit) ** 2)) / ss


def _power_fit(levels: np.ndarray, partial: np.ndarray) -> tuple[float, float]:
    """Slope and R^2 of ln I against ln L."""
    mask = partial > 0
    if mask.sum() < 3:
        return 0.0, 0.0
    x, y = np.log(levels[mask]), np.log(partial[mask])
    A = np.column_stack([np.ones_like(x), x])
    coef = np.linalg.lstsq(A, y, rcond=None)[0]
    return float(coef[1]), _r2(y, A @ coef)


def classify_ladder(levels: Sequence[float], partial: Sequence[float],
                    increments: Sequence[float] | None = None) -> tuple[str, float, float, float, str]:
    """Classify a ladder of partial integrals of a nonnegative integrand.

    ``levels`` are L = ln(1/eps) (increasing); ``increments`` are the integrals
    between consecutive levels (computed directly when available, otherwise
    differences of ``partial``).  Returns (classification, fitted_exponent,
    decay_rate, r_squared, rule).
    """
    L = np.asarray(levels, dtype=float)
    I = np.asarray(partial, dtype=float)
    inc = np.diff(I) if increments is None else np.asarray(increments, dtype=float)
    if L.size < 4 or inc.size != L.size - 1:
        raise ValueError("ladder needs at least four levels")
    p, r2 = _power_fit(L[-FIT_POINTS:], I[-FIT_POINTS:])
    tail = np.abs(inc[-(FIT_POINTS - 1):])
    scale = max(abs(I[-1]), np.max(np.abs(I)), 1e-300)
    if tail[-1] <= 1e-14 * scale:
        return CONVERGENT, p, math.inf, r2, "increments at rounding level"
    mid = 0.5 * (L[1:] + L[:-1])[-(FIT_POINTS - 1):]
    dens = tail / np.diff(L)[-(FIT_POINTS - 1):]
    pos = dens > 0
    beta = 0.0
    if pos.sum() >= 4:
        A = np.column_stack([np.ones(pos.sum()), -mid[pos], np.log(mid[pos])])
        beta = float(np.linalg.lstsq(A, np.log(dens[pos]), rcond=None)[0][1])
    if beta > DECAY_THRESHOLD:
        return CONVERGENT, p, beta, r2, "density decays"
    if beta < -DECAY_THRESHOLD:
        return DIVERGENT, p, beta, r2, "density grows"
    if p > GROWTH_EXPONENT and r2 > GROWTH_R2:
        return DIVERGENT, p, beta, r2, "power-law growth in L"
    if abs(p) <= FLAT_EXPONENT:
        return CONVERGENT, p, beta, r2, "flat in L"
    return INCONCLUSIVE, p, beta, r2, "undecided"


def epsilon_ladder(integrand: Callable[[np.ndarray], np.ndarray], top: float = 1.0,
                   epsilons: Sequence[float] = DEFAULT_EPSILONS,
                   breakpoints: Sequence[float] = (),
                   spec: QuadratureSpec = LADDER_SPEC) -> ConvergenceReport:
    """Ladder of int_eps^top integrand for decreasing eps, classified."""
    eps = np.asarray(epsilons, dtype=float)
    if np.any(np.diff(eps) >= 0) or eps[0] >= top or eps[-1] <= 0:
        raise ValueError("epsilons must decrease strictly inside (0, top)")
    edges = np.concatenate([[top], eps])
    pieces = []
    for hi, lo in zip(edges[:-1], edges[1:]):
        bps = [b for b in breakpoints if lo < b < hi]
        pieces.append(integrate(integrand, lo, hi, spec=spec, breakpoints=bps).value)
    partial = np.cumsum(pieces)
    levels = np.log(1.0 / eps)
    cls, p, beta, r2, rule = classify_ladder(levels, partial, np.asarray(pieces[1:]))
    ladder = tuple((float(e), float(v)) for e, v in zip(eps, partial))
    value = float(partial[-1]) if cls == CONVERGENT else None
    return ConvergenceReport(cls, ladder, p, value, beta, r2, rule)


def _require_unit_support(p: Profile) -> None:
    if p.support_radius != 1.0:
        raise ProfileError("criterion needs a profile supported on [0, 1]")


def _reflected_breaks(p: Profile) -> list[float]:
    return sorted({1.0 - b for b in p.breakpoints if 0.0 < b < 1.0})


def theorem4_criterion(p: Profile, epsilons: Sequence[float] = DEFAULT_EPSILONS) -> ConvergenceReport:
    """Ladder of int_eps^1 f0(1 - t) ln(2/t) / t dt."""
    _require_unit_support(p)
    h = lambda t: np.asarray(p(1.0 - t), dtype=float) * np.log(2.0 / t) / t
    return epsilon_ladder(h, 1.0, epsilons, _reflected_breaks(p))


def remark3_radial_criterion(p: Profile,
                             epsilons: Sequence[float] = DEFAULT_EPSILONS) -> ConvergenceReport:
    """Ladder of int_eps^1 f0(1 - t) / t^{3/2} dt (euclidean radial analogue)."""
    _require_unit_support(p)
    h = lambda t: np.asarray(p(1.0 - t), dtype=float) / t ** 1.5
    return epsilon_ladder(h, 1.0, epsilons, _reflected_breaks(p))


@dataclass(frozen=True)
class Theorem3Report:
    four_integrals: tuple[float, float, float, float]
    reports: tuple[ConvergenceReport, ...]
    satisfied: bool
    names: tuple[str, ...] = (
        "int_0^1 |f0'| ln^2(2/t)",
        "int_1^inf t^2 |f0'|",
        "int_0^1 omega(f0'; t)_1 ln(2/t) / t",
        "int_0^1 omega(f1'; t)_1 / t",
    )

    def to_json(self) -> dict:
        return {
            "four_integrals": list(self.four_integrals),
            "names": list(self.names),
            "satisfied": self.satisfied,
            "reports": [r.to_json() for r in self.reports],
        }


def _tail_moment_ladder(p: Profile) -> ConvergenceReport:
    """int_1^T t^2 |f0'| on T = 2^1 ... 2^17, written as an eps-ladder in 1/T."""
    d1 = lambda t: t * t * np.abs(np.asarray(p.d1(t), dtype=float))
    Ts = 2.0 ** np.arange(1, 18)
    edges = np.concatenate([[1.0], Ts])
    bps = list(p.breakpoints)
    pieces = [integrate(d1, a, b, spec=LADDER_SPEC,
                        breakpoints=[x for x in bps if a < x < b]).value
              for a, b in zip(edges[:-1], edges[1:])]
    partial = np.cumsum(pieces)
    cls, q, beta, r2, rule = classify_ladder(np.log(Ts), partial, np.asarray(pieces[1:]))
    ladder = tuple((float(1 / T), float(v)) for T, v in zip(Ts, partial))
    return ConvergenceReport(cls, ladder, q, float(partial[-1]) if cls == CONVERGENT else None,
                             beta, r2, rule)


def _modulus_ladder(p: Profile, derivative_of: str, log_weight: bool,
                    epsilons: Sequence[float], per_decade: int) -> ConvergenceReport:
    """Trapezoid in ln t of omega(t) w(t) over a quarter-octave t-ladder."""
    eps = np.asarray(epsilons, dtype=float)
    k_max = int(round(-4 * math.log2(eps[-1])))
    ts = 2.0 ** (-np.arange(k_max + 1) / 4.0)
    om, _ = modulus_l1_ladder(p, ts, derivative_of, per_decade=per_decade)
    w = np.log(2.0 / ts) if log_weight else np.ones_like(ts)
    y = om * w  # integrand of d(ln t)
    cum = np.concatenate([[0.0], np.cumsum(0.5 * (y[1:] + y[:-1]) * math.log(2) / 4)])
    idx = [int(round(-4 * math.log2(e))) for e in eps]
    partial = cum[idx]
    pieces = np.diff(partial)
    cls, q, beta, r2, rule = classify_ladder(np.log(1.0 / eps), partial, pieces)
    ladder = tuple((float(e), float(v)) for e, v in zip(eps, partial))
    return ConvergenceReport(cls, ladder, q, float(partial[-1]) if cls == CONVERGENT else None,
                             beta, r2, rule)


def theorem3_sufficient(p: Profile, epsilons: Sequence[float] = DEFAULT_EPSILONS,
                        per_decade: int = 16) -> Theorem3Report:
    """The four integrals of the sufficient condition, each judged on a ladder.

    Moduli of continuity are grid lower bounds (see ``modulus_l1_ladder``).
    """
    if p.derivative_order_available < 1:
        raise ProfileError("profile has no first derivative")
    abs_d1 = lambda t: np.abs(np.asarray(p.d1(t), dtype=float))
    bps = [b for b in p.breakpoints if 0 < b < 1]
    r1 = epsilon_ladder(lambda t: abs_d1(t) * np.log(2.0 / t) ** 2, 1.0, epsilons, bps)
    r2 = _tail_moment_ladder(p)
    r3 = _modulus_ladder(p, "f0", True, epsilons, per_decade)
    r4 = _modulus_ladder(p, "f1", False, epsilons, per_decade)
    reports = (r1, r2, r3, r4)
    values = tuple(float(r.epsilon_ladder[-1][1]) for r in reports)
    satisfied = all(r.classification == CONVERGENT for r in reports)
    return Theorem3Report(values, reports, satisfied)


@dataclass(frozen=True)
class AStarReport:
    curve: SampledCurve
    T: tuple[float, ...]
    partial_integrals: tuple[float, ...]
    log_slope: float
    log_r2: float
    boundary_flag: bool
    directions: int
    radial_step: float
    notes: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "curve": self.curve.to_json(),
            "T": list(self.T),
            "partial_integrals": list(self.partial_integrals),
            "log_slope": self.log_slope,
            "log_r2": self.log_r2,
            "boundary_flag": self.boundary_flag,
            "directions": self.directions,
            "radial_step": self.radial_step,
        }


def astar_tail_profile(p: Profile, t_grid: Sequence[float], y_scan_radius: float,
                       directions: int = 720, radial_step: float = 0.05,
                       T_ladder: Sequence[float] | None = None) -> AStarReport:
    """S(t) = t max{|fhat(y)| : t <= |y| <= R} and its partial integrals from 1.

    The supremum is a maximum over ``directions`` equally spaced angles and a
    radial grid of step ``radial_step``.  ``boundary_flag`` is set when the
    maximum for some t sits at the outer radius.
    """
    t = np.asarray(t_grid, dtype=float)
    if t.ndim != 1 or t.size < 2 or np.any(np.diff(t) <= 0) or t[0] <= 0:
        raise ValueError("t_grid must be positive and strictly increasing")
    R = float(y_scan_radius)
    if R <= t[-1]:
        raise ValueError("scan radius must exceed the largest t")
    n_r = int(math.ceil((R - t[0]) / radial_step))
    radii = np.linspace(t[0], R, n_r + 1)
    G = GFunction.build(p, math.sqrt(2.0) * R + 0.1, step=0.01)
    theta = 2 * math.pi * np.arange(directions) / directions
    c, s = np.cos(theta), np.sin(theta)
    ring_max = np.empty(radii.size)
    for k0 in range(0, radii.size, 256):
        r = radii[k0:k0 + 256, None]
        ring_max[k0:k0 + 256] = np.max(np.abs(G.fhat(r * c, r * s)), axis=1)
    # suffix maximum over r >= t
    suffix = np.maximum.accumulate(ring_max[::-1])[::-1]
    arg = np.empty(radii.size, dtype=int)
    best = -1.0
    for k in range(radii.size - 1, -1, -1):
        if ring_max[k] >= best:
            best, arg_k = ring_max[k], k
        arg[k] = arg_k
    idx = np.minimum(np.searchsorted(radii, t * (1 - 1e-12)), radii.size - 1)
    S = t * suffix[idx]
    boundary = bool(np.any(arg[idx] == radii.size - 1) and ring_max[-1] > 0)

    if T_ladder is None:
        T_ladder = [2.0 ** k for k in range(1, 64) if 2.0 ** k <= t[-1] * (1 + 1e-12)]
    T_ladder = np.asarray(T_ladder, dtype=float)
    start = int(np.searchsorted(t, 1.0 - 1e-12))
    cum = np.concatenate([[0.0], np.cumsum(0.5 * (S[start + 1:] + S[start:-1]) * np.diff(t[start:]))])
    partial = np.interp(T_ladder, t[start:], cum)
    if T_ladder.size >= 2 and np.any(partial > 0):
        x = np.log(T_ladder)
        A = np.column_stack([np.ones_like(x), x])
        coef = np.linalg.lstsq(A, partial, rcond=None)[0]
        slope, r2 = float(coef[1]), _r2(partial, A @ coef)
    else:
        slope, r2 = 0.0, 1.0
    return AStarReport(SampledCurve(t, S), tuple(T_ladder.tolist()), tuple(partial.tolist()),
                       slope, r2, boundary, directions, radial_step)


def log_borderline_profile(n: int = 1201, depth: float = 12.0) -> Tabulated:
    """Tabulated f0 with f0(1 - t) = 1 / ln(2e / t), resolved down to 1 - t = 10^-depth."""
    s = np.logspace(0.0, -depth, n)
    grid = np.concatenate([1.0 - s, [1.0]])
    vals = np.concatenate([1.0 / np.log(2 * math.e / s), [0.0]])
    return Tabulated(SampledCurve(grid, vals))


def indicator_profile() -> Tabulated:
    """f0 = 1 on [0, 1), the limit of the convex family."""
    return Tabulated(SampledCurve(np.array([0.0, 1.0]), np.array([1.0, 1.0])))
