"""Periodic side: sampled multipliers on Z^2 and their kernels on the torus.

A generator phi(x) = phi0(max(|x1|, |x2|)) sampled at k h (h = 1/n or eps)
gives the kernel K(x) = sum_k phi(kh) e^{i(k, x)}.  When phi is positive
definite on R^2 the kernel is the periodization
h^{-2} sum_m phihat((x + 2 pi m)/h) and hence nonnegative.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

import numpy as np

from .profile import Profile, ProfileError, profile_from_json
from .transform import GFunction

__all__ = [
    "Generator",
    "MultiplierField",
    "Kernel2D",
    "NormResult",
    "PeriodizationReport",
    "riesz_generator",
    "sharp_generator",
    "profile_generator",
    "generator_from_json",
    "sample_multiplier",
    "kernel",
    "midpoint_grid",
    "kernel_l1_norm",
    "periodization_check",
    "fit_log_power",
]

TAIL_BUDGET = 1e-12
REACH = 110.0


@dataclass(frozen=True)
class Generator:
    """phi0 on [0, inf): a profile, Marcinkiewicz-Riesz (1 - r^alpha)_+^beta, or 1_{r <= 1}."""
    kind: str
    profile: Profile | None = None
    alpha: float = 1.0
    beta: float = 1.0

    def __post_init__(self):
        if self.kind not in ("profile", "riesz", "sharp"):
            raise ValueError(f"unknown generator kind {self.kind!r}")
        if self.kind == "profile" and self.profile is None:
            raise ValueError("profile generator needs a profile")
        if self.kind == "riesz" and not (self.alpha > 0 and self.beta >= 0):
            raise ValueError("riesz generator needs alpha > 0 and beta >= 0")

    def __call__(self, r):
        r = np.asarray(r, dtype=float)
        if self.kind == "profile":
            return np.asarray(self.profile(r), dtype=float)
        if self.kind == "sharp":
            return (r <= 1.0).astype(float)
        base = np.clip(1.0 - r ** self.alpha, 0.0, None)
        return np.where(r < 1.0, base ** self.beta, 0.0)

    @property
    def support_radius(self) -> float:
        return self.profile.support_radius if self.kind == "profile" else 1.0

    def to_json(self) -> dict:
        if self.kind == "profile":
            return {"kind": "profile", "profile": self.profile.to_json()}
        if self.kind == "riesz":
            return {"kind": "riesz", "alpha": self.alpha, "beta": self.beta}
        return {"kind": "sharp"}


def riesz_generator(alpha: float = 1.0, beta: float = 1.0) -> Generator:
    return Generator("riesz", alpha=alpha, beta=beta)


def sharp_generator() -> Generator:
    return Generator("sharp")


def profile_generator(p: Profile) -> Generator:
    return Generator("profile", profile=p)


def generator_from_json(obj: dict) -> Generator:
    """``{"kind": "riesz", ...}``, ``{"kind": "sharp"}`` or a profile object."""
    if not isinstance(obj, dict):
        raise ProfileError("generator JSON must be an object")
    kind = obj.get("kind")
    if kind == "riesz":
        return riesz_generator(float(obj.get("alpha", 1.0)), float(obj.get("beta", 1.0)))
    if kind == "sharp":
        return sharp_generator()
    if kind == "profile":
        return profile_generator(profile_from_json(obj["profile"]))
    if "family" in obj:
        return profile_generator(profile_from_json(obj))
    raise ProfileError(f"unknown generator {obj!r}")


@dataclass(frozen=True, eq=False)
class MultiplierField:
    """values[i, j] = phi(h * max(|i - K|, |j - K|)) on the box [-K, K]^2."""
    step: float
    K: int
    values: np.ndarray
    generator: dict
    tail_sup: float
    tail_sum: float
    tail_flag: bool

    def __post_init__(self):
        self.values.setflags(write=False)

    @property
    def n(self) -> float:
        return 1.0 / self.step

    def at(self, k1: int, k2: int) -> float:
        if max(abs(k1), abs(k2)) > self.K:
            return 0.0
        return float(self.values[k1 + self.K, k2 + self.K])

    def profile_1d(self) -> np.ndarray:
        """phi(h j) for j = 0..K (the field depends on max(|k1|, |k2|) only)."""
        return np.asarray(self.values[self.K, self.K:], dtype=float)

    def to_json(self) -> dict:
        return {"step": self.step, "K": self.K, "generator": self.generator,
                "tail_sup": self.tail_sup, "tail_sum": self.tail_sum,
                "tail_flag": self.tail_flag, "profile": self.profile_1d().tolist()}


def _tail(gen: Generator, h: float, K: int, horizon: int = 1 << 16) -> tuple[float, float]:
    """sup and sum of |phi| over the lattice outside [-K, K]^2."""
    if math.isfinite(gen.support_radius) and K * h >= gen.support_radius:
        return 0.0, 0.0
    j = np.arange(K + 1, K + 1 + horizon, dtype=float)
    v = np.abs(gen(h * j))
    return float(v.max(initial=0.0)), float(np.sum(8 * j * v))


def sample_multiplier(gen: Generator, n: float | None = None, eps: float | None = None,
                      K: int | None = None, budget: float = TAIL_BUDGET) -> MultiplierField:
    """phi(k/n) or phi(eps k) on [-K, K]^2.

    Without ``K`` the box covers the support, or for unbounded support the
    smallest box whose lattice tail sum is below ``budget``.
    """
    if (n is None) == (eps is None):
        raise ValueError("give exactly one of n and eps")
    h = 1.0 / n if n is not None else float(eps)
    if not h > 0:
        raise ValueError("scale must be positive")
    if K is None:
        if math.isfinite(gen.support_radius):
            K = int(math.floor(gen.support_radius / h + 1e-9))
        else:
            K = 1
            while _tail(gen, h, K)[1] > budget:
                K *= 2
            lo, hi = K // 2, K
            while hi - lo > 1:
                mid = (lo + hi) // 2
                lo, hi = (mid, hi) if _tail(gen, h, mid)[1] > budget else (lo, mid)
            K = hi
    if K < 0:
        raise ValueError("K must be nonnegative")
    k = np.arange(-K, K + 1)
    r = np.maximum.outer(np.abs(k), np.abs(k)) * h
    vals = gen(r)
    sup, total = _tail(gen, h, K)
    return MultiplierField(h, K, np.array(vals, dtype=float), gen.to_json(), sup, total,
                           total > budget)


class Kernel2D(NamedTuple):
    x1: np.ndarray
    x2: np.ndarray
    values: np.ndarray
    imag_residue: float


def midpoint_grid(n: int) -> np.ndarray:
    """n midpoints of a uniform partition of [-pi, pi]."""
    return -math.pi + 2 * math.pi * (np.arange(n) + 0.5) / n


def kernel(fld: MultiplierField, x1: Sequence[float], x2: Sequence[float] | None = None) -> Kernel2D:
    """K(x) = sum_k field(k) e^{i(k, x)} on the tensor grid x1 x x2 by direct summation.

    Evenness makes K real; the imaginary part is summed as well and its
    maximum is reported.
    """
    x1 = np.asarray(x1, dtype=float)
    x2 = x1 if x2 is None else np.asarray(x2, dtype=float)
    k = np.arange(-fld.K, fld.K + 1, dtype=float)
    c1, s1 = np.cos(np.outer(x1, k)), np.sin(np.outer(x1, k))
    c2, s2 = np.cos(np.outer(x2, k)), np.sin(np.outer(x2, k))
    F = fld.values
    re = c1 @ F @ c2.T - s1 @ F @ s2.T
    im = s1 @ F @ c2.T + c1 @ F @ s2.T
    return Kernel2D(x1, x2, re, float(np.max(np.abs(im), initial=0.0)))


class NormResult(NamedTuple):
    value: float
    error: float
    grid: int


def _mean_abs(fld: MultiplierField, n: int, rows: int = 256) -> float:
    x = midpoint_grid(n)
    total = 0.0
    for i in range(0, n, rows):
        total += float(np.sum(np.abs(kernel(fld, x[i:i + rows], x).values)))
    return total / (n * n)


def kernel_l1_norm(fld: MultiplierField, grid_density: int = 512) -> NormResult:
    """(2 pi)^{-2} int |K| by the midpoint rule; the error is the change on doubling."""
    coarse = _mean_abs(fld, grid_density)
    fine = _mean_abs(fld, 2 * grid_density)
    return NormResult(fine, abs(fine - coarse), 2 * grid_density)


def fit_log_power(ns: Sequence[float], norms: Sequence[float]) -> dict:
    """Growth of norms in ln n.

    ``exponent`` is the slope of ln(norm) against ln(ln n); ``shifted_exponent``
    fits norm = c (ln n + s)^p over s as well (reported for diagnosis).
    """
    L = np.log(np.asarray(ns, dtype=float))
    y = np.log(np.asarray(norms, dtype=float))
    A = np.column_stack([np.ones_like(L), np.log(L)])
    coef, *_ = np.linalg.lstsq(A, y, rcond=None)
    fit = A @ coef
    ss = float(np.sum((y - y.mean()) ** 2))
    r2 = 1.0 if ss == 0 else 1.0 - float(np.sum((y - fit) ** 2)) / ss
    best = (math.inf, float(coef[1]), 0.0)
    for s in np.linspace(0.0, 10.0, 2001):
        B = np.column_stack([np.ones_like(L), np.log(L + s)])
        c, *_ = np.linalg.lstsq(B, y, rcond=None)
        res = float(np.sum((y - B @ c) ** 2))
        if res < best[0]:
            best = (res, float(c[1]), float(s))
    return {"exponent": float(coef[1]), "r_squared": r2,
            "shifted_exponent": best[1], "shift": best[2]}


@dataclass(frozen=True)
class PeriodizationReport:
    delta: float
    K: int
    samples: dict
    poisson_coefficients: dict
    max_coefficient_error: float
    kernel_max_difference: float
    truncation_budget: float
    lattice_tail: float
    flagged: bool
    notes: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "delta": self.delta, "K": self.K,
            "samples": self.samples, "poisson_coefficients": self.poisson_coefficients,
            "max_coefficient_error": self.max_coefficient_error,
            "kernel_max_difference": self.kernel_max_difference,
            "truncation_budget": self.truncation_budget,
            "lattice_tail": self.lattice_tail, "flagged": self.flagged,
        }


def _poisson_kernel(G: GFunction, delta: float, x: np.ndarray, M: int) -> np.ndarray:
    """delta^{-2} sum_{|m_i| <= M} fhat((x + 2 pi m)/delta) on the tensor grid x x x."""
    shifts = 2 * math.pi * np.arange(-M, M + 1)
    y = (x[:, None] + shifts[None, :]) / delta
    n = x.size
    out = np.zeros((n, n))
    for i in range(n):
        for j0 in range(0, n, 8):
            v = G.fhat(y[i][None, None, :], y[j0:j0 + 8][:, :, None])
            out[i, j0:j0 + 8] = v.sum(axis=(1, 2))
    return out / delta ** 2


def periodization_check(p: Profile, delta: float, K: int, points: int = 32, M: int | None = None,
                        ks: Sequence[tuple[int, int]] = ((0, 0), (1, 0), (1, 1), (2, 1), (3, 3)),
                        tol: float = 1e-4) -> PeriodizationReport:
    """Fourier coefficients of the periodized transform against samples f(delta k).

    The periodization is summed over |m_i| <= M and <= 2M (by default M
    reaches |y| of about 110 characteristic units); its missing mass
    decays like 1/M, so the two are combined by Richardson extrapolation.
    The raw deficit f0(0) - c(0, 0) at 2M is reported as the truncation
    budget.  The lattice kernel is truncated to [-K, K]^2 and compared with
    the extrapolated periodization on the grid.
    """
    if not delta > 0:
        raise ValueError("delta must be positive")
    x = midpoint_grid(points)
    if M is None:
        M = max(1, math.ceil((REACH / p.characteristic_length() * delta - math.pi) / (2 * math.pi)))
    reach = (2 * math.pi * 2 * M + math.pi) / delta
    G = GFunction.build(p, 2 * reach + 0.1, step=0.01)
    K1 = _poisson_kernel(G, delta, x, M)
    K2 = _poisson_kernel(G, delta, x, 2 * M)
    Kp = 2 * K2 - K1
    fld = sample_multiplier(profile_generator(p), eps=delta, K=K)
    Kl = kernel(fld, x).values
    samples, coeffs = {}, {}
    err = 0.0
    for k1, k2 in ks:
        phase = np.exp(-1j * (k1 * x[:, None] + k2 * x[None, :]))
        c = float(np.real(np.mean(Kp * phase)))
        s = float(p(delta * max(abs(k1), abs(k2))))
        key = f"{k1},{k2}"
        samples[key], coeffs[key] = s, c
        err = max(err, abs(c - s))
    budget = float(p(0.0)) - float(np.mean(K2))
    diff = float(np.max(np.abs(Kp - Kl)))
    flagged = err > tol or fld.tail_sum > tol
    return PeriodizationReport(delta, K, samples, coeffs, err, diff, budget, fld.tail_sum, flagged,
                               {"points": points, "M": [M, 2 * M]})
