"""Generating profiles f0 on [0, inf) and their companions f1.

A profile is one of a small closed set of families so that derivatives and
antiderivatives stay exact where the family allows it:

* ``PowerPlus(alpha)``     -- (1 - t)_+^alpha
* ``Exponential(rate, poly)`` -- exp(-rate*t) * sum(poly[k] t^k)
* ``Spline(SplinePoly)``   -- (1 - t)_+^m * sum(a_k t^k), exact rationals
* ``Tabulated(curve, order)`` -- interpolated samples, zero past the last node

f1(t) = t f0(t) + int_t^inf f0 is the one-dimensional profile that decides
positive definiteness of f0(max(|x1|, |x2|)).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Callable, Iterable, Sequence

import numpy as np

from .quadrature import DEFAULT_SPEC, QuadratureSpec, integrate

__all__ = [
    "ProfileError",
    "SampledCurve",
    "SplinePoly",
    "Profile",
    "PowerPlus",
    "Exponential",
    "Spline",
    "Tabulated",
    "zero_profile",
    "evaluate",
    "derivative",
    "derivative_with_flag",
    "build_f1",
    "build_f0_from_f1",
    "moment",
    "modulus_l1",
    "modulus_l1_ladder",
    "profile_from_json",
    "to_fraction",
]


class ProfileError(ValueError):
    """Invalid profile data or an operation outside a profile's domain."""


def to_fraction(x) -> Fraction:
    """Exact rational from an int, Fraction, decimal string or float.

    Floats go through ``repr`` so that 0.1 becomes 1/10 rather than the
    binary expansion.
    """
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, np.integer)):
        return Fraction(int(x))
    if isinstance(x, str):
        return Fraction(x)
    return Fraction(repr(float(x)))


# ---------------------------------------------------------------------------
# sampled curves


@dataclass(frozen=True, eq=False)
class SampledCurve:
    grid: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        grid = np.array(self.grid, dtype=float)
        values = np.array(self.values, dtype=float)
        if grid.ndim != 1 or grid.shape != values.shape:
            raise ProfileError("grid and values must be 1-D of equal length")
        if grid.size < 2 or np.any(np.diff(grid) <= 0):
            raise ProfileError("grid must be strictly increasing with >= 2 points")
        if not (np.all(np.isfinite(grid)) and np.all(np.isfinite(values))):
            raise ProfileError("grid and values must be finite")
        grid.flags.writeable = False
        values.flags.writeable = False
        object.__setattr__(self, "grid", grid)
        object.__setattr__(self, "values", values)

    def __len__(self):
        return self.grid.size

    def to_json(self) -> dict:
        return {"grid": self.grid.tolist(), "values": self.values.tolist()}


# ---------------------------------------------------------------------------
# exact truncated-power polynomials


def _binom(m: Fraction, k: int) -> Fraction:
    out = Fraction(1)
    for i in range(k):
        out = out * (m - i) / (i + 1)
    return out


def _shift_basis(coeffs: Sequence[Fraction]) -> list[Fraction]:
    """Coefficients of p(1 - x) given those of p(x).  The map is an involution."""
    n = len(coeffs)
    out = [Fraction(0)] * n
    for k, a in enumerate(coeffs):
        if a == 0:
            continue
        for j in range(k + 1):
            term = a * math.comb(k, j)
            out[j] += -term if j % 2 else term
    return out


def _trim(coeffs: Iterable[Fraction]) -> tuple[Fraction, ...]:
    c = list(coeffs)
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


@dataclass(frozen=True)
class SplinePoly:
    """(1 - t)^m * sum(coeffs[k] t^k) on [0, 1], zero on [1, inf).

    ``m`` and the coefficients are exact rationals.  Members of the A_{r,d}
    family have ``coeffs[0] == 1``; companions built by :func:`build_f1` may
    carry any leading coefficient.
    """
    m: Fraction
    coeffs: tuple[Fraction, ...]

    def __post_init__(self):
        m = to_fraction(self.m)
        if m < 0:
            raise ProfileError("truncated-power exponent must be >= 0")
        object.__setattr__(self, "m", m)
        object.__setattr__(self, "coeffs", _trim(to_fraction(c) for c in self.coeffs))

    # basis changes: f = s^m Q(s) with s = 1 - t
    @property
    def s_coeffs(self) -> list[Fraction]:
        return _shift_basis(self.coeffs)

    @classmethod
    def from_s(cls, m: Fraction, q: Sequence[Fraction]) -> "SplinePoly":
        return cls(m, tuple(_shift_basis(list(q))))

    @property
    def degree(self) -> Fraction:
        """Total degree m + deg p (meaningful when m is an integer)."""
        return self.m + max(len(self.coeffs) - 1, 0)

    def is_zero(self) -> bool:
        return not self.coeffs

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        inside = t < 1.0
        s = np.where(inside, 1.0 - t, 0.0)
        poly = np.polynomial.polynomial.polyval(t, [float(c) for c in self.coeffs]) \
            if self.coeffs else np.zeros_like(t)
        m = float(self.m)
        if m == 0:
            base = np.ones_like(t)
        else:
            base = np.power(s, m)
        out = np.where(inside, base * poly, 0.0)
        return out if out.ndim else float(out)

    def derivative(self) -> "SplinePoly":
        q = self.s_coeffs
        if self.m == 0:
            # d/dt = -d/ds
            dq = [-(j * c) for j, c in enumerate(q)][1:]
            return SplinePoly.from_s(Fraction(0), dq)
        # d/dt [s^m Q] = s^(m-1) * (-m Q - s Q')
        new = [-self.m * c for c in q] + [Fraction(0)]
        for j, c in enumerate(q):
            if j:
                new[j] -= j * c
        m1 = self.m - 1
        if m1 < 0:
            raise ProfileError("derivative of (1-t)^m with 0 < m < 1 is unbounded at t=1")
        return SplinePoly.from_s(m1, new)

    def tail_integral(self) -> "SplinePoly":
        """t -> int_t^1 f(u) du."""
        q = self.s_coeffs
        new = [c / (self.m + j + 1) for j, c in enumerate(q)]
        return SplinePoly.from_s(self.m + 1, new)

    def times_t(self) -> "SplinePoly":
        return SplinePoly(self.m, (Fraction(0),) + tuple(self.coeffs))

    def __add__(self, other: "SplinePoly") -> "SplinePoly":
        # bring both to the smaller exponent when the difference is integral
        a, b = (self, other) if self.m <= other.m else (other, self)
        diff = b.m - a.m
        if diff.denominator != 1:
            raise ProfileError("cannot add truncated powers with non-integral exponent gap")
        qa = a.s_coeffs
        qb = [Fraction(0)] * int(diff) + b.s_coeffs
        n = max(len(qa), len(qb))
        qa += [Fraction(0)] * (n - len(qa))
        qb += [Fraction(0)] * (n - len(qb))
        return SplinePoly.from_s(a.m, [x + y for x, y in zip(qa, qb)])

    def scale(self, c) -> "SplinePoly":
        c = to_fraction(c)
        return SplinePoly(self.m, tuple(c * a for a in self.coeffs))

    def expanded(self) -> list[Fraction]:
        """Full polynomial coefficients on [0, 1]; needs an integral exponent."""
        if self.m.denominator != 1:
            raise ProfileError("polynomial expansion needs an integral exponent")
        m = int(self.m)
        out = [Fraction(0)] * (m + len(self.coeffs))
        for k, a in enumerate(self.coeffs):
            for j in range(m + 1):
                term = a * math.comb(m, j)
                out[k + j] += -term if j % 2 else term
        return list(_trim(out))

    def to_json(self) -> dict:
        return {"m": _frac_str(self.m), "coeffs": [_frac_str(c) for c in self.coeffs]}


def _frac_str(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


# ---------------------------------------------------------------------------
# profile families


class Profile:
    """Base class of the profile families; instances are immutable."""

    family: str = ""
    support_radius: float = math.inf
    derivative_order_available: int = 2

    def __call__(self, t):  # pragma: no cover - abstract
        raise NotImplementedError

    def d1(self, t):  # pragma: no cover - abstract
        raise NotImplementedError

    def d2(self, t):  # pragma: no cover - abstract
        raise NotImplementedError

    @property
    def breakpoints(self) -> tuple[float, ...]:
        """Points in (0, inf) where the profile is not smooth."""
        return (self.support_radius,) if math.isfinite(self.support_radius) else ()

    @property
    def singular_points(self) -> tuple[float, ...]:
        """Points towards which panels should be graded (limited smoothness)."""
        return self.breakpoints

    def characteristic_length(self) -> float:
        return self.support_radius

    def integration_end(self, abs_tol: float = 1e-16) -> float:
        """Finite upper limit for panelled integration of the profile."""
        return self.support_radius

    def to_json(self) -> dict:  # pragma: no cover - abstract
        raise NotImplementedError

    def _check_t(self, t):
        t = np.asarray(t, dtype=float)
        if np.any(t < 0) or np.any(~np.isfinite(t)):
            raise ProfileError("profiles are defined for finite t >= 0")
        return t


@dataclass(frozen=True)
class PowerPlus(Profile):
    alpha: float
    family = "power"
    support_radius = 1.0

    def __post_init__(self):
        if not (self.alpha > 0 and math.isfinite(self.alpha)):
            raise ProfileError("PowerPlus exponent must be a finite real > 0")

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        s = np.clip(1.0 - t, 0.0, None)
        out = np.power(s, self.alpha)
        return out if out.ndim else float(out)

    def d1(self, t):
        t = np.asarray(t, dtype=float)
        inside = t < 1
        s = np.where(inside, 1.0 - t, 1.0)
        out = np.where(inside, -self.alpha * np.power(s, self.alpha - 1), 0.0)
        return out if out.ndim else float(out)

    def d2(self, t):
        t = np.asarray(t, dtype=float)
        inside = t < 1
        s = np.where(inside, 1.0 - t, 1.0)
        a = self.alpha
        out = np.where(inside, a * (a - 1) * np.power(s, a - 2), 0.0)
        return out if out.ndim else float(out)

    def as_spline(self) -> "Spline":
        return Spline(SplinePoly(to_fraction(self.alpha), (Fraction(1),)))

    def to_json(self) -> dict:
        return {"family": "power", "alpha": float(self.alpha)}


@dataclass(frozen=True)
class Exponential(Profile):
    """exp(-rate t) * poly(t); ``poly`` defaults to the constant 1."""
    rate: float
    poly: tuple[float, ...] = (1.0,)
    family = "exp"

    def __post_init__(self):
        if not (self.rate > 0 and math.isfinite(self.rate)):
            raise ProfileError("Exponential rate must be a finite real > 0")
        poly = tuple(float(c) for c in self.poly)
        if not all(math.isfinite(c) for c in poly):
            raise ProfileError("polynomial factor must be finite")
        object.__setattr__(self, "poly", poly or (0.0,))

    def _poly(self, c, t):
        return np.polynomial.polynomial.polyval(t, c)

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        out = np.exp(-self.rate * t) * self._poly(self.poly, t)
        return out if out.ndim else float(out)

    def _dpoly(self) -> tuple[float, ...]:
        # (p e^{-rt})' = (p' - r p) e^{-rt}
        p = np.array(self.poly)
        dp = np.polynomial.polynomial.polyder(p) if p.size > 1 else np.zeros(1)
        out = -self.rate * p
        out[: dp.size] += dp
        return tuple(out.tolist())

    def derivative_profile(self) -> "Exponential":
        return Exponential(self.rate, self._dpoly())

    def d1(self, t):
        return self.derivative_profile()(t)

    def d2(self, t):
        return self.derivative_profile().derivative_profile()(t)

    def characteristic_length(self) -> float:
        return 1.0 / self.rate

    def integration_end(self, abs_tol: float = 1e-16) -> float:
        # e^{-rW} * |poly|(W) * W below abs_tol
        scale = sum(abs(c) for c in self.poly) or 1.0
        w = 1.0 / self.rate
        while math.exp(-self.rate * w) * scale * (1 + w) ** (len(self.poly) + 1) > abs_tol:
            w *= 1.25
        return w

    def to_json(self) -> dict:
        out = {"family": "exp", "lambda": float(self.rate)}
        if self.poly != (1.0,):
            out["poly"] = list(self.poly)
        return out


@dataclass(frozen=True)
class Spline(Profile):
    poly: SplinePoly
    family = "spline"
    support_radius = 1.0

    @cached_property
    def _d1(self) -> SplinePoly:
        return self.poly.derivative()

    @cached_property
    def _d2(self) -> SplinePoly:
        return self._d1.derivative()

    @property
    def derivative_order_available(self) -> int:
        m = self.poly.m
        return 2 if m >= 2 or m == 0 else (1 if m >= 1 else 0)

    @property
    def singular_points(self) -> tuple[float, ...]:
        # smooth up to the support end when m is a large integer
        return (1.0,)

    def __call__(self, t):
        return self.poly(t)

    def d1(self, t):
        return self._d1(t)

    def d2(self, t):
        return self._d2(t)

    def to_json(self) -> dict:
        return {"family": "spline", **self.poly.to_json()}


@dataclass(frozen=True, eq=False)
class Tabulated(Profile):
    """Interpolated samples (order 1: linear, 3: cubic); zero past the last node."""
    curve: SampledCurve
    order: int = 1
    family = "table"

    def __post_init__(self):
        if self.order not in (1, 3):
            raise ProfileError("interpolation order must be 1 or 3")
        if self.curve.grid[0] != 0.0:
            raise ProfileError("tabulated profiles must start at t = 0")

    @property
    def support_radius(self) -> float:  # type: ignore[override]
        return float(self.curve.grid[-1])

    @property
    def derivative_order_available(self) -> int:  # type: ignore[override]
        return 1 if self.order == 1 else 2

    @property
    def breakpoints(self) -> tuple[float, ...]:
        if self.order == 1:
            return tuple(self.curve.grid[1:].tolist())
        return (self.support_radius,)

    @property
    def singular_points(self) -> tuple[float, ...]:
        return (self.support_radius,)

    @cached_property
    def _cubic(self):
        from scipy.interpolate import CubicSpline
        return CubicSpline(self.curve.grid, self.curve.values)

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        g, v = self.curve.grid, self.curve.values
        if self.order == 1:
            out = np.interp(t, g, v)
        else:
            out = self._cubic(np.clip(t, g[0], g[-1]))
        out = np.where(t >= g[-1], 0.0, out)
        return out if out.ndim else float(out)

    def _fd(self, t, order):
        t = np.asarray(t, dtype=float)
        g = self.curve.grid
        scale = float(np.min(np.diff(g)))
        h = min(1e-5, 0.25 * scale) if order == 1 else min(1e-4, 0.25 * scale)
        lo = np.maximum(t - h, 0.0)
        hi = t + h
        if order == 1:
            out = (self(hi) - self(lo)) / (hi - lo)
        else:
            out = (self(hi) - 2 * self(t) + self(np.maximum(t - h, 0.0))) / h**2
        return out if np.ndim(out) else float(out)

    def d1(self, t):
        return self._fd(t, 1)

    def d2(self, t):
        return self._fd(t, 2)

    def to_json(self) -> dict:
        return {"family": "table", "order": self.order, **self.curve.to_json()}


def zero_profile() -> Spline:
    return Spline(SplinePoly(Fraction(0), ()))


def profile_from_json(obj: dict) -> Profile:
    """Build a profile from its JSON form, e.g. ``{"family": "exp", "lambda": 1}``."""
    if not isinstance(obj, dict) or "family" not in obj:
        raise ProfileError("profile JSON must be an object with a 'family' key")
    fam = obj["family"]
    try:
        if fam == "power":
            return PowerPlus(float(obj["alpha"]))
        if fam == "exp":
            rate = obj.get("lambda", obj.get("rate", 1.0))
            return Exponential(float(rate), tuple(obj.get("poly", (1.0,))))
        if fam == "spline":
            return Spline(SplinePoly(to_fraction(str(obj.get("m", 0))),
                                     tuple(to_fraction(str(c)) for c in obj.get("coeffs", ()))))
        if fam == "table":
            return Tabulated(SampledCurve(obj["grid"], obj["values"]), int(obj.get("order", 1)))
        if fam == "zero":
            return zero_profile()
    except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
        raise ProfileError(f"bad {fam!r} profile: {exc}") from exc
    raise ProfileError(f"unknown profile family {fam!r}")


# ---------------------------------------------------------------------------
# operations


def evaluate(p: Profile, t: float) -> float:
    if t < 0 or not math.isfinite(t):
        raise ProfileError("evaluate needs a finite t >= 0")
    return float(p(t))


def derivative_with_flag(p: Profile, t: float, order: int = 1) -> tuple[float, bool]:
    """Derivative of f0 at t and whether t is a breakpoint.

    At a breakpoint (and at t = 0) the right derivative is returned and the
    flag is set.
    """
    if order not in (1, 2):
        raise ProfileError("order must be 1 or 2")
    if order > p.derivative_order_available:
        raise ProfileError(f"{p.family} profile provides {p.derivative_order_available} derivatives")
    if t < 0 or not math.isfinite(t):
        raise ProfileError("derivative needs a finite t >= 0")
    at_break = t == 0 or any(abs(t - b) <= 1e-14 * max(1.0, b) for b in p.breakpoints)
    x = t
    if at_break and t > 0:
        # right derivative: past the support it is zero; otherwise evaluate
        # the piece on the right
        if t >= p.support_radius:
            return 0.0, True
        x = t * (1 + 1e-13) if isinstance(p, Tabulated) else t
    value = p.d1(x) if order == 1 else p.d2(x)
    return float(value), at_break


def derivative(p: Profile, t: float, order: int = 1) -> float:
    return derivative_with_flag(p, t, order)[0]


def _tail_integral_exp(rate: float, poly: Sequence[float]) -> tuple[float, ...]:
    """Coefficients c with int_t^inf p(u) e^{-ru} du = e^{-rt} * sum c_j t^j."""
    out = np.zeros(len(poly))
    for k, a in enumerate(poly):
        # int_t^inf u^k e^{-ru} du = e^{-rt} sum_j k!/(j! r^{k-j+1}) t^j
        for j in range(k + 1):
            out[j] += a * math.factorial(k) / (math.factorial(j) * rate ** (k - j + 1))
    return tuple(out.tolist())


def _tabulate(fn: Callable[[np.ndarray], np.ndarray], grid: np.ndarray) -> Tabulated:
    return Tabulated(SampledCurve(grid, fn(grid)), order=3)


def _table_grid(p: Profile, n: int = 2001) -> np.ndarray:
    end = p.integration_end(1e-14)
    return np.linspace(0.0, end, n)


def build_f1(p: Profile) -> Profile:
    """f1(t) = t f0(t) + int_t^inf f0(u) du, symbolic where the family allows."""
    if isinstance(p, PowerPlus):
        p = p.as_spline()
    if isinstance(p, Spline):
        return Spline(p.poly.times_t() + p.poly.tail_integral())
    if isinstance(p, Exponential):
        tail = _tail_integral_exp(p.rate, p.poly)
        n = max(len(p.poly) + 1, len(tail))
        c = np.zeros(n)
        c[1:len(p.poly) + 1] += p.poly
        c[:len(tail)] += tail
        return Exponential(p.rate, tuple(c.tolist()))
    if isinstance(p, Tabulated):
        g = p.curve.grid
        v = p(g)
        # cumulative tail integral by the trapezoid rule (exact for linear data)
        seg = 0.5 * (v[1:] + v[:-1]) * np.diff(g)
        tail = np.concatenate([np.cumsum(seg[::-1])[::-1], [0.0]])
        return Tabulated(SampledCurve(g, g * v + tail), order=p.order)
    raise ProfileError(f"unsupported profile {type(p).__name__}")


def build_f0_from_f1(q: Profile, spec: QuadratureSpec = DEFAULT_SPEC) -> Profile:
    """Invert :func:`build_f1`: f0(t) = -int_t^inf f1'(u)/u du.

    Requires f1'(0) = 0 (otherwise f0 has a logarithmic singularity at 0).
    """
    if isinstance(q, PowerPlus):
        q = q.as_spline()
    if isinstance(q, Spline):
        if q.poly.is_zero():
            return zero_profile()
        d = q.poly.derivative()
        if d.coeffs and d.coeffs[0] != 0:
            raise ProfileError("f1'(0) != 0: the limit of f0 at 0+ does not exist")
        over_t = SplinePoly(d.m, d.coeffs[1:])
        return Spline(over_t.tail_integral().scale(-1))
    if isinstance(q, Exponential):
        dp = q._dpoly()
        if abs(dp[0]) > 1e-14 * max(1.0, max(abs(c) for c in dp)):
            raise ProfileError("f1'(0) != 0: the limit of f0 at 0+ does not exist")
        over_t = dp[1:] or (0.0,)
        tail = _tail_integral_exp(q.rate, over_t)
        return Exponential(q.rate, tuple(-c for c in tail))
    if isinstance(q, Tabulated):
        g = q.curve.grid
        # -int_t^R f1'(u)/u du = f1(t)/t - int_t^R f1(u)/u^2 du   (f1(R) = 0)
        vals = np.empty_like(g)
        for i, t in enumerate(g):
            if t == 0:
                continue
            r = integrate(lambda u: q(u) / u**2, t, g[-1], spec=spec, breakpoints=q.breakpoints)
            vals[i] = q(t) / t - r.value
        vals[0] = vals[1] + (vals[1] - vals[2]) * g[1] / (g[2] - g[1]) if g.size > 2 else vals[1]
        return Tabulated(SampledCurve(g, vals), order=q.order)
    raise ProfileError(f"unsupported profile {type(q).__name__}")


def _integration_breaks(p: Profile) -> list[float]:
    return [b for b in p.breakpoints if math.isfinite(b)]


def moment(p: Profile, power: float = 1.0, absolute: bool = False,
           spec: QuadratureSpec = DEFAULT_SPEC) -> float:
    """int_0^inf t^power f0(t) dt (of |f0| when ``absolute``).

    Raises ProfileError carrying the partial value when the integral does
    not converge.
    """
    def h(t):
        v = p(t)
        if absolute:
            v = np.abs(v)
        with np.errstate(divide="ignore", invalid="ignore"):
            w = np.where(t > 0, np.power(t, power), 0.0 if power > 0 else 1.0)
        return w * v
    end = p.support_radius
    r = integrate(h, 0.0, end, spec=spec, breakpoints=_integration_breaks(p))
    if not r.converged or not math.isfinite(r.value):
        raise ProfileError(f"moment integral did not converge (partial value {r.value!r})")
    return r.value


def _derivative_target(p: Profile, derivative_of: str) -> Callable[[np.ndarray], np.ndarray]:
    if derivative_of == "f0":
        return lambda u: p.d1(u)
    if derivative_of == "f1":
        return lambda u: u * p.d1(u)
    raise ProfileError("derivative_of must be 'f0' or 'f1'")


def _shift_distance(g, breaks: Sequence[float], end: float, delta: float,
                    spec: QuadratureSpec) -> float:
    pts = set()
    for b in breaks:
        pts.add(b)
        if b - delta > 0:
            pts.add(b - delta)
    bps = sorted(x for x in pts if 0 < x < end)
    r = integrate(lambda u: np.abs(g(u) - g(u + delta)), 0.0, end, spec=spec, breakpoints=bps)
    return r.value


def modulus_l1_ladder(p: Profile, ts: Sequence[float], derivative_of: str = "f0",
                      per_decade: int = 64,
                      spec: QuadratureSpec = QuadratureSpec(abs_tol=1e-12, rel_tol=1e-9)):
    """omega(g; t)_1 for every t in ``ts``, with g = f0' or f1' = t f0'.

    The supremum over shifts 0 < delta <= t is a maximum over a geometric
    delta grid with ``per_decade`` points per decade, so the values are lower
    bounds.  Returns ``(values, maximizing_deltas)``.
    """
    ts = np.asarray(ts, dtype=float)
    if np.any(ts < 0):
        raise ProfileError("modulus of continuity needs t >= 0")
    out = np.zeros(ts.size)
    arg = np.zeros(ts.size)
    pos = ts[ts > 0]
    if pos.size == 0:
        return out, arg
    if p.derivative_order_available < 1:
        raise ProfileError("profile has no first derivative")
    g = _derivative_target(p, derivative_of)
    breaks = [0.0] + _integration_breaks(p)
    end = p.integration_end(1e-16)
    tmin, tmax = pos.min(), pos.max()
    lo = math.log10(tmin) - 2.0
    hi = math.log10(tmax)
    n = max(2, int(math.ceil((hi - lo) * per_decade)) + 1)
    deltas = np.union1d(np.logspace(lo, hi, n), pos)
    dist = np.array([_shift_distance(g, breaks, end + d, d, spec) for d in deltas])
    running = np.maximum.accumulate(dist)
    arg_running = deltas[np.array([int(np.argmax(dist[: i + 1])) for i in range(deltas.size)])]
    for i, t in enumerate(ts):
        if t <= 0:
            continue
        k = int(np.searchsorted(deltas, t * (1 + 1e-12), side="right")) - 1
        out[i] = running[k]
        arg[i] = arg_running[k]
    return out, arg


def modulus_l1(p: Profile, t: float, derivative_of: str = "f0", per_decade: int = 64) -> float:
    """L1 modulus of continuity of f0' (or f1') at scale t (a lower bound)."""
    if t < 0:
        raise ProfileError("modulus of continuity needs t >= 0")
    if t == 0:
        return 0.0
    return float(modulus_l1_ladder(p, [t], derivative_of, per_decade)[0][0])
