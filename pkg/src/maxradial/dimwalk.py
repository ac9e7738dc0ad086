"""Walking between dimensions for radial functions.

Descent from a one-dimensional profile f1 to a d-dimensional radial profile,

    f_d(t) = int_0^1 (1 - u^2)^{(d-3)/2} f1(ut) du,

and, for odd d = 2 d1 + 1, its inverse

    f1(u) = 2u / (d1 - 1)! * D^{d1} [tau^{d1 - 1/2} f_d(sqrt(tau))] at tau = u^2.

f_d is the spherical average of the ridge function f1(<x, w>), so it is
positive definite on R^d exactly when f1 is positive definite on R.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple, Sequence

import numpy as np

from .profile import Profile, ProfileError, Spline, SplinePoly
from .quadrature import QuadratureSpec, integrate

__all__ = [
    "RadialProfile",
    "DescendedProfile",
    "AscendEstimate",
    "DIMWALK_SPEC",
    "descend",
    "descend_many",
    "ascend_odd",
    "ascend_estimate",
    "ascend_spline",
    "bessel_j",
    "support_moment_conditions",
    "radial_sine_moments_3d",
]

DIMWALK_SPEC = QuadratureSpec(abs_tol=1e-14, rel_tol=1e-13, max_subdivisions=4000)


@dataclass(frozen=True)
class RadialProfile:
    """A profile read as a radial function of |x| on R^d."""
    d: int
    profile: Profile

    def __post_init__(self):
        if int(self.d) != self.d or self.d < 1:
            raise ProfileError("dimension must be a positive integer")


def _check_descent_dim(d: int) -> int:
    if int(d) != d or d < 2:
        raise ProfileError("descent needs an integer dimension d >= 2")
    return int(d)


def _check_odd_dim(d: int) -> int:
    if int(d) != d or d < 3 or d % 2 == 0:
        raise ProfileError("ascent needs an odd dimension d >= 3")
    return int(d)


def descend(f1: Profile, d: int, t: float, spec: QuadratureSpec = DIMWALK_SPEC) -> float:
    """f_d(t), computed as int_0^{pi/2} cos^{d-2}(th) f1(t sin th) dth."""
    d = _check_descent_dim(d)
    if t < 0 or not math.isfinite(t):
        raise ProfileError("descend needs a finite t >= 0")
    k = d - 2
    if t == 0:
        return float(f1(0.0)) * _cos_power_integral(k)
    breaks = [math.asin(b / t) for b in f1.breakpoints if 0 < b < t]
    h = lambda th: np.cos(th) ** k * np.asarray(f1(t * np.sin(th)), dtype=float)
    return integrate(h, 0.0, math.pi / 2, spec=spec, breakpoints=breaks).value


def _cos_power_integral(k: float) -> float:
    """int_0^{pi/2} cos^k = sqrt(pi) Gamma((k+1)/2) / (2 Gamma(k/2 + 1))."""
    return math.sqrt(math.pi) * math.gamma((k + 1) / 2) / (2 * math.gamma(k / 2 + 1))


def descend_many(f1: Profile, d: int, ts, spec: QuadratureSpec = DIMWALK_SPEC) -> np.ndarray:
    ts = np.asarray(ts, dtype=float)
    out = np.array([descend(f1, d, float(t), spec) for t in ts.ravel()])
    return out.reshape(ts.shape)


@dataclass(frozen=True, eq=False)
class DescendedProfile(Profile):
    """f_d as a profile, evaluated pointwise by quadrature."""
    f1: Profile
    d: int
    family = "descended"
    derivative_order_available = 0

    def __post_init__(self):
        _check_descent_dim(self.d)

    def __call__(self, t):
        t = self._check_t(t)
        out = descend_many(self.f1, self.d, t)
        return out if out.ndim else float(out)

    def d1(self, t):
        raise ProfileError("descended profiles carry no derivatives")

    d2 = d1

    def characteristic_length(self) -> float:
        return self.f1.characteristic_length()

    def to_json(self) -> dict:
        return {"family": self.family, "d": self.d, "f1": self.f1.to_json()}


def _falling(x: Fraction, n: int) -> Fraction:
    out = Fraction(1)
    for i in range(n):
        out *= x - i
    return out


def ascend_spline(poly: SplinePoly, d: int) -> SplinePoly:
    """Exact ascent of a truncated polynomial from R^d to R.

    The monomial t^k maps to 2 (d1 - 1/2 + k/2)_{(d1)} / (d1 - 1)! t^k, with
    (x)_{(n)} the falling factorial; the result vanishes past t = 1 as well.
    """
    d = _check_odd_dim(d)
    d1 = (d - 1) // 2
    coeffs = poly.expanded()
    half = Fraction(1, 2)
    out = [c * 2 * _falling(d1 - half + Fraction(k, 2), d1) / math.factorial(d1 - 1)
           for k, c in enumerate(coeffs)]
    # rewrite as (1 - t)^m' q(t) with the full multiplicity of the root t = 1
    s = SplinePoly(0, tuple(out)).s_coeffs
    m = 0
    while m < len(s) and s[m] == 0:
        m += 1
    if m == len(s):
        return SplinePoly(0, ())
    return SplinePoly.from_s(Fraction(m), s[m:])


class AscendEstimate(NamedTuple):
    value: float
    error: float
    stable: bool


def _central(phi, tau: float, n: int, h: float) -> float:
    nodes = tau + (np.arange(n + 1) - n / 2) * h
    w = np.array([(-1) ** (n - k) * math.comb(n, k) for k in range(n + 1)], dtype=float)
    return float(np.dot(w, np.asarray(phi(nodes), dtype=float))) / h ** n


def ascend_estimate(fd: Profile, d: int, u: float, rel_step: float | None = None,
                    rtol: float = 1e-6) -> AscendEstimate:
    """Numeric ascent by central differences with two Richardson levels.

    The step is eps^{1/(d1+4)} relative to tau = u^2; ``stable`` is false when
    the two extrapolants disagree by more than ``rtol``.
    """
    d = _check_odd_dim(d)
    if not u > 0:
        raise ProfileError("ascent needs u > 0")
    d1 = (d - 1) // 2
    tau = u * u
    c = rel_step if rel_step is not None else np.finfo(float).eps ** (1.0 / (d1 + 4))
    h = c * tau
    phi = lambda x: x ** (d1 - 0.5) * np.asarray(fd(np.sqrt(x)), dtype=float)
    D = [_central(phi, tau, d1, h / 2 ** j) for j in range(3)]
    r1 = (4 * D[1] - D[0]) / 3
    r2 = (4 * D[2] - D[1]) / 3
    scale = 2 * u / math.factorial(d1 - 1)
    err = abs(r2 - r1) * scale
    val = r2 * scale
    return AscendEstimate(val, err, err <= rtol * max(1.0, abs(val)))


def ascend_odd(fd: Profile, d: int, u: float, method: str = "auto") -> float:
    """f1(u) recovered from the radial profile f_d on R^d (d odd).

    ``method`` is ``exact`` (Spline profiles), ``numeric`` or ``auto``.
    """
    d = _check_odd_dim(d)
    if method not in ("auto", "exact", "numeric"):
        raise ValueError(f"unknown method {method!r}")
    if method == "exact" or (method == "auto" and isinstance(fd, Spline)):
        if not isinstance(fd, Spline):
            raise ProfileError("exact ascent needs a Spline profile")
        return float(ascend_spline(fd.poly, d)(u))
    return ascend_estimate(fd, d, u).value


def bessel_j(lam: float, t: float, normalized: bool = False,
             spec: QuadratureSpec = DIMWALK_SPEC) -> float:
    """j_lam(t) = int_0^1 (1 - u^2)^{lam - 1/2} cos(ut) du, with j_{-1/2} = cos.

    Computed as int_0^{pi/2} cos^{2 lam}(th) cos(t sin th) dth.  With
    ``normalized`` the value is divided by j_lam(0).
    """
    if lam == -0.5:
        return math.cos(t)
    if not lam > -0.5:
        raise ValueError("bessel_j needs lam > -1/2")
    if t < 0:
        t = -t
    h = lambda th: np.cos(th) ** (2 * lam) * np.cos(t * np.sin(th))
    pieces = max(1, int(math.ceil(t / math.pi)))
    breaks = [math.asin(k / pieces) for k in range(1, pieces)]
    val = integrate(h, 0.0, math.pi / 2, spec=spec, breakpoints=breaks).value
    return val / _cos_power_integral(2 * lam) if normalized else val


def support_moment_conditions(f1: Profile, d: int,
                              spec: QuadratureSpec = DIMWALK_SPEC) -> list[float]:
    """int_0^1 t^{2k} f1(t) dt for 0 <= k <= (d-3)/2.

    All of them vanish exactly when the descent to R^d vanishes past t = 1.
    """
    d = _check_odd_dim(d)
    if f1.support_radius > 1.0:
        raise ProfileError("moment conditions need f1 supported in [0, 1]")
    bps = [b for b in f1.breakpoints if 0 < b < 1]
    return [integrate(lambda t, k=k: t ** (2 * k) * np.asarray(f1(t), dtype=float), 0.0, 1.0,
                      spec=spec, breakpoints=bps).value for k in range((d - 1) // 2)]


def radial_sine_moments_3d(fd: Profile, s_values: Sequence[float],
                           spec: QuadratureSpec = QuadratureSpec(abs_tol=1e-11, rel_tol=1e-9)
                           ) -> np.ndarray:
    """int_0^inf f3(t) t sin(st) dt (Abel sums), the radial transform on R^3 up to 4 pi / s."""
    out = []
    for s in s_values:
        if s <= 0:
            raise ValueError("sine moments need s > 0")
        h = lambda t: t * np.asarray(fd(t), dtype=float)
        out.append(integrate(h, 0.0, math.inf, osc_freq=float(s), kind="sin", spec=spec).value)
    return np.array(out)
