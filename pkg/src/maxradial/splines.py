"""Compactly supported positive definite splines.

A_{r,d}(t) = (1 - t)_+^m (1 + a_1 t + ... + a_r t^r), m = 2r + (d+1)/2, where
the a_k make the coefficients of t, t^3, ..., t^{2r-1} vanish, and the
family h_{mu,nu}(x) = (1 - x)_+^{mu+nu-1} int_0^1 t^{mu-1} (1-t)^{nu-1}
(1 - t + (1 + t) x)^{nu-1} dt.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple

import numpy as np

from .dimwalk import ascend_spline
from .profile import PowerPlus, Spline, SplinePoly, build_f1
from .quadrature import QuadratureSpec, integrate
from .transform import cosine_transform_many

__all__ = [
    "SplineSpec",
    "HmuNuSpec",
    "SplineCheck",
    "construct_A",
    "verify_A_properties",
    "printed_A2_variant",
    "compare_A2_variants",
    "example2_bridge",
    "eval_h_mu_nu",
    "h_mu_nu_many",
    "solve_rational",
]


@dataclass(frozen=True)
class SplineSpec:
    r: int
    d: int

    def __post_init__(self):
        if int(self.r) != self.r or self.r < 0:
            raise ValueError("r must be a nonnegative integer")
        if int(self.d) != self.d or self.d < 1 or self.d % 2 == 0:
            raise ValueError("d must be an odd positive integer")

    @property
    def m(self) -> Fraction:
        return Fraction(2 * self.r + (self.d + 1) // 2)

    @property
    def claimed_degree(self) -> int:
        return 3 * self.r + (self.d + 1) // 2


@dataclass(frozen=True)
class HmuNuSpec:
    mu: float
    nu: float

    def __post_init__(self):
        if not (self.mu > 0 and self.nu > 0):
            raise ValueError("mu and nu must be positive")


def solve_rational(a: list[list[Fraction]], b: list[Fraction]) -> list[Fraction]:
    """Gaussian elimination over the rationals; raises on a singular matrix."""
    n = len(b)
    m = [list(row) + [rhs] for row, rhs in zip(a, b)]
    for col in range(n):
        piv = next((i for i in range(col, n) if m[i][col] != 0), None)
        if piv is None:
            raise ArithmeticError("singular rational system")
        m[col], m[piv] = m[piv], m[col]
        for i in range(n):
            if i != col and m[i][col] != 0:
                f = m[i][col] / m[col][col]
                m[i] = [x - f * y for x, y in zip(m[i], m[col])]
    return [m[i][n] / m[i][i] for i in range(n)]


def construct_A(spec: SplineSpec) -> SplinePoly:
    """A_{r,d} from the odd-coefficient conditions, exactly."""
    r, m = spec.r, int(spec.m)
    c = [Fraction((-1) ** i * math.comb(m, i)) for i in range(m + r + 1)]
    coef = lambda i: c[i] if 0 <= i <= m else Fraction(0)
    # coefficient of t^j in (1-t)^m (1 + sum a_k t^k) is c_j + sum_k a_k c_{j-k}
    rows = [[coef(j - k) for k in range(1, r + 1)] for j in range(1, 2 * r, 2)]
    rhs = [-coef(j) for j in range(1, 2 * r, 2)]
    a = solve_rational(rows, rhs) if r else []
    return SplinePoly(spec.m, (Fraction(1), *a))


class SplineCheck(NamedTuple):
    odd_coefficients: tuple[Fraction, ...]
    parity_ok: bool
    boundary_order: int
    boundary_ok: bool
    smoothness: int
    degree: Fraction
    claimed_degree: int
    degree_matches: bool
    min_cos_1d: float
    min_cos_d: float
    pd_1d: bool
    pd_d: bool

    def to_json(self) -> dict:
        out = self._asdict()
        out["odd_coefficients"] = [str(c) for c in self.odd_coefficients]
        out["degree"] = str(self.degree)
        return out


def _cos_scan_min(q: SplinePoly, points: int, periods: float) -> tuple[float, float]:
    """Minimum of int_0^1 q cos(xt) dt on [0, 2 pi periods] and its maximum.

    The maximum sets the scale: ascended profiles have zero mean for d >= 3.
    """
    xs = np.linspace(0.0, 2 * math.pi * periods, points)
    v = cosine_transform_many(Spline(q), xs)
    return float(v.min()), float(np.abs(v).max())


def verify_A_properties(A: SplinePoly, spec: SplineSpec, points: int = 4096,
                        periods: float = 50.0, rel_tol: float = 1e-9) -> SplineCheck:
    """Exact parity and boundary checks; numeric positive definiteness scans.

    PD on R^1 is judged from the cosine transform of A itself and PD on R^d
    from the cosine transform of its exact ascent to one dimension.
    """
    full = A.expanded()
    get = lambda j: full[j] if j < len(full) else Fraction(0)
    odd = tuple(get(j) for j in range(1, 2 * spec.r, 2))
    first_odd = next((j for j in range(1, len(full) + 1, 2) if get(j) != 0), None)
    s = SplinePoly(0, tuple(full)).s_coeffs if full else []
    boundary = next((j for j, c in enumerate(s) if c != 0), len(s))
    need = math.ceil(spec.m)
    smooth_0 = math.inf if first_odd is None else first_odd - 1
    smoothness = int(min(smooth_0, boundary - 1))
    min1, top1 = _cos_scan_min(A, points, periods)
    f1 = ascend_spline(A, spec.d) if spec.d > 1 else A
    mind, topd = _cos_scan_min(f1, points, periods)
    return SplineCheck(
        odd_coefficients=odd,
        parity_ok=all(c == 0 for c in odd),
        boundary_order=boundary,
        boundary_ok=boundary >= need,
        smoothness=smoothness,
        degree=A.degree,
        claimed_degree=spec.claimed_degree,
        degree_matches=A.degree == spec.claimed_degree,
        min_cos_1d=min1,
        min_cos_d=mind,
        pd_1d=min1 >= -rel_tol * top1,
        pd_d=mind >= -rel_tol * topd,
    )


def printed_A2_variant(d: int) -> SplinePoly:
    """(1-t)^{(d+7)/2} (1 + (d+7)/2 t + (d+5)(d+9)/12 t^2)."""
    SplineSpec(2, d)
    return SplinePoly(Fraction(d + 7, 2), (Fraction(1), Fraction(d + 7, 2),
                                           Fraction((d + 5) * (d + 9), 12)))


def compare_A2_variants(d: int) -> dict:
    """Checks of the canonical A_{2,d} and the printed variant side by side."""
    spec = SplineSpec(2, d)
    canonical = construct_A(spec)
    printed = printed_A2_variant(d)
    report = {"d": d}
    for name, poly in (("canonical", canonical), ("printed", printed)):
        chk = verify_A_properties(poly, spec)
        report[name] = {"poly": poly.to_json(), "check": chk.to_json()}
    lower = construct_A(SplineSpec(2, d - 2)) if d >= 3 else None
    report["printed_equals_canonical_d_minus_2"] = lower is not None and lower == printed
    return report


def example2_bridge(alpha: int) -> dict:
    """f1 of (1 - t)_+^alpha against A_{1,d}, d = 2 alpha - 5.

    Returns the proportionality constant when the two are proportional.
    """
    if int(alpha) != alpha or alpha < 3:
        raise ValueError("alpha must be an integer >= 3")
    q = build_f1(PowerPlus(float(alpha))).poly
    A = construct_A(SplineSpec(1, 2 * alpha - 5))
    ratio = None
    if q.m == A.m and len(q.coeffs) == len(A.coeffs):
        r = q.coeffs[0] / A.coeffs[0]
        if all(x == r * y for x, y in zip(q.coeffs, A.coeffs)):
            ratio = r
    return {"alpha": alpha, "d": 2 * alpha - 5, "f1": q.to_json(), "A": A.to_json(),
            "proportional": ratio is not None, "constant": None if ratio is None else str(ratio)}


H_SPEC = QuadratureSpec(abs_tol=1e-15, rel_tol=1e-13, max_subdivisions=4000)


def eval_h_mu_nu(spec: HmuNuSpec, x: float, qspec: QuadratureSpec = H_SPEC) -> float:
    """h_{mu,nu}(x) for x >= 0.

    The interval is split at 1/2; t = v^{1/mu} on the left and
    1 - t = w^{1/kappa} on the right (kappa = nu, or 2 nu - 1 at x = 0)
    absorb the endpoint powers.
    """
    if x < 0:
        raise ValueError("h is evaluated for x >= 0")
    if x >= 1:
        return 0.0
    mu, nu = spec.mu, spec.nu
    third = lambda t: (1 - t + (1 + t) * x) ** (nu - 1)

    def left(v):
        t = v ** (1 / mu)
        return (1 - t) ** (nu - 1) * third(t) / mu

    if x == 0:
        if nu <= 0.5:
            return math.inf
        kappa = 2 * nu - 1
        right_w = lambda w: (1 - w ** (1 / kappa)) ** (mu - 1) / kappa
    else:
        kappa = nu

        def right_w(w):
            t = 1 - w ** (1 / kappa)
            return t ** (mu - 1) * third(t) / kappa

    lo = integrate(left, 0.0, 0.5 ** mu, spec=qspec).value
    hi = integrate(right_w, 0.0, 0.5 ** kappa, spec=qspec).value
    return (1 - x) ** (mu + nu - 1) * (lo + hi)


def h_mu_nu_many(spec: HmuNuSpec, xs) -> np.ndarray:
    xs = np.asarray(xs, dtype=float)
    return np.array([eval_h_mu_nu(spec, float(x)) for x in xs.ravel()]).reshape(xs.shape)
