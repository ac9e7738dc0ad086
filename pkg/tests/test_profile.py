import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from maxradial.profile import (
    Exponential,
    PowerPlus,
    ProfileError,
    SampledCurve,
    Spline,
    SplinePoly,
    Tabulated,
    build_f0_from_f1,
    build_f1,
    derivative,
    derivative_with_flag,
    evaluate,
    moment,
    modulus_l1,
    modulus_l1_ladder,
    profile_from_json,
    zero_profile,
)
from maxradial.quadrature import QuadratureSpec, integrate

TIGHT = QuadratureSpec(abs_tol=1e-13, rel_tol=1e-12)

A13 = Spline(SplinePoly(4, (1, 4)))


@pytest.mark.parametrize(
    "profile, t, expected",
    [
        (Exponential(1.0), 0.0, 1.0),
        (PowerPlus(2.0), 1.5, 0.0),
        (PowerPlus(3.0), 0.5, 0.125),
        (A13, 0.5, 0.0625 * 3.0),
    ],
)
def test_evaluate(profile, t, expected):
    assert evaluate(profile, t) == pytest.approx(expected, abs=1e-15)


def test_evaluate_rejects_negative_t():
    with pytest.raises(ProfileError):
        evaluate(PowerPlus(1.0), -0.1)


def test_derivatives():
    assert derivative(Exponential(1.0), 2.0) == pytest.approx(-math.exp(-2), rel=1e-14)
    assert derivative(PowerPlus(2.5), 0.3) == pytest.approx(-2.5 * 0.7 ** 1.5, rel=1e-14)
    assert derivative(PowerPlus(2.5), 0.3, order=2) == pytest.approx(2.5 * 1.5 * 0.7 ** 0.5)
    assert derivative(A13, 1 - 1e-9) == pytest.approx(0.0, abs=1e-20)


def test_breakpoint_returns_flagged_right_derivative():
    assert derivative_with_flag(PowerPlus(1.0), 1.0) == (0.0, True)
    assert derivative_with_flag(PowerPlus(1.0), 0.5) == (-1.0, False)
    assert derivative_with_flag(A13, 1.0) == (0.0, True)


def test_tabulated_derivative_by_finite_difference():
    g = np.linspace(0, 2, 2001)
    tab = Tabulated(SampledCurve(g, np.cos(g)), order=3)
    assert derivative(tab, 0.7) == pytest.approx(-math.sin(0.7), abs=1e-7)
    with pytest.raises(ProfileError):
        derivative(Tabulated(SampledCurve(g, np.cos(g)), order=1), 0.7, order=2)


def test_sampled_curve_validation_and_immutability():
    with pytest.raises(ProfileError):
        SampledCurve([0, 1, 1], [0, 0, 0])
    with pytest.raises(ProfileError):
        SampledCurve([0, 1], [0, np.nan])
    c = SampledCurve([0.0, 1.0], [1.0, 0.0])
    with pytest.raises(ValueError):
        c.values[0] = 3.0


def test_f1_of_exponential_is_symbolic():
    f1 = build_f1(Exponential(1.0))
    assert isinstance(f1, Exponential)
    t = np.linspace(0, 10, 11)
    np.testing.assert_allclose(f1(t), (1 + t) * np.exp(-t), rtol=1e-14)


@pytest.mark.parametrize("alpha", [0.5, 1.0, 2.5, 3.0])
def test_f1_of_power_constant_is_one_over_alpha_plus_one(alpha):
    f1 = build_f1(PowerPlus(alpha))
    t = np.linspace(0, 1.2, 13)
    expected = np.clip(1 - t, 0, None) ** alpha * (1 + alpha * t) / (alpha + 1)
    np.testing.assert_allclose(f1(t), expected, atol=1e-15)
    # brute-force oracle for the tail integral
    f0 = PowerPlus(alpha)
    for x in (0.2, 0.6):
        tail = integrate(f0, x, 1.0, spec=TIGHT).value
        assert f1(x) == pytest.approx(x * f0(x) + tail, abs=1e-10)


def test_f1_of_linear_profile():
    f1 = build_f1(PowerPlus(1.0))
    assert f1.poly.coeffs == (Fraction(1, 2), Fraction(1, 2))
    assert f1(0.0) == pytest.approx(0.5)


@pytest.mark.parametrize("profile", [Exponential(1.0), Exponential(2.0, (1.0, 0.5)),
                                     PowerPlus(3.0), A13])
def test_f1_derivative_is_t_times_f0_derivative(profile):
    f1 = build_f1(profile)
    for t in (0.1, 0.35, 0.8, 2.0):
        assert f1.d1(t) == pytest.approx(t * profile.d1(t), abs=1e-8)


@pytest.mark.parametrize("profile", [Exponential(1.0), PowerPlus(2.0), A13])
def test_f1_slope_at_zero_vanishes(profile):
    f1 = build_f1(profile)
    slopes = [abs(f1(h) - f1(0.0)) / h for h in (1e-2, 1e-3, 1e-4)]
    assert slopes[0] > slopes[1] > slopes[2]
    assert slopes[2] < 1e-3


@pytest.mark.parametrize("profile", [Exponential(1.0), PowerPlus(2.0)])
def test_f1_equals_minus_integral_of_u_f0_prime(profile):
    f1 = build_f1(profile)
    end = profile.support_radius
    for t in (0.25, 0.75):
        r = integrate(lambda u: -u * profile.d1(u), t, end)
        assert f1(t) == pytest.approx(r.value, abs=1e-9)


def test_f0_from_f1_exponential():
    f0 = build_f0_from_f1(Exponential(1.0, (1.0, 1.0)))
    assert f0(1.0) == pytest.approx(math.exp(-1), rel=1e-13)


def test_f0_from_f1_round_trip_linear():
    q = Spline(SplinePoly(1, (Fraction(1, 2), Fraction(1, 2))))
    f0 = build_f0_from_f1(q)
    t = np.linspace(0, 1, 100)
    np.testing.assert_allclose(f0(t), 1 - t, atol=1e-8)
    np.testing.assert_allclose(build_f1(f0)(t), q(t), atol=1e-8)


def test_f0_from_zero_and_singular_f1():
    assert np.all(build_f0_from_f1(zero_profile())(np.linspace(0, 2, 5)) == 0)
    with pytest.raises(ProfileError):
        build_f0_from_f1(PowerPlus(1.0))  # slope -1 at 0


def test_f0_from_tabulated_f1():
    g = np.linspace(0, 1, 401)
    tab = Tabulated(SampledCurve(g, (1 - g * g) / 2), order=3)
    f0 = build_f0_from_f1(tab)
    assert f0(0.5) == pytest.approx(0.5, abs=1e-6)


@pytest.mark.parametrize(
    "profile, power, expected",
    [(Exponential(1.0), 1, 1.0), (PowerPlus(1.0), 1, 1 / 6), (zero_profile(), 0, 0.0),
     (PowerPlus(2.0), 1, 1 / 12), (Exponential(2.0), 0, 0.5)],
)
def test_moment(profile, power, expected):
    assert moment(profile, power) == pytest.approx(expected, abs=1e-12)


def test_absolute_moment_of_sign_changing_spline():
    p = Spline(SplinePoly(1, (1, -3)))  # (1-t)(1-3t)
    assert moment(p, 0) == pytest.approx(0.5 - 1.5 + 1, abs=1e-12)
    assert moment(p, 0, absolute=True) > moment(p, 0)


def test_modulus_of_indicator_derivative():
    assert modulus_l1(PowerPlus(1.0), 0.25) == pytest.approx(0.25, abs=1e-10)
    assert modulus_l1(PowerPlus(1.0), 0.0) == 0.0
    values, deltas = modulus_l1_ladder(PowerPlus(1.0), [0.1, 0.5, 3.0])
    np.testing.assert_allclose(values[:2], [0.1, 0.5], atol=1e-10)
    assert values[2] == pytest.approx(1.0, abs=1e-10)
    assert np.all(deltas <= np.array([0.1, 0.5, 3.0]) * (1 + 1e-12))


@pytest.mark.parametrize("profile", [Exponential(1.0), PowerPlus(2.0), A13])
def test_modulus_clamped_by_twice_the_norm(profile):
    norm = integrate(lambda u: np.abs(profile.d1(u)), 0.0,
                     profile.integration_end(), breakpoints=profile.breakpoints).value
    values, _ = modulus_l1_ladder(profile, [0.01, 0.3, 5.0, 50.0])
    assert np.all(values <= 2 * norm + 1e-9)
    assert np.all(np.diff(values) >= 0)


def test_json_round_trip():
    for p in (PowerPlus(1.5), Exponential(2.0), Exponential(1.0, (1.0, 1.0)), A13):
        q = profile_from_json(p.to_json())
        assert q == p
    tab = profile_from_json({"family": "table", "grid": [0, 1], "values": [1, 0]})
    assert tab(0.5) == pytest.approx(0.5)
    with pytest.raises(ProfileError):
        profile_from_json({"family": "power", "alpha": -1})
    with pytest.raises(ProfileError):
        profile_from_json({"family": "bessel"})


@settings(max_examples=30, deadline=None)
@given(st.lists(st.fractions(min_value=-3, max_value=3, max_denominator=7), min_size=1, max_size=4),
       st.integers(0, 4))
def test_splinepoly_expansion_matches_float_evaluation(coeffs, m):
    sp = SplinePoly(m, tuple(coeffs))
    full = sp.expanded()
    t = np.array([0.0, 0.2, 0.55, 0.9])
    poly = np.polynomial.polynomial.polyval(t, [float(c) for c in full]) if full else 0 * t
    np.testing.assert_allclose(sp(t), poly, atol=1e-12)
