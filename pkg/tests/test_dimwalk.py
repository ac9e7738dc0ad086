import math
from fractions import Fraction

import numpy as np
import pytest
from scipy.optimize import brentq
from scipy.special import j0

from maxradial.dimwalk import (
    DescendedProfile,
    RadialProfile,
    ascend_estimate,
    ascend_odd,
    ascend_spline,
    bessel_j,
    descend,
    radial_sine_moments_3d,
    support_moment_conditions,
)
from maxradial.profile import Exponential, PowerPlus, ProfileError, Spline, SplinePoly, zero_profile

PARABOLA = Spline(SplinePoly(1, (1, 1)).scale(Fraction(1, 2)))  # (1 - t^2)/2 on [0, 1]
A13 = Spline(SplinePoly(4, (1, 4)))
U = np.linspace(0.05, 0.95, 19)


def test_descend_parabola_to_three_dimensions():
    for t in (0.0, 0.2, 0.7, 1.0):
        assert descend(PARABOLA, 3, t) == pytest.approx(0.5 - t * t / 6, abs=1e-14)
    # past the support: (1/t) int_0^1 f1 = 1/(3t)
    assert descend(PARABOLA, 3, 2.0) == pytest.approx(1 / 6, abs=1e-14)


@pytest.mark.parametrize("d", [2, 3, 4, 7])
def test_descend_at_origin(d):
    from scipy.integrate import quad

    w = quad(lambda u: (1 - u * u) ** ((d - 3) / 2), 0, 1)[0]
    assert descend(Exponential(1.0), d, 0.0) == pytest.approx(w, rel=1e-10)


def test_descend_two_dimensions_matches_weighted_integral():
    from scipy.integrate import quad

    t = 1.3
    ref = quad(lambda u: math.exp(-u * t) / math.sqrt(1 - u * u), 0, 1, weight=None, limit=200)[0]
    assert descend(Exponential(1.0), 2, t) == pytest.approx(ref, rel=1e-9)


def test_descend_zero_and_bad_dimension():
    assert descend(zero_profile(), 5, 0.7) == 0.0
    with pytest.raises(ProfileError):
        descend(PARABOLA, 1, 0.5)
    with pytest.raises(ProfileError):
        RadialProfile(0, PARABOLA)


def test_round_trip_numeric():
    f3 = DescendedProfile(PARABOLA, 3)
    err = max(abs(ascend_odd(f3, 3, u) - PARABOLA(u)) for u in U)
    assert err <= 1e-6


def test_round_trip_exact_path():
    f1 = Spline(ascend_spline(A13.poly, 3))
    for u in U:
        assert descend(f1, 3, u) == pytest.approx(A13(u), abs=1e-13)


@pytest.mark.parametrize("d", [3, 5])
def test_exact_and_numeric_ascent_agree(d):
    A = Spline(SplinePoly(6, (1, 6, Fraction(35, 3))))
    err = max(abs(ascend_odd(A, d, u, "exact") - ascend_odd(A, d, u, "numeric")) for u in U)
    assert err <= (1e-8 if d == 3 else 1e-7)


def test_ascent_of_monomial_normalization():
    # t^k in R^3 comes from (k + 1) t^k in R
    q = ascend_spline(SplinePoly(0, (0, 0, 1)), 3)
    assert q.expanded() == [0, 0, 3]


def test_ascent_local_vanishing():
    # f_d = 0 near u: f1 = 0 there as well
    est = ascend_estimate(zero_profile(), 3, 0.5)
    assert est.value == 0.0 and est.stable


def test_ascent_flags_a_kink():
    # (1 - t)_+ has a kink at 1; differences across it disagree
    est = ascend_estimate(PowerPlus(1.0), 3, 1.0, rel_step=1e-2)
    assert not est.stable


def test_ascent_rejects_even_dimension():
    with pytest.raises(ProfileError):
        ascend_odd(A13, 4, 0.5)


def test_bessel_examples():
    assert bessel_j(0.5, 2.0) == pytest.approx(math.sin(2.0) / 2.0, abs=1e-15)
    assert bessel_j(-0.5, 1.3) == math.cos(1.3)
    assert bessel_j(0.0, 3.0) == pytest.approx(math.pi / 2 * j0(3.0), abs=1e-13)
    assert bessel_j(1.5, 0.0, normalized=True) == pytest.approx(1.0, abs=1e-14)
    assert bessel_j(0.7, 0.0) > 0
    with pytest.raises(ValueError):
        bessel_j(-0.7, 1.0)


@pytest.mark.parametrize("k", [1, 2, 5])
def test_bessel_half_zeros(k):
    root = brentq(lambda t: bessel_j(0.5, t), k * math.pi - 0.5, k * math.pi + 0.5, xtol=1e-14)
    assert abs(root - k * math.pi) <= 1e-10


def test_moment_condition_profile_vanishes_past_support():
    f1 = Spline(SplinePoly(0, (Fraction(-1, 3), 0, 1)))  # t^2 - 1/3
    assert abs(support_moment_conditions(f1, 3)[0]) <= 1e-15
    for t in (1.1, 2.0, 5.0):
        assert abs(descend(f1, 3, t)) <= 1e-8


def test_positive_moments_give_one_over_t_tail():
    (m0,) = support_moment_conditions(PARABOLA, 3)
    assert m0 == pytest.approx(1 / 3, abs=1e-15)
    assert descend(PARABOLA, 3, 5.0) == pytest.approx(m0 / 5.0, abs=1e-14)
    assert support_moment_conditions(zero_profile(), 5) == [0.0, 0.0]
    with pytest.raises(ProfileError):
        support_moment_conditions(Exponential(1.0), 3)


def test_positive_definiteness_transported_to_three_dimensions():
    f3 = DescendedProfile(Exponential(1.0, (1.0, 1.0)), 3)
    s = np.array([0.5, 2.0, 5.0])
    vals = radial_sine_moments_3d(f3, s)
    assert np.all(vals >= 0)
    np.testing.assert_allclose(vals, 2 / (s * (1 + s * s) ** 2), rtol=1e-6)
