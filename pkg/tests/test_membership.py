import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from maxradial.membership import (
    CONVERGENT,
    DIVERGENT,
    INCONCLUSIVE,
    astar_tail_profile,
    classify_ladder,
    indicator_profile,
    log_borderline_profile,
    remark3_radial_criterion,
    theorem3_sufficient,
    theorem4_criterion,
)
from maxradial.profile import Exponential, PowerPlus, ProfileError, Spline, SplinePoly, zero_profile


@pytest.mark.parametrize("alpha", [0.1, 0.5, 1.0, 2.0])
def test_power_profiles_converge(alpha):
    r = theorem4_criterion(PowerPlus(alpha))
    assert r.classification == CONVERGENT
    assert r.decay_rate == pytest.approx(alpha, rel=0.05)


def test_linear_profile_value():
    # int_0^1 ln(2/t) dt = 1 + ln 2
    r = theorem4_criterion(PowerPlus(1.0))
    assert r.value_if_convergent == pytest.approx(1 + math.log(2), abs=2 ** -20 * 16)


@pytest.mark.parametrize("p", [log_borderline_profile(), indicator_profile()])
def test_borderline_profiles_diverge(p):
    r = theorem4_criterion(p)
    assert r.classification == DIVERGENT
    assert r.value_if_convergent is None


def test_log_borderline_grows_linearly_in_log():
    assert theorem4_criterion(log_borderline_profile()).fitted_exponent == pytest.approx(1.0, abs=0.2)


def test_zero_profile_converges_to_zero():
    r = theorem4_criterion(zero_profile().__class__(SplinePoly(0, ())))
    assert r.classification == CONVERGENT and r.value_if_convergent == 0.0


def test_ladder_is_monotone_and_ordered():
    r = theorem4_criterion(PowerPlus(0.5))
    eps = [e for e, _ in r.epsilon_ladder]
    vals = [v for _, v in r.epsilon_ladder]
    assert all(a > b for a, b in zip(eps, eps[1:]))
    assert all(a <= b for a, b in zip(vals, vals[1:]))


def test_criterion_requires_unit_support():
    with pytest.raises(ProfileError):
        theorem4_criterion(Exponential(1.0))


@pytest.mark.parametrize("alpha, expected", [(0.6, CONVERGENT), (0.4, DIVERGENT)])
def test_radial_criterion(alpha, expected):
    assert remark3_radial_criterion(PowerPlus(alpha)).classification == expected


def test_max_norm_and_euclidean_gap():
    p = PowerPlus(0.4)
    assert theorem4_criterion(p).classification == CONVERGENT
    assert remark3_radial_criterion(p).classification == DIVERGENT


def test_classifier_rules():
    L = np.log(2.0) * np.arange(4, 21)
    assert classify_ladder(L, 1 - np.exp(-0.5 * L))[0] == CONVERGENT
    assert classify_ladder(L, np.exp(0.3 * L))[0] == DIVERGENT
    assert classify_ladder(L, L ** 1.5)[0] == DIVERGENT
    assert classify_ladder(L, np.zeros_like(L))[0] == CONVERGENT
    # slow growth I ~ L^0.1 is neither
    assert classify_ladder(L, L ** 0.1)[0] == INCONCLUSIVE
    with pytest.raises(ValueError):
        classify_ladder(L[:3], L[:3])


@settings(max_examples=25, deadline=None)
@given(st.floats(0.05, 3.0))
def test_classifier_decaying_density(beta):
    L = np.log(2.0) * np.arange(4, 21)
    assert classify_ladder(L, 1 - np.exp(-beta * L))[0] == CONVERGENT


def test_sufficient_integrals_exponential():
    r = theorem3_sufficient(Exponential(1.0))
    assert r.satisfied
    assert r.four_integrals[1] == pytest.approx(5 / math.e, rel=1e-9)


def test_sufficient_integrals_linear_profile():
    r = theorem3_sufficient(PowerPlus(1.0))
    # every integral finite, consistent with membership of (1 - max)_+
    assert r.satisfied
    exact = math.log(2) ** 2 + 2 * math.log(2) + 2
    eps = 2.0 ** -20  # ladder truncation: int_0^eps ln^2(2/t) dt
    missing = eps * (math.log(2 / eps) ** 2 + 2 * math.log(2 / eps) + 2)
    assert r.four_integrals[0] == pytest.approx(exact - missing, abs=1e-9)
    assert r.four_integrals[1] == 0.0


def test_sufficient_integrals_spline():
    assert theorem3_sufficient(Spline(SplinePoly(4, (1, 4)))).satisfied


def test_astar_linear_profile_diverges_logarithmically():
    r = astar_tail_profile(PowerPlus(1.0), np.linspace(0.5, 64, 1271), 128.0,
                           T_ladder=[8, 16, 32, 64])
    assert r.log_slope > 0 and r.log_r2 >= 0.98
    assert not r.boundary_flag
    # t S(t) stays bounded on the scan
    assert np.max(r.curve.grid * r.curve.values) < 10 * 64


def test_astar_exponential_also_grows():
    r = astar_tail_profile(Exponential(1.0), np.linspace(1.0, 32, 621), 64.0)
    assert r.log_slope == pytest.approx(4.0, rel=0.1)


def test_astar_zero_and_validation():
    r = astar_tail_profile(zero_profile(), np.linspace(1, 4, 7), 8.0)
    assert np.all(r.curve.values == 0.0)
    with pytest.raises(ValueError):
        astar_tail_profile(PowerPlus(1.0), [1.0, 2.0], 1.5)


def test_astar_flags_small_radius():
    # the transform of the linear profile is not monotone in the radius
    r = astar_tail_profile(PowerPlus(1.0), np.linspace(1.0, 8.0, 15), 8.2, radial_step=0.1)
    assert isinstance(r.boundary_flag, bool)
