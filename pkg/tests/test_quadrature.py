import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from maxradial.quadrature import (
    QuadratureError,
    QuadratureSpec,
    filon_transform,
    graded_edges,
    integrate,
)


@pytest.mark.parametrize("t", [0.01, 0.5, 1.0, 7.3, 120.0])
def test_exponential_sine_transform(t):
    r = integrate(lambda u: np.exp(-u), 0.0, math.inf, osc_freq=t, kind="sin")
    assert r.converged
    assert r.value == pytest.approx(t / (1 + t * t), abs=1e-10)


def test_sine_at_pi_over_unit_interval():
    r = integrate(lambda u: 1 - u, 0.0, 1.0, osc_freq=math.pi, kind="sin")
    assert r.value == pytest.approx(1 / math.pi, abs=1e-12)


def test_constant_non_oscillatory():
    assert integrate(lambda u: np.ones_like(u), 0.0, 1.0).value == pytest.approx(1.0, abs=1e-14)


def test_empty_range_and_bad_requests():
    assert integrate(np.sin, 2.0, 2.0).value == 0.0
    with pytest.raises(QuadratureError):
        integrate(np.sin, 1.0, 0.0)
    with pytest.raises(QuadratureError):
        integrate(np.sin, 0.0, 1.0, osc_freq=1.0, kind="tan")
    with pytest.raises(ValueError):
        QuadratureSpec(abs_tol=0.0)


def test_low_frequency_routed_without_splitting():
    r = integrate(lambda u: np.exp(-u), 0.0, math.inf, osc_freq=1e-9, kind="cos")
    assert r.value == pytest.approx(1.0, abs=1e-10)


def test_complex_weight():
    r = integrate(lambda u: np.exp(-u), 0.0, math.inf, osc_freq=2.0, kind="exp")
    assert isinstance(r.value, complex)
    assert r.value == pytest.approx(1 / (1 - 2j), abs=1e-10)


def test_abel_sum_of_non_decaying_amplitude():
    # int_0^inf (2 - (2+u)e^{-u}) sin(2u) du in the Abel sense
    r = integrate(lambda u: 2 - (2 + u) * np.exp(-u), 0.0, math.inf, osc_freq=2.0, kind="sin")
    assert r.value == pytest.approx(2 / (2 * 25), abs=1e-8)


def test_exhausted_budget_is_flagged():
    spec = QuadratureSpec(abs_tol=1e-15, rel_tol=1e-15, max_subdivisions=3)
    r = integrate(lambda u: np.abs(u - 0.3) ** 0.1, 0.0, 1.0, spec=spec)
    assert not r.converged
    assert math.isfinite(r.value)


def test_breakpoints_do_not_move_the_value():
    h = lambda u: np.abs(u - 0.37)
    plain = integrate(h, 0.0, 1.0)
    split = integrate(h, 0.0, 1.0, breakpoints=[0.37])
    assert abs(plain.value - split.value) <= plain.error + split.error + 1e-14


@settings(max_examples=25, deadline=None)
@given(st.floats(-3, 3), st.floats(-3, 3), st.floats(0.1, 20))
def test_linearity(alpha, beta, t):
    h1 = lambda u: (1 - u) ** 2
    h2 = lambda u: np.exp(u)
    lhs = integrate(lambda u: alpha * h1(u) + beta * h2(u), 0.0, 1.0, osc_freq=t, kind="cos").value
    rhs = (alpha * integrate(h1, 0.0, 1.0, osc_freq=t, kind="cos").value
           + beta * integrate(h2, 0.0, 1.0, osc_freq=t, kind="cos").value)
    assert abs(lhs - rhs) <= 2e-10


def test_filon_matches_closed_form():
    s = np.array([1e-3, 0.5, 3.0, 40.0, 900.0])
    edges = np.linspace(0.0, 40.0, 81)
    got = filon_transform(lambda u: np.exp(-u), edges, s, kind="sin")
    assert np.max(np.abs(got - s / (1 + s * s))) < 1e-13
    got = filon_transform(lambda u: np.exp(-u), edges, s, kind="cos")
    assert np.max(np.abs(got - 1 / (1 + s * s))) < 1e-13


def test_filon_agrees_with_adaptive_on_singular_profile():
    edges = graded_edges(0.0, 1.0, 0.05, singular=[1.0])
    s = np.array([0.7, 5.0, 31.0])
    got = filon_transform(lambda u: np.sqrt(np.clip(1 - u, 0, None)), edges, s, kind="sin")
    ref = [integrate(lambda u: np.sqrt(1 - u), 0.0, 1.0, osc_freq=x, kind="sin",
                     spec=QuadratureSpec(abs_tol=1e-13, rel_tol=1e-12)).value for x in s]
    assert np.max(np.abs(got - ref)) < 1e-11


def test_graded_edges_refine_towards_singular_point():
    e = graded_edges(0.0, 1.0, 0.25, singular=[1.0])
    assert e[0] == 0.0 and e[-1] == 1.0
    assert np.all(np.diff(e) > 0)
    assert 1.0 - e[-2] < 1e-13
