import math

import numpy as np
import pytest

from maxradial.profile import Exponential, PowerPlus, ProfileError
from maxradial.summability import (
    Generator,
    fit_log_power,
    generator_from_json,
    kernel,
    kernel_l1_norm,
    midpoint_grid,
    periodization_check,
    profile_generator,
    riesz_generator,
    sample_multiplier,
    sharp_generator,
)

EXP = profile_generator(Exponential(1.0))


def test_riesz_field_values():
    f = sample_multiplier(riesz_generator(1, 1), n=4)
    assert f.values.shape == (9, 9)
    np.testing.assert_allclose(f.profile_1d(), [1, 0.75, 0.5, 0.25, 0])
    assert f.at(-3, 1) == 0.25 and f.at(7, 0) == 0.0
    np.testing.assert_array_equal(f.values, f.values[::-1, :])
    np.testing.assert_array_equal(f.values, f.values.T)


def test_exponential_tail_budget():
    f = sample_multiplier(EXP, eps=0.5, K=40)
    assert f.tail_sup < 1e-8
    assert f.tail_flag  # the lattice sum of the tail is about 1e-6
    auto = sample_multiplier(EXP, eps=0.5)
    assert auto.tail_sum <= 1e-12 and not auto.tail_flag


def test_trivial_field():
    f = sample_multiplier(profile_generator(PowerPlus(1.0)), n=1)
    assert f.K == 1
    assert f.at(0, 0) == 1.0 and np.count_nonzero(f.values) == 1
    k = kernel(f, midpoint_grid(16))
    np.testing.assert_allclose(k.values, 1.0, atol=1e-15)


def test_kernel_mean_and_reality():
    f = sample_multiplier(riesz_generator(2, 1.5), n=7)
    k = kernel(f, midpoint_grid(64))
    assert k.imag_residue < 1e-12
    assert np.mean(k.values) == pytest.approx(f.at(0, 0), abs=1e-13)


@pytest.mark.parametrize("eps", [0.1, 0.5, 1.0])
def test_exponential_kernel_nonnegative(eps):
    k = kernel(sample_multiplier(EXP, eps=eps), midpoint_grid(256))
    assert k.values.min() >= -1e-9


def test_kernel_matches_product_of_fejer_kernels():
    # (1 - max(|k1|,|k2|)/n)_+ is not a product, but the sharp cut is: D_n(x1) D_n(x2)
    n = 5
    x = midpoint_grid(32)
    k = kernel(sample_multiplier(sharp_generator(), n=n), x).values
    d = np.sin((n + 0.5) * x) / np.sin(x / 2)
    np.testing.assert_allclose(k, np.outer(d, d), atol=1e-11)


def test_fejer_row_is_nonnegative():
    n, x = 9, np.linspace(-math.pi, math.pi, 1001)
    j = np.arange(-n, n + 1)
    fej = np.cos(np.outer(x, j)) @ np.clip(1 - np.abs(j) / n, 0, None)
    assert fej.min() >= -1e-12


def test_l1_norm_of_delta_is_one():
    r = kernel_l1_norm(sample_multiplier(sharp_generator(), n=0.5), grid_density=32)
    assert r.value == pytest.approx(1.0, abs=1e-14)


def test_riesz_means_have_bounded_norms():
    norms = [kernel_l1_norm(sample_multiplier(riesz_generator(1, 1), n=n)).value
             for n in (4, 8, 16, 32)]
    assert max(norms) < 2.0
    assert all(b - a < 0.1 for a, b in zip(norms, norms[1:]))


def test_sharp_cut_norm_is_squared_lebesgue_constant():
    from scipy.integrate import quad

    n = 8
    leb = quad(lambda x: abs(math.sin((n + 0.5) * x) / math.sin(x / 2)), 0, math.pi,
               limit=400)[0] / math.pi
    r = kernel_l1_norm(sample_multiplier(sharp_generator(), n=n))
    assert r.value == pytest.approx(leb ** 2, abs=5 * r.error + 1e-6)


def test_fit_log_power():
    ns = np.array([8, 16, 32, 64])
    out = fit_log_power(ns, 3 * np.log(ns) ** 2)
    assert out["exponent"] == pytest.approx(2.0, abs=1e-12)
    assert out["r_squared"] == pytest.approx(1.0)
    shifted = fit_log_power(ns, (np.log(ns) + 2.0) ** 2)
    assert shifted["shifted_exponent"] == pytest.approx(2.0, abs=0.05)


def test_periodization_exponential():
    r = periodization_check(Exponential(1.0), 0.7, 40)
    assert r.samples["1,1"] == pytest.approx(math.exp(-0.7), abs=1e-15)
    assert abs(r.poisson_coefficients["1,1"] - math.exp(-0.7)) <= 1e-4
    assert abs(r.poisson_coefficients["0,0"] - 1.0) <= 1e-4
    assert not r.flagged


def test_periodization_flags_short_lattice():
    r = periodization_check(Exponential(1.0), 0.05, 40)
    assert r.flagged and r.lattice_tail > 1.0


def test_generator_json_and_validation():
    assert generator_from_json({"kind": "riesz", "alpha": 2, "beta": 1}).alpha == 2.0
    assert generator_from_json({"family": "exp", "lambda": 1}).kind == "profile"
    assert generator_from_json({"kind": "sharp"}).to_json() == {"kind": "sharp"}
    with pytest.raises(ProfileError):
        generator_from_json({"kind": "nope"})
    with pytest.raises(ValueError):
        Generator("riesz", alpha=0.0)
    with pytest.raises(ValueError):
        sample_multiplier(EXP)
