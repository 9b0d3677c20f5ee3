import math

import numpy as np
import pytest
from numpy.testing import assert_allclose
from pydantic import ValidationError

from oscillator_entropy import entropy as entropy_module
from oscillator_entropy.entropy import (
    BBM_PER_DIMENSION,
    ENTROPY_ERROR_BUDGET,
    FAMILIES,
    StateSpec,
    configuration_state,
    energy,
    entropy_1d,
    entropy_1d_with_error,
    entropy_functional,
    entropy_functional_scaled,
    entropy_report,
    i1_component,
    i2_component,
    i3_component,
    log_potential,
    log_potential_scaled,
    momentum_entropy,
    position_entropy,
    root_kernel_sums,
    uncertainty_sum,
)
from oscillator_entropy.errors import SeriesRangeError
from oscillator_entropy.hermite import hermite_roots
from oscillator_entropy.special import EULER_GAMMA

LN_PI = math.log(math.pi)
S0 = 0.5 * (1.0 + LN_PI)
S1 = math.log(2.0) + 0.5 * LN_PI + EULER_GAMMA - 0.5
SQRT_PI = math.sqrt(math.pi)


def state(*ns, alpha=1.0):
    return StateSpec.from_occupations(ns, alpha)


def random_states(count=50, seed=20240601):
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(count):
        dims = int(rng.integers(1, 6))
        ns = [int(v) for v in rng.integers(0, 7, size=dims)]
        out.append(state(*ns, alpha=float(rng.uniform(0.1, 10.0))))
    return out


# ---------------------------------------------------------------------
#  StateSpec
# ---------------------------------------------------------------------
def test_state_spec_total_and_defaults():
    s = StateSpec(dims=3, occupations=[2, 0, 5])
    assert s.total == 7
    assert s.alpha == 1.0
    assert s.occupations == (2, 0, 5)


@pytest.mark.parametrize(
    "kwargs",
    [
        dict(dims=2, occupations=[1]),
        dict(dims=1, occupations=[-1]),
        dict(dims=1, occupations=[0], alpha=0.0),
        dict(dims=1, occupations=[0], alpha=-2.0),
        dict(dims=1, occupations=[0], alpha=math.inf),
        dict(dims=0, occupations=[]),
    ],
)
def test_state_spec_rejects_invalid_input(kwargs):
    with pytest.raises(ValidationError):
        StateSpec(**kwargs)


def test_state_spec_is_immutable():
    s = state(1, 2)
    with pytest.raises(ValidationError):
        s.alpha = 3.0


# ---------------------------------------------------------------------
#  Components and energy
# ---------------------------------------------------------------------
def test_energy():
    assert energy(state(0)) == 0.5
    assert energy(state(0, 0, 0)) == 1.5
    assert energy(state(2, 1, alpha=4.0)) == 16.0


def test_i1_component():
    assert_allclose(i1_component(state(0)), 0.5 * LN_PI, rtol=1e-15)
    assert_allclose(i1_component(state(1)), math.log(2.0) + 0.5 * LN_PI, rtol=1e-15)
    assert abs(i1_component(state(0, 0, alpha=math.pi))) < 1e-15


def test_i2_component_ignores_alpha():
    assert i2_component(state(0)) == 0.5
    assert i2_component(state(1, 1, 1)) == 4.5
    assert i2_component(state(3, 1, alpha=7.0)) == i2_component(state(3, 1))


@pytest.mark.parametrize("s", [state(0), state(1), state(2), state(3, 0, 1, alpha=2.5), state(7, alpha=0.3)])
def test_components_add_up_to_position_entropy(s):
    total = i1_component(s) + i2_component(s) + i3_component(s)
    assert abs(total - position_entropy(s)) <= 1e-10


# ---------------------------------------------------------------------
#  One-dimensional values
# ---------------------------------------------------------------------
def test_entropy_1d_closed_values():
    assert abs(entropy_1d(0) - S0) <= 1e-12
    assert abs(entropy_1d(1) - S1) <= 1e-12
    assert abs(entropy_1d(2) - 1.4986092356) <= 1e-6


def test_entropy_1d_error_estimates_are_small():
    for n in range(0, 16):
        _, err = entropy_1d_with_error(n)
        assert 0.0 <= err < 1e-10


def test_double_precision_agrees_for_small_degrees():
    for n in range(1, 6):
        assert abs(entropy_1d(n, precision="double") - entropy_1d(n, precision="extended")) <= 1e-10


def test_entropy_1d_rejects_negative_degree():
    with pytest.raises(ValueError):
        entropy_1d(-1)


@pytest.mark.parametrize("n", [16, 30, 45, 60])
def test_high_degrees_stay_within_budget_and_above_the_bound(n):
    value, err = entropy_1d_with_error(n)
    assert err <= ENTROPY_ERROR_BUDGET
    assert 2.0 * value > BBM_PER_DIMENSION
    # S_1 grows with the degree
    assert value > entropy_1d(n - 1)


def test_fast_and_wide_sums_agree_at_the_switch():
    limit = entropy_module._FAST_DEGREE_LIMIT["extended"]
    points = hermite_roots(limit).nonnegative()
    fast, fast_err = entropy_module._binomial_f11_sum(limit, points, "extended")
    wide, wide_err = entropy_module._binomial_f11_sum_mp(limit, points)
    assert abs(fast - wide) <= fast_err + wide_err + 1e-12


def test_error_budget_is_enforced(monkeypatch):
    # pair accumulation alone cannot absorb the cancellation at n = 60
    monkeypatch.setitem(entropy_module._FAST_DEGREE_LIMIT, "extended", 1000)
    root_kernel_sums.cache_clear()
    try:
        with pytest.raises(SeriesRangeError):
            entropy_1d(60, precision="extended")
        with pytest.raises(SeriesRangeError):
            position_entropy(state(60))
    finally:
        root_kernel_sums.cache_clear()


def test_root_kernel_sums_are_memoized():
    assert root_kernel_sums(4, "extended") is root_kernel_sums(4, "extended")
    zero = root_kernel_sums(0, "extended")
    assert zero.f22_sum == 0.0 and zero.f11_sum == 0.0


# ---------------------------------------------------------------------
#  Log potential and the entropy functional
# ---------------------------------------------------------------------
def test_log_potential_at_origin():
    expected = 2.0 * SQRT_PI * (math.log(2.0) + 0.5 * EULER_GAMMA - 1.0)
    assert_allclose(log_potential(1, 0.0), expected, rtol=1e-12)


def test_log_potential_is_continuous():
    assert abs(log_potential(1, 1e-8) - log_potential(1, 0.0)) <= 1e-12


def test_log_potential_needs_positive_degree():
    with pytest.raises(ValueError):
        log_potential_scaled(0, 0.5)


def test_log_potential_overflow_is_reported():
    with pytest.raises(SeriesRangeError):
        log_potential(160, 0.0)


def test_entropy_functional_low_degrees():
    assert entropy_functional(0) == 0.0
    assert entropy_functional_scaled(0) == 0.0
    assert_allclose(entropy_functional(1), 2.0 * SQRT_PI * (2.0 - EULER_GAMMA), rtol=1e-12)


@pytest.mark.parametrize("n", [2, 3, 5])
def test_entropy_functional_from_log_potential_at_zeros(n):
    norm = 2.0 ** n * math.factorial(n) * SQRT_PI
    zeros = hermite_roots(n).roots
    expected = norm * 2 * n * math.log(2.0) - 2.0 * math.fsum(log_potential(n, x) for x in zeros)
    assert_allclose(entropy_functional(n), expected, rtol=1e-10)


def test_log_potential_is_stationary_at_zeros():
    x = hermite_roots(3).roots[-1]
    h = 1e-4
    slope = (log_potential_scaled(3, x + h).value - log_potential_scaled(3, x - h).value) / (2 * h)
    assert abs(slope) < 1e-6


# ---------------------------------------------------------------------
#  D-dimensional entropies
# ---------------------------------------------------------------------
def test_ground_state_closed_form():
    for dims in (1, 2, 3, 10, 100):
        for alpha in (0.25, 1.0, 4.0):
            s = StateSpec(dims=dims, occupations=[0] * dims, alpha=alpha)
            expected = 0.5 * dims * math.log(math.e * math.pi / alpha)
            assert abs(position_entropy(s) - expected) <= 1e-12
            assert abs(uncertainty_sum(s) - dims * BBM_PER_DIMENSION) <= 1e-12


def test_worked_examples():
    assert_allclose(position_entropy(state(0, 0, 0)), 3.2170948, atol=1e-7)
    assert_allclose(position_entropy(state(1, 0)), 2.4150927, atol=1e-7)
    assert_allclose(position_entropy(state(2, alpha=4.0)), 1.4986092356 - math.log(2.0), atol=1e-6)
    assert_allclose(momentum_entropy(state(0, alpha=4.0)), 0.5 * math.log(4 * math.e * math.pi), atol=1e-12)
    assert_allclose(uncertainty_sum(state(0, 0, 0, 0, 0)), 10.7236494, atol=1e-7)
    assert_allclose(uncertainty_sum(state(1, alpha=3.3)), 2 * S1, atol=1e-12)


def test_separability():
    for dims in range(1, 7):
        for top in range(0, 6):
            ns = [(top + i) % 6 for i in range(dims)]
            s = state(*ns, alpha=1.7)
            expected = math.fsum(entropy_1d(n) for n in ns) - 0.5 * dims * math.log(1.7)
            assert abs(position_entropy(s) - expected) <= 1e-11


@pytest.mark.parametrize("s", random_states())
def test_alpha_scaling_and_duality(s):
    unit = s.with_alpha(1.0)
    shift = 0.5 * s.dims * math.log(s.alpha)
    assert abs(position_entropy(s) - position_entropy(unit) + shift) <= 1e-12
    assert abs(momentum_entropy(s) - position_entropy(s.with_alpha(1.0 / s.alpha))) <= 1e-12
    assert abs(uncertainty_sum(s) - uncertainty_sum(unit)) <= 1e-11


@pytest.mark.parametrize("s", random_states(count=20, seed=7))
def test_bbm_bound(s):
    bound = s.dims * BBM_PER_DIMENSION
    value = uncertainty_sum(s)
    assert value >= bound - 1e-10
    if s.total > 0:
        assert value > bound + 1e-6


def test_uncertainty_sum_is_identical_across_alpha():
    assert uncertainty_sum(state(2, 1, alpha=0.3)) == uncertainty_sum(state(2, 1, alpha=9.0))


def test_permutation_symmetry():
    a = position_entropy(state(2, 0, 1, 4))
    b = position_entropy(state(4, 1, 2, 0))
    assert abs(a - b) <= 1e-12


def test_entropy_report_consistency():
    s = state(3, 0, 2, alpha=0.7)
    report = entropy_report(s)
    assert len(report.per_dimension_position) == 3
    assert abs(math.fsum(report.per_dimension_position) - report.position_entropy) <= report.abs_error_estimate + 1e-14
    assert abs(report.position_entropy + report.momentum_entropy - report.uncertainty_sum) <= 1e-12
    assert report.uncertainty_sum >= 3 * BBM_PER_DIMENSION - report.abs_error_estimate
    assert report.energy == energy(s)
    assert abs(report.position_entropy - position_entropy(s)) <= 1e-12


# ---------------------------------------------------------------------
#  Configuration families
# ---------------------------------------------------------------------
def test_configuration_states():
    assert configuration_state("ground", 3).occupations == (0, 0, 0)
    assert configuration_state("one-excited", 3).occupations == (1, 0, 0)
    assert configuration_state("all-but-one", 3).occupations == (1, 1, 0)
    assert configuration_state("all-but-one", 1).occupations == (0,)
    assert configuration_state("all-ones", 2, alpha=2.0).alpha == 2.0
    with pytest.raises(ValueError):
        configuration_state("sideways", 2)
    with pytest.raises(ValueError):
        configuration_state("ground", 0)


@pytest.mark.parametrize("family", FAMILIES)
def test_families_increase_with_dimension(family):
    values = [position_entropy(configuration_state(family, d)) for d in range(1, 16)]
    assert all(b > a for a, b in zip(values, values[1:]))


def test_ground_stays_below_all_ones():
    for d in range(1, 16):
        ground = position_entropy(configuration_state("ground", d))
        ones = position_entropy(configuration_state("all-ones", d))
        assert ground < ones
