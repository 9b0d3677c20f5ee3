import math

import mpmath
import numpy as np
import pytest
from numpy.testing import assert_allclose
from scipy.special import dawsn

from oscillator_entropy.errors import SeriesRangeError
from oscillator_entropy.special import (
    ERROR_BUDGET,
    binomial_root_weight,
    f11_direct,
    f11_kernel,
    f22_kernel,
    ln_factorial,
)


@pytest.fixture(autouse=True)
def mp_precision():
    mpmath.mp.dps = 40


def test_f22_at_zero():
    result = f22_kernel(0.0)
    assert result.value == 1.0
    assert result.abs_error_estimate == 0.0


@pytest.mark.parametrize("x", [0.3, 1.0 / math.sqrt(2.0), 1.9, 2.5, 4.0, 6.3, 6.4, 10.0, 25.0])
def test_f22_matches_mpmath(x):
    result = f22_kernel(x)
    reference = float(mpmath.hyp2f2(1, 1, 1.5, 2, -x * x))
    assert abs(result.value - reference) <= 1e-12
    assert result.abs_error_estimate <= ERROR_BUDGET


def test_f22_known_value():
    assert_allclose(f22_kernel(1.0 / math.sqrt(2.0)).value, 0.8533712085, atol=1e-10)


@pytest.mark.parametrize("x", [0.5, 1.5, 3.0, 9.0])
def test_f22_double_precision_mode(x):
    result = f22_kernel(x, precision="double")
    reference = float(mpmath.hyp2f2(1, 1, 1.5, 2, -x * x))
    assert abs(result.value - reference) <= 1e-12


def test_f22_is_even():
    assert f22_kernel(-3.3).value == f22_kernel(3.3).value


def test_f11_against_dawson_identity():
    # 1F1(1; 1/2; -x^2) = 1 - 2x F(x)
    for x in np.linspace(0.0, 10.0, 100):
        value = f11_kernel(1, float(x)).value
        assert abs(value - (1.0 - 2.0 * x * dawsn(x))) <= 1e-10


@pytest.mark.parametrize("k", [1, 2, 3, 7, 15])
@pytest.mark.parametrize("x", [0.5, 2.0, 6.0, 12.0, 20.0])
def test_f11_matches_mpmath(k, x):
    result = f11_kernel(k, x)
    reference = float(mpmath.hyp1f1(k, 0.5, -x * x))
    assert abs(result.value - reference) <= 1e-12


def test_f11_known_values():
    x = 1.0 / math.sqrt(2.0)
    assert_allclose(f11_kernel(1, x).value, 0.2752215408, atol=1e-10)
    assert_allclose(f11_kernel(2, x).value, -0.2247784589, atol=1e-10)


def test_kummer_form_agrees_with_direct_series():
    for k in range(1, 11):
        for x in np.linspace(0.0, 5.0, 11):
            kummer = f11_kernel(k, float(x))
            direct = f11_direct(k, float(x))
            assert abs(kummer.value - direct.value) <= 1e-11 + direct.abs_error_estimate


def test_f11_double_mode_small_argument():
    reference = float(mpmath.hyp1f1(2, 0.5, -1.0))
    assert abs(f11_kernel(2, 1.0, precision="double").value - reference) <= 1e-12


def test_f11_out_of_range_raises():
    with pytest.raises(SeriesRangeError) as info:
        f11_kernel(3, 40.0)
    assert isinstance(info.value, ArithmeticError)


def test_kernels_reject_bad_arguments():
    with pytest.raises(ValueError):
        f22_kernel(math.inf)
    with pytest.raises(ValueError):
        f11_kernel(0, 1.0)
    with pytest.raises(ValueError):
        f11_direct(0, 1.0)


def test_binomial_root_weight():
    assert float(binomial_root_weight(3, 2)) == 6.0
    assert float(binomial_root_weight(5, 5)) == -6.4
    assert float(binomial_root_weight(2, 1)) == -4.0
    with pytest.raises(ValueError):
        binomial_root_weight(3, 0)


def test_ln_factorial():
    assert ln_factorial(0) == 0.0
    assert_allclose(ln_factorial(10), math.log(3628800), rtol=1e-15)
    assert_allclose(ln_factorial(2000), math.lgamma(2001), rtol=1e-15)
    with pytest.raises(ValueError):
        ln_factorial(-1)


@pytest.mark.parametrize("k", range(2, 11))
def test_f11_contiguous_relation(k):
    # (b-a) M(a-1) + (2a-b+z) M(a) - a M(a+1) = 0 with b = 1/2, z = -x^2
    x = 1.3
    z = -x * x
    below, here, above = (f11_kernel(j, x).value for j in (k - 1, k, k + 1))
    coefficients = (0.5 - k, 2 * k - 0.5 + z, -k)
    residual = math.fsum(c * v for c, v in zip(coefficients, (below, here, above)))
    assert abs(residual) <= 1e-11 * math.fsum(abs(c) for c in coefficients)


def test_ln_factorial_steps_by_ln_n():
    for n in range(1, 2001):
        step = ln_factorial(n) - ln_factorial(n - 1)
        assert abs(step - math.log(n)) <= 1e-14 * ln_factorial(n) + 1e-15
