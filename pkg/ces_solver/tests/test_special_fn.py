import cmath
import math

import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from ces_solver.exceptions import (
    ConvergenceError,
    DegenerateConnectionError,
    DomainError,
    GammaPoleError,
    HypergeometricError,
)
from ces_solver.special_fn import (
    Hyp2F1Params,
    connection_coefficients,
    gamma,
    gamma_ratio,
    hyp2f1,
    hyp2f1_derivative,
    hyp2f1_series,
    kummer_connection,
    log_gamma,
    reciprocal_gamma,
)

from .utils import relative

GENERIC = Hyp2F1Params(0.3 + 0.4j, -0.2 + 0.1j, 1.7 + 0.2j)


def test_gamma_known_values():
    assert relative(gamma(0.5), math.sqrt(math.pi)) < 1e-13
    assert relative(gamma(5), 24) < 1e-13
    assert relative(abs(gamma(1 + 1j)), math.sqrt(math.pi / math.sinh(math.pi))) < 1e-13


@given(st.floats(min_value=0.1, max_value=50.0))
def test_gamma_matches_math_on_the_real_line(x):
    assert relative(gamma(x), math.gamma(x)) < 1e-12


@pytest.mark.parametrize("pole", [0, -1, -3, -3 + 1e-14])
def test_gamma_poles(pole):
    with pytest.raises(GammaPoleError):
        gamma(pole)
    with pytest.raises(GammaPoleError):
        log_gamma(pole)
    assert reciprocal_gamma(pole) == 0


def test_log_gamma_known_values():
    assert abs(log_gamma(1)) < 1e-13
    assert abs(log_gamma(2)) < 1e-13
    assert relative(log_gamma(10), math.log(362880)) < 1e-13


@pytest.mark.parametrize(
    "z, value",
    [(-0.5, -2 * math.sqrt(math.pi)), (-1.5, 4 * math.sqrt(math.pi) / 3), (-2.5, -8 * math.sqrt(math.pi) / 15)],
)
def test_log_gamma_is_the_principal_logarithm(z, value):
    result = log_gamma(z)
    assert result.real == pytest.approx(math.log(abs(value)), abs=1e-13)
    assert result.imag == pytest.approx(0.0 if value > 0 else math.pi, abs=1e-12)


@given(
    st.floats(min_value=-10.0, max_value=30.0),
    st.floats(min_value=-40.0, max_value=40.0),
)
def test_log_gamma_imaginary_part_is_principal(re, im):
    z = complex(re, im)
    assume(abs(z - round(re)) > 0.05)
    assert -math.pi < log_gamma(z).imag <= math.pi


@given(
    st.floats(min_value=-10.0, max_value=30.0),
    st.floats(min_value=-10.0, max_value=10.0),
)
def test_log_gamma_exponentiates_to_gamma(re, im):
    z = complex(re, im)
    assume(abs(z - round(re)) > 0.05)
    assert relative(cmath.exp(log_gamma(z)), gamma(z)) < 1e-10


@given(
    st.floats(min_value=-3.0, max_value=3.0),
    st.floats(min_value=-2.0, max_value=2.0),
)
def test_gamma_reflection(re, im):
    z = complex(re, im)
    assume(abs(z - round(re)) > 0.05)
    assert relative(gamma(z) * gamma(1 - z) * cmath.sin(math.pi * z), math.pi) < 1e-10


def test_gamma_ratio_vanishes_on_denominator_poles():
    assert gamma_ratio([1.5], [-2]) == 0
    assert relative(gamma_ratio([5], [3]), 12) < 1e-13


@pytest.mark.parametrize("c", [0, -2])
def test_hypergeometric_undefined_for_non_positive_c(c):
    with pytest.raises(HypergeometricError):
        Hyp2F1Params(0.5, 0.5, c)


def test_hyp2f1_known_values():
    assert hyp2f1(GENERIC, 0.0) == 1
    assert relative(hyp2f1(Hyp2F1Params(1, 1, 2), 0.5), 2 * math.log(2)) < 1e-14


@pytest.mark.parametrize("z", [0.3, 0.8, 0.97])
def test_hyp2f1_with_c_equal_to_b(z):
    a = 0.3 + 0.2j
    p = Hyp2F1Params(a, 1.4 - 0.5j, 1.4 - 0.5j)
    assert relative(hyp2f1(p, z), cmath.exp(-a * math.log(1 - z))) < 1e-12


@pytest.mark.parametrize("z", [0.05, 0.2, 0.35, 0.45])
def test_series_and_connection_agree(z):
    assert relative(kummer_connection(GENERIC, z), hyp2f1_series(GENERIC, z)) < 1e-11
    assert relative(hyp2f1(GENERIC, z, method="connection"), hyp2f1(GENERIC, z)) < 1e-11


def test_series_and_connection_agree_past_the_switch():
    assert relative(hyp2f1(GENERIC, 0.8, method="series"), hyp2f1(GENERIC, 0.8)) < 1e-11


def test_complement_is_used_near_one():
    value = hyp2f1(GENERIC, 1.0, complement=1e-12)
    assert relative(value, hyp2f1(GENERIC, 1 - 1e-12)) < 1e-3
    with pytest.raises(DomainError):
        hyp2f1(GENERIC, 1.0)


@pytest.mark.parametrize("z", [-0.1, 1.5])
def test_argument_outside_the_unit_interval(z):
    with pytest.raises(DomainError):
        hyp2f1(GENERIC, z)


def test_unknown_method():
    with pytest.raises(ValueError):
        hyp2f1(GENERIC, 0.3, method="mystery")


def test_gauss_summation():
    p = Hyp2F1Params(0.3, 0.2, 2.0)
    exact = gamma_ratio([p.c, p.excess], [p.c - p.a, p.c - p.b])
    assert relative(hyp2f1(p, 1 - 1e-6, complement=1e-6), exact) < 1e-5


def test_connection_coefficients_sum_to_gauss_limit():
    first, second = connection_coefficients(Hyp2F1Params(0.3, 0.2, 2.0))
    assert relative(first, gamma_ratio([2.0, 1.5], [1.7, 1.8])) < 1e-13
    assert second != 0


def test_degenerate_connection():
    p = Hyp2F1Params(0.5, 0.5, 1.0)
    with pytest.raises(DegenerateConnectionError):
        kummer_connection(p, 0.7)
    with pytest.raises(DegenerateConnectionError):
        hyp2f1(p, 0.7)

    fallback = hyp2f1(p, 0.7, limit_fallback=True)
    assert relative(fallback, hyp2f1_series(p, 0.7)) < 1e-8


def test_series_convergence_failure():
    with pytest.raises(ConvergenceError):
        hyp2f1_series(GENERIC, 0.99, max_terms=10)


@pytest.mark.parametrize("z", [0.3, 0.7])
def test_derivative_matches_difference_quotient(z):
    h = 1e-5
    estimate = (hyp2f1(GENERIC, z + h) - hyp2f1(GENERIC, z - h)) / (2 * h)
    assert relative(hyp2f1_derivative(GENERIC, z), estimate) < 1e-8


def test_derivative_of_terminating_series():
    assert hyp2f1_derivative(Hyp2F1Params(0, 1.5, 2.5), 0.4) == 0
