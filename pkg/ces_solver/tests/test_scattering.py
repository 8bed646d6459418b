import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings

from ces_solver.exceptions import FitError, ParameterError
from ces_solver.potentials import Sign
from ces_solver.scattering import (
    CLOSED_FORM,
    DERIVED,
    FITTED,
    ScatteringResult,
    asymptotic_fit,
    closed_form_amplitude,
    companion_solution,
    connection_amplitude,
    fitted_amplitude,
    physical_solution,
    physical_solution_plus,
    scattering_amplitude_minus,
    scattering_amplitude_plus,
)
from ces_solver.solutions import Coordinate, SolutionSample, make_params

from .utils import omegas, positive_ms, relative


def free_wave_samples(omega, c_out, c_in, xs=(30.0, 33.0, 36.0)):
    return [
        SolutionSample(
            x,
            c_out * cmath.exp(1j * omega * x) + c_in * cmath.exp(-1j * omega * x),
            1j * omega * (c_out * cmath.exp(1j * omega * x) - c_in * cmath.exp(-1j * omega * x)),
        )
        for x in xs
    ]


@settings(max_examples=50)
@given(omegas, positive_ms)
def test_unitarity_plus(omega, m):
    result = scattering_amplitude_plus(omega, m)
    assert result.modulus_error < 1e-10
    assert result.provenance == CLOSED_FORM
    assert result.phase_shift == pytest.approx(cmath.phase(result.amplitude))


@pytest.mark.parametrize("omega, m", [(0.5, 0.5), (1.0, 2.0), (3.0, 1.0)])
def test_unitarity_minus(omega, m):
    result = scattering_amplitude_minus(omega, m)
    assert result.modulus_error < 1e-8
    assert result.provenance == DERIVED


@pytest.mark.parametrize("omega, m", [(0.5, 0.5), (1.0, 1.0), (2.0, 0.5)])
def test_connection_amplitudes_match_closed_forms(omega, m):
    assert relative(connection_amplitude(Sign.PLUS, omega, m), closed_form_amplitude(omega, m)) < 1e-9
    assert relative(connection_amplitude(Sign.MINUS, omega, m), closed_form_amplitude(omega, -m)) < 1e-9


@pytest.mark.parametrize("sign", Sign)
@pytest.mark.parametrize("omega, m", [(1.0, 1.0), (0.5, 2.0)])
def test_fitted_amplitudes_match_closed_forms(sign, omega, m):
    expected = closed_form_amplitude(omega, sign.value * m)
    result = fitted_amplitude(sign, omega, m)
    assert result.provenance == FITTED
    assert abs(result.amplitude - expected) < 1e-5


def test_fitted_amplitude_reuses_parameters():
    p = make_params(1.0, 1.0)
    assert fitted_amplitude("plus", 1.0, 1.0, params=p) == fitted_amplitude("plus", 1.0, 1.0)


@pytest.mark.parametrize("omega, m", [(0.0, 1.0), (-1.0, 1.0), (1.0, 0.0), (1.0, -1.0)])
def test_amplitudes_need_positive_parameters(omega, m):
    with pytest.raises(ParameterError):
        scattering_amplitude_plus(omega, m)
    with pytest.raises(ParameterError):
        scattering_amplitude_minus(omega, m)


def test_closed_form_needs_nonzero_m():
    with pytest.raises(ParameterError):
        closed_form_amplitude(1.0, 0.0)


def test_from_amplitude():
    result = ScatteringResult.from_amplitude(2j)
    assert result.phase_shift == pytest.approx(math.pi / 2)
    assert result.modulus_error == pytest.approx(1.0)
    assert result.provenance == CLOSED_FORM


def test_fit_of_an_outgoing_wave():
    c_out, c_in = asymptotic_fit(free_wave_samples(1.3, 1, 0), 1.3)
    assert abs(c_out - 1) < 1e-12
    assert abs(c_in) < 1e-12


def test_fit_of_a_standing_wave():
    c_out, c_in = asymptotic_fit(free_wave_samples(0.7, 1 / 2j, -1 / 2j), 0.7)
    assert abs(c_out - 1 / 2j) < 1e-12
    assert abs(c_in + 1 / 2j) < 1e-12


def test_fit_needs_two_samples():
    with pytest.raises(FitError):
        asymptotic_fit(free_wave_samples(1.0, 1, 0)[:1], 1.0)


def test_fit_needs_samples_in_x():
    samples = [SolutionSample(0.5, 1, 0, Coordinate.V), SolutionSample(0.6, 1, 0, Coordinate.V)]
    with pytest.raises(FitError):
        asymptotic_fit(samples, 1.0)


def test_fit_rejects_inconsistent_samples():
    samples = free_wave_samples(1.0, 1, 0)[:2] + free_wave_samples(1.0, 1, 0.1)[2:]
    with pytest.raises(FitError):
        asymptotic_fit(samples, 1.0)


def test_fit_rejects_ill_conditioned_systems():
    with pytest.raises(FitError):
        asymptotic_fit(free_wave_samples(1e-9, 1, 0), 1e-9)


@pytest.mark.parametrize("sign", Sign)
@pytest.mark.parametrize("omega, m", [(0.5, 0.5), (2.0, 2.0)])
def test_boundary_behaviour(sign, omega, m):
    p = make_params(omega, m)
    for v in (1e-5, 1e-6):
        assert abs(physical_solution(sign, v, p)) <= (2 * omega + 1) * v
        assert abs(companion_solution(sign, v, p) - 2) <= 8 * m * math.sqrt(v)


def test_physical_solution_grows_linearly():
    p = make_params(1.0, 1.0)
    for v in (1e-6, 1e-7):
        assert abs(physical_solution_plus(v, p) / v - 2j * p.omega) < 1e-2


@pytest.mark.parametrize("sign", Sign)
def test_physical_solution_across_the_seam(sign):
    p = make_params(1.0, 2.0)
    for v in (0.9, 0.6):
        assert relative(physical_solution(sign, v, p, method="series"), physical_solution(sign, v, p)) < 1e-9


def test_amplitude_grid():
    grid = np.linspace(0.25, 4, 10)
    errors = [scattering_amplitude_plus(omega, m).modulus_error for omega in grid for m in grid]
    assert max(errors) < 1e-10
