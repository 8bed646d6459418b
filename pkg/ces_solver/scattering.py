"""
Scattering off V± on the half line.

The physical solution vanishes at x = 0 and behaves like
S e^{iωx} - e^{-iωx} far away. S is available three ways: the closed Gamma
function formula, the connection coefficients of the boundary solutions, and
a fit of the exact solution's far field to free waves.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from logging import getLogger
from typing import Optional, Sequence, Tuple

import numpy as np

from .exceptions import FitError, ParameterError
from .potentials import Sign
from .solutions import (
    Branch,
    Coordinate,
    SolutionSample,
    SpectralParams,
    make_params,
    solution_v_sample,
    solution_v_x,
)
from .special_fn import Hyp2F1Params, connection_coefficients, gamma_ratio, log_gamma

log = getLogger(__name__)

FIT_POINTS = (30.0, 33.0, 36.0)
MAX_CONDITION = 1e8
CROSS_TOLERANCE = 1e-4

CLOSED_FORM = "closed form"
DERIVED = "derived by m -> -m from the V+ construction"
FITTED = "asymptotic fit"


@dataclass(frozen=True)
class ScatteringResult:
    amplitude: complex
    phase_shift: float
    modulus_error: float
    provenance: str = CLOSED_FORM

    @classmethod
    def from_amplitude(cls, amplitude: complex, provenance: str = CLOSED_FORM):
        return cls(
            amplitude=amplitude,
            phase_shift=cmath.phase(amplitude),
            modulus_error=abs(abs(amplitude) - 1),
            provenance=provenance,
        )


def _check_scattering_parameters(omega, m):
    if not omega > 0:
        raise ParameterError(f"omega must be positive, got {omega}.")
    if not m > 0:
        raise ParameterError(f"m must be positive, got {m}.")


# Physical solutions


def _boundary_pair(sign, v, p, complement, method, physical):
    s = Sign.parse(sign).value
    k = p.m / p.gamma1
    first = solution_v_sample(Branch.I, sign, v, p, complement=complement, method=method)
    second = solution_v_sample(Branch.II, sign, v, p, complement=complement, method=method)
    coefficient = s * k if physical else -s * k
    return (
        first.value + coefficient * second.value,
        first.derivative + coefficient * second.derivative,
    )


def physical_solution(sign, v: float, p: SpectralParams, *, complement=None, method="auto") -> complex:
    """Y±ᴵᴵ = Z̃ᴵ ± (m/γ₁)Z̃ᴵᴵ, the solution that vanishes at x = 0."""
    return _boundary_pair(sign, v, p, complement, method, physical=True)[0]


def physical_solution_plus(v: float, p: SpectralParams) -> complex:
    return physical_solution(Sign.PLUS, v, p)


def companion_solution(sign, v: float, p: SpectralParams) -> complex:
    """Y±ᴵ = Z̃ᴵ ∓ (m/γ₁)Z̃ᴵᴵ, which tends to 2 at x = 0."""
    return _boundary_pair(sign, v, p, None, "auto", physical=False)[0]


def physical_solution_x(sign, x: float, p: SpectralParams) -> SolutionSample:
    s = Sign.parse(sign).value
    k = p.m / p.gamma1
    first = solution_v_x(Branch.I, sign, x, p)
    second = solution_v_x(Branch.II, sign, x, p)
    return SolutionSample(
        x,
        first.value + s * k * second.value,
        first.derivative + s * k * second.derivative,
        Coordinate.X,
    )


# Amplitudes


def _gamma_product(*arguments) -> complex:
    return cmath.exp(sum(log_gamma(a) for a in arguments))


def closed_form_amplitude(omega: float, m: float) -> complex:
    """
    S = Γ(1/2+2iω) 2^{8iω} / Γ(1/2-2iω)
        · Γ(-2α)Γ(-2β) / (Γ(2α)Γ(2β))
        · [mΓ(α)Γ(β) + Γ(1/2+α)Γ(1/2+β)] / [mΓ(-α)Γ(-β) + Γ(1/2-α)Γ(1/2-β)]

    with α, β = iω ± i sqrt(m² + ω²). Only the bracket depends on the sign
    of m, so closed_form_amplitude(ω, -m) belongs to V₋.
    """
    if m == 0:
        raise ParameterError("m must be nonzero.")
    root = math.hypot(m, omega)
    alpha = 1j * omega + 1j * root
    beta = 1j * omega - 1j * root

    prefactor = gamma_ratio([0.5 + 2j * omega], [0.5 - 2j * omega]) * cmath.exp(
        8j * omega * math.log(2)
    )
    ratio = gamma_ratio([-2 * alpha, -2 * beta], [2 * alpha, 2 * beta])
    numerator = m * _gamma_product(alpha, beta) + _gamma_product(0.5 + alpha, 0.5 + beta)
    denominator = m * _gamma_product(-alpha, -beta) + _gamma_product(0.5 - alpha, 0.5 - beta)
    return prefactor * ratio * numerator / denominator


def connection_amplitude(sign, omega: float, m: float) -> complex:
    """
    S read off the connection formula. Y±ᴵᴵ = (P₁ - P₂) ± (m/γ₁)(Q₁ - Q₂);
    near x = ∞ P₁ and Q₁ leave only their e^{iωx} parts and P₂ and Q₂ their
    e^{-iωx} parts.
    """
    s = Sign.parse(sign).value
    p = make_params(omega, m)
    k = p.m / p.gamma1

    def shifted(alpha, beta, gamma):
        return Hyp2F1Params(alpha - gamma + 1, beta - gamma + 1, 2 - gamma)

    _, outgoing = connection_coefficients(Hyp2F1Params(p.alpha1, p.beta1, p.gamma1))
    _, outgoing_q = connection_coefficients(shifted(p.alpha1, p.beta1, p.gamma1))
    incoming, _ = connection_coefficients(Hyp2F1Params(p.alpha2, p.beta2, p.gamma2))
    incoming_q, _ = connection_coefficients(shifted(p.alpha2, p.beta2, p.gamma2))
    return (outgoing + s * k * outgoing_q) / (incoming + s * k * incoming_q)


def scattering_amplitude_plus(omega: float, m: float) -> ScatteringResult:
    _check_scattering_parameters(omega, m)
    return ScatteringResult.from_amplitude(closed_form_amplitude(omega, m), CLOSED_FORM)


def scattering_amplitude_minus(omega: float, m: float) -> ScatteringResult:
    """
    The V₋ amplitude by the same construction as for V₊. It coincides with
    closed_form_amplitude(omega, -m).
    """
    _check_scattering_parameters(omega, m)
    return ScatteringResult.from_amplitude(connection_amplitude(Sign.MINUS, omega, m), DERIVED)


# Asymptotic decomposition


def _free_wave_matrix(x, omega):
    outgoing = cmath.exp(1j * omega * x)
    incoming = cmath.exp(-1j * omega * x)
    return np.array([[outgoing, incoming], [1j * omega * outgoing, -1j * omega * incoming]])


def asymptotic_fit(
    samples: Sequence[SolutionSample], omega: float, *, cross_tolerance: float = CROSS_TOLERANCE
) -> Tuple[complex, complex]:
    """
    Decompose a far field solution as c_out e^{iωx} + c_in e^{-iωx}.

    The coefficients come from the value and derivative at the first sample;
    every other sample must agree with them to ``cross_tolerance``, relative
    to |c_out| + |c_in|.
    """
    samples = list(samples)
    if len(samples) < 2:
        raise FitError(f"An asymptotic fit needs at least 2 samples, got {len(samples)}.")
    if any(s.variable is not Coordinate.X for s in samples):
        raise FitError("Asymptotic fits need samples in x.")

    first = samples[0]
    matrix = _free_wave_matrix(first.coord, omega)
    condition = np.linalg.cond(matrix)
    if condition > MAX_CONDITION:
        raise FitError(f"Free wave system is ill conditioned (cond = {condition:.3g}).")
    c_out, c_in = np.linalg.solve(matrix, np.array([first.value, first.derivative]))

    scale = abs(c_out) + abs(c_in)
    for sample in samples[1:]:
        predicted = _free_wave_matrix(sample.coord, omega) @ np.array([c_out, c_in])
        mismatch = max(
            abs(predicted[0] - sample.value), abs(predicted[1] - sample.derivative) / omega
        )
        if mismatch > cross_tolerance * scale:
            raise FitError(
                f"Sample at x = {sample.coord} disagrees with the fit by {mismatch / scale:.3g}."
            )
        log.debug("Fit cross-check at x=%s: %.3g", sample.coord, mismatch / scale)
    return complex(c_out), complex(c_in)


def fitted_amplitude(
    sign, omega: float, m: float, xs: Sequence[float] = FIT_POINTS, *, params: Optional[SpectralParams] = None
) -> ScatteringResult:
    """S = -c_out/c_in from the far field of the exact physical solution."""
    p = params or make_params(omega, m)
    samples = [physical_solution_x(sign, x, p) for x in xs]
    c_out, c_in = asymptotic_fit(samples, omega)
    return ScatteringResult.from_amplitude(-c_out / c_in, FITTED)
