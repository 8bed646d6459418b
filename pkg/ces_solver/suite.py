"""
The verification suite: every closed form in the package held against the
numerical oracle.

The suite is a Composer. The spectral parameter sets, the seed and the
tolerance scale are graph nodes, and each check is a composer test that
returns a VerificationReport.
"""
import cmath
import itertools
import math
import os
from logging import getLogger
from typing import List

import numpy as np
from littleutils import strip_required_prefix

from .exceptions import ParameterError
from .graph import Composer
from .oracle import (
    VerificationReport,
    appendix_check,
    central_derivative,
    coupled_residual,
    ode_residual_v,
    ode_residual_z,
    report_from_residuals,
    wronskian_numeric,
)
from .potentials import (
    PotentialSpec,
    Sign,
    landmarks,
    potential,
    potential_derivative_minus,
    superpotential,
)
from .scattering import (
    closed_form_amplitude,
    companion_solution,
    connection_amplitude,
    fitted_amplitude,
    physical_solution,
    scattering_amplitude_minus,
    scattering_amplitude_plus,
)
from .solutions import (
    Branch,
    ZeroEnergy,
    anchored_method,
    make_params,
    rtilde_pair_derivatives,
    rtilde_pair_I,
    rtilde_pair_II,
    solution_v_sample,
    solution_v_x,
    solution_x,
    solution_z_sample,
    wronskian_closed,
    wronskian_v_closed,
    zero_energy_hypergeometric,
    zero_energy_partner,
    zero_energy_state,
)
from .special_fn import (
    Hyp2F1Params,
    gamma,
    gamma_ratio,
    hyp2f1,
    hyp2f1_series,
    kummer_connection,
)

log = getLogger(__name__)

DEFAULT_OMEGAS = (0.5, 1.0, 2.0)
DEFAULT_MS = (0.5, 1.0, 2.0)
DEFAULT_SEED = 2024
LOOSE_SCALE = 100.0
TOLERANCE_VARIABLE = "CES_SOLVER_TOL"

CHECK_XS = (0.5, 1.0, 2.0, 5.0, 10.0)
RESIDUAL_GRID = np.linspace(0.05, 0.95, 100)
DRAWS = 25
APPENDIX_CASES = ((1.0, 1.0), (2.0, 0.5))
APPENDIX_SEEDS = 5
APPENDIX_GRID = np.linspace(0.5, 5, 10)


def tolerance_scale_from_environment(environ=None) -> float:
    """The factor CES_SOLVER_TOL applies to every tolerance, 1 when unset."""
    environ = os.environ if environ is None else environ
    raw = environ.get(TOLERANCE_VARIABLE, "").strip()
    if not raw:
        return 1.0
    try:
        value = float(raw)
    except ValueError:
        raise ParameterError(f"{TOLERANCE_VARIABLE} must be a number, got '{raw}'.")
    if not (value > 0 and math.isfinite(value)):
        raise ParameterError(f"{TOLERANCE_VARIABLE} must be positive and finite, got {value}.")
    return value


def _rng(seed, salt):
    return np.random.default_rng([seed, salt])


def _fold(name, reports, tolerance, detail="") -> VerificationReport:
    reports = list(reports)
    residuals = [r.max_residual for r in reports]
    worst = report_from_residuals(name, residuals, tolerance, detail).max_residual
    return VerificationReport(name, worst, tolerance, sum(r.samples for r in reports), detail=detail)


def _relative(value, reference):
    return abs(value - reference) / abs(reference)


def _balanced(terms):
    scale = max(abs(t) for t in terms)
    return abs(sum(terms)) / scale if scale else 0.0


# Shared nodes


def parameter_sets(omegas, ms, c1_perturbation):
    sets = []
    for omega, m in itertools.product(omegas, ms):
        p = make_params(omega, m)
        if c1_perturbation:
            p = p.perturbed(c1=c1_perturbation)
        sets.append(p)
    return sets


# Checks on the exact solutions


def check_schrodinger_z(parameter_sets, tolerance_scale):
    reports = []
    for p, branch, sign in itertools.product(parameter_sets, Branch, Sign):

        def f(z, center, branch=branch, sign=sign, p=p):
            return solution_z_sample(branch, sign, z, p, method=anchored_method(center))

        reports.append(
            ode_residual_z(f, PotentialSpec(p.m, sign), p.omega, RESIDUAL_GRID, anchored=True)
        )
    return _fold("schrodinger_z", reports, 1e-8 * tolerance_scale)


def check_schrodinger_v(parameter_sets, tolerance_scale):
    reports = []
    for p, branch, sign in itertools.product(parameter_sets, Branch, Sign):

        def f(v, center, branch=branch, sign=sign, p=p):
            return solution_v_sample(branch, sign, v, p, method=anchored_method(center))

        reports.append(
            ode_residual_v(f, PotentialSpec(p.m, sign), p.omega, RESIDUAL_GRID, anchored=True)
        )
    return _fold("schrodinger_v", reports, 1e-8 * tolerance_scale)


def check_coupled_system(parameter_sets, tolerance_scale):
    pairs = {Branch.I: rtilde_pair_I, Branch.II: rtilde_pair_II}
    residuals = [
        coupled_residual(
            z, pairs[branch](z, p), rtilde_pair_derivatives(branch, z, p), p.omega, p.m
        )
        for p, branch, z in itertools.product(parameter_sets, Branch, np.linspace(0.05, 0.95, 19))
    ]
    return report_from_residuals("coupled_system", residuals, 1e-10 * tolerance_scale)


def check_intertwining(parameter_sets, tolerance_scale):
    """(d/dx - W)Z₊ = iωZ₋ and (d/dx + W)Z₋ = iωZ₊."""
    residuals = []
    for p, branch, x in itertools.product(parameter_sets, Branch, CHECK_XS):
        plus = solution_x(branch, Sign.PLUS, x, p)
        minus = solution_x(branch, Sign.MINUS, x, p)
        w = superpotential(x, p.m)
        residuals.append(
            _balanced([plus.derivative, -w * plus.value, -1j * p.omega * minus.value])
        )
        residuals.append(
            _balanced([minus.derivative, w * minus.value, -1j * p.omega * plus.value])
        )
    return report_from_residuals("intertwining", residuals, 1e-8 * tolerance_scale)


def check_wronskian(parameter_sets, tolerance_scale):
    residuals = []
    for p, sign, x in itertools.product(parameter_sets, Sign, CHECK_XS):
        numeric = wronskian_numeric(solution_x(Branch.I, sign, x, p), solution_x(Branch.II, sign, x, p))
        residuals.append(_relative(numeric, wronskian_closed(sign, p)))
        numeric = wronskian_numeric(
            solution_v_x(Branch.I, sign, x, p), solution_v_x(Branch.II, sign, x, p)
        )
        residuals.append(_relative(numeric, wronskian_v_closed(sign, p)))
    return report_from_residuals("wronskian", residuals, 1e-8 * tolerance_scale)


def check_boundary(parameter_sets, tolerance_scale):
    """
    Y±ᴵᴵ = O(v) with |Y| ≤ (2ω+1)v, and Y±ᴵ = 2 + O(v^{1/2}) with
    |Y - 2| ≤ 8|m|v^{1/2}. Residuals are the ratios to those bounds.
    """
    residuals = []
    for p, sign, v in itertools.product(parameter_sets, Sign, (1e-5, 1e-6)):
        residuals.append(abs(physical_solution(sign, v, p)) / ((2 * p.omega + 1) * v))
        residuals.append(abs(companion_solution(sign, v, p) - 2) / (8 * abs(p.m) * math.sqrt(v)))
    return report_from_residuals("boundary", residuals, 1.0 * tolerance_scale)


def check_seam(parameter_sets, tolerance_scale):
    residuals = [
        _relative(
            physical_solution(sign, 0.9, p, method="series"), physical_solution(sign, 0.9, p)
        )
        for p, sign in itertools.product(parameter_sets, Sign)
    ]
    return report_from_residuals("seam", residuals, 1e-9 * tolerance_scale)


def check_zero_energy(ms, tolerance_scale):
    residuals = []
    for m, x, which in itertools.product(ms, np.geomspace(0.05, 10, 20), ZeroEnergy):
        state = zero_energy_state(x, m, which)
        z = math.exp(-x)
        residuals.append(_relative(zero_energy_hypergeometric(z, m, which), state))
        partner = which.value * 2 * m * cmath.exp(0.25j * math.pi) * zero_energy_partner(z, m, which)
        residuals.append(_relative(partner, state))
    return report_from_residuals("zero_energy", residuals, 1e-10 * tolerance_scale)


def check_appendix(seed, tolerance_scale):
    tolerance = 1e-7 * tolerance_scale
    reports = [
        appendix_check(omega, m, APPENDIX_GRID, seed=seed + k, tolerance=tolerance)
        for (omega, m), k in itertools.product(APPENDIX_CASES, range(APPENDIX_SEEDS))
    ]
    return _fold("appendix", reports, tolerance, detail=f"{len(reports)} integrations")


# Checks on the potentials


def check_shape_invariance(seed, tolerance_scale):
    rng = _rng(seed, 1)
    residuals = []
    for x, m in zip(rng.uniform(0.01, 20, 1000), rng.uniform(0.1, 5, 1000)):
        residuals.append(
            abs(potential(x, PotentialSpec(-m, Sign.MINUS)) - potential(x, PotentialSpec(m, Sign.PLUS)))
        )
    return report_from_residuals("shape_invariance", residuals, 0.0 * tolerance_scale)


def check_susy_decomposition(seed, tolerance_scale):
    rng = _rng(seed, 2)
    residuals = []
    for x, m in zip(rng.uniform(0.05, 10, 200), rng.uniform(0.1, 4, 200)):
        w = superpotential(x, m)
        slope = central_derivative(lambda t: superpotential(t, m), x, 1e-3 * min(x, 1.0))
        for sign in Sign:
            v = potential(x, PotentialSpec(m, sign))
            residuals.append(abs(v - (w * w + sign.value * slope)) / max(w * w, abs(slope)))
    return report_from_residuals("susy_decomposition", residuals, 1e-6 * tolerance_scale)


def check_landmarks(seed, tolerance_scale):
    """
    The m = 2 landmarks against their closed values, the sign pattern of V₋
    around them, and the ordering s₁ > s₊ > s₂ > s₋ for random m > 1.
    """
    residuals = []
    m = 2.0
    minus = PotentialSpec(m, Sign.MINUS)
    found = landmarks(m)
    expected_zeros = (8 - 4 * math.sqrt(3), 8 + 4 * math.sqrt(3))
    expected_critical = (30 - 8 * math.sqrt(13), 30 + 8 * math.sqrt(13))
    residuals += [_relative(a, b) for a, b in zip(found.zero_crossings, expected_zeros)]
    residuals += [_relative(a, b) for a, b in zip(found.critical_points, expected_critical)]

    for x in found.x_zero_crossings:
        residuals.append(abs(potential(x, minus)) / (m * m / math.expm1(x)))
    for x in found.x_critical_points:
        scale = m * m * math.exp(x) / math.expm1(x) ** 2
        residuals.append(abs(potential_derivative_minus(x, m)) / scale)

    s_minus, s_plus = found.zero_crossings
    s_max, s_min = found.critical_points
    pattern = [
        potential(math.log(0.99 * s_minus), minus) < 0,
        potential(0.5 * math.log(s_minus * s_plus), minus) > 0,
        potential(math.log(1.01 * s_plus), minus) < 0,
        potential(math.log(s_max), minus) > potential(math.log(s_max) + 1e-3, minus),
        potential(math.log(s_max), minus) > potential(math.log(s_max) - 1e-3, minus),
        potential(math.log(s_min), minus) < potential(math.log(s_min) + 1e-3, minus),
        potential(math.log(s_min), minus) < potential(math.log(s_min) - 1e-3, minus),
    ]

    for m in _rng(seed, 3).uniform(1, 5, 50):
        found = landmarks(m)
        s_minus, s_plus = found.zero_crossings
        s2, s1 = found.critical_points
        pattern.append(s1 > s_plus > s2 > s_minus)

    residuals += [0.0 if ok else 1.0 for ok in pattern]
    return report_from_residuals("landmarks", residuals, 1e-12 * tolerance_scale)


# Checks on the amplitudes

_UNITARITY_GRID = np.linspace(0.25, 4, 10)


def check_unitarity_plus(tolerance_scale):
    residuals = [
        scattering_amplitude_plus(omega, m).modulus_error
        for omega, m in itertools.product(_UNITARITY_GRID, _UNITARITY_GRID)
    ]
    return report_from_residuals("unitarity_plus", residuals, 1e-10 * tolerance_scale)


def check_unitarity_minus(tolerance_scale):
    residuals = [
        scattering_amplitude_minus(omega, m).modulus_error
        for omega, m in itertools.product(_UNITARITY_GRID, _UNITARITY_GRID)
    ]
    return report_from_residuals("unitarity_minus", residuals, 1e-8 * tolerance_scale)


def check_closed_vs_fit(omegas, ms, tolerance_scale):
    """
    S from the far field of the exact solution against the closed forms,
    S₊ = closed_form_amplitude(ω, m) and S₋ = closed_form_amplitude(ω, -m).
    """
    residuals = []
    for omega, m in itertools.product(omegas, ms):
        closed = {Sign.PLUS: closed_form_amplitude(omega, m), Sign.MINUS: closed_form_amplitude(omega, -m)}
        for sign, expected in closed.items():
            residuals.append(abs(fitted_amplitude(sign, omega, m).amplitude - expected))
            residuals.append(abs(connection_amplitude(sign, omega, m) - expected))
    return report_from_residuals("closed_vs_fit", residuals, 1e-5 * tolerance_scale)


# Checks on the special functions


def check_gauss_summation(seed, tolerance_scale):
    """F(a,b;c;1) = Γ(c)Γ(c-a-b)/(Γ(c-a)Γ(c-b)), approached at z = 1 - 1e-6."""
    rng = _rng(seed, 4)
    residuals = []
    while len(residuals) < DRAWS:
        a, b = rng.uniform(0, 0.7, 2) + 1j * rng.uniform(-0.5, 0.5, 2)
        excess = complex(rng.uniform(1.2, 2.5), rng.uniform(-0.3, 0.3))
        if abs(excess.real - round(excess.real)) < 0.05:
            continue
        c = a + b + excess
        exact = gamma_ratio([c, excess], [c - a, c - b])
        value = hyp2f1(Hyp2F1Params(a, b, c), 1 - 1e-6, complement=1e-6)
        residuals.append(_relative(value, exact))
    return report_from_residuals("gauss_summation", residuals, 1e-5 * tolerance_scale)


def check_kummer_connection(seed, tolerance_scale):
    """The connection formula against the raw series on (0.1, 0.9)."""
    rng = _rng(seed, 5)
    residuals = []
    while len(residuals) < DRAWS:
        a, b = rng.uniform(-1, 1, 2) + 1j * rng.uniform(-1, 1, 2)
        c = complex(rng.uniform(0.5, 2.5), rng.uniform(-0.5, 0.5))
        p = Hyp2F1Params(a, b, c)
        if abs(p.excess - round(p.excess.real)) < 0.1:
            continue
        z = rng.uniform(0.1, 0.9)
        residuals.append(_relative(kummer_connection(p, z), hyp2f1_series(p, z)))
    return report_from_residuals("kummer_connection", residuals, 1e-10 * tolerance_scale)


def check_gamma_reflection(seed, tolerance_scale):
    """Γ(z)Γ(1-z) sin(πz) = π."""
    rng = _rng(seed, 6)
    residuals = []
    while len(residuals) < DRAWS:
        z = complex(rng.uniform(-3, 3), rng.uniform(-2, 2))
        if abs(z - round(z.real)) < 0.05:
            continue
        residuals.append(_relative(gamma(z) * gamma(1 - z) * cmath.sin(math.pi * z), math.pi))
    return report_from_residuals("gamma_reflection", residuals, 1e-10 * tolerance_scale)


CHECKS = [
    check_schrodinger_z,
    check_schrodinger_v,
    check_coupled_system,
    check_intertwining,
    check_wronskian,
    check_shape_invariance,
    check_susy_decomposition,
    check_landmarks,
    check_unitarity_plus,
    check_unitarity_minus,
    check_closed_vs_fit,
    check_boundary,
    check_seam,
    check_zero_energy,
    check_appendix,
    check_gauss_summation,
    check_kummer_connection,
    check_gamma_reflection,
]

CHECK_NAMES = [strip_required_prefix(check.__name__, "check_") for check in CHECKS]


def verification_suite(
    omegas=DEFAULT_OMEGAS,
    ms=DEFAULT_MS,
    *,
    tolerance_scale=1.0,
    c1_perturbation=0.0,
    seed=DEFAULT_SEED,
    checks=None,
) -> Composer:
    suite = (
        Composer()
        .update(parameter_sets)
        .update_parameters(
            omegas=tuple(float(omega) for omega in omegas),
            ms=tuple(float(m) for m in ms),
            tolerance_scale=float(tolerance_scale),
            c1_perturbation=float(c1_perturbation),
            seed=int(seed),
        )
        .update_tests(**dict(zip(CHECK_NAMES, CHECKS)))
    )
    if checks:
        suite = suite.select_tests(checks)
    return suite


def report_from_result(result) -> VerificationReport:
    """A report for every composer test result, including ones that raised."""
    if result.result is not None:
        return result.result
    error = result.exception
    log.debug("Check '%s' raised %r", result.name, error)
    return VerificationReport(
        result.name, math.nan, math.nan, 0, detail=f"{type(error).__name__}: {error}"
    )


def run_verification(
    omegas=DEFAULT_OMEGAS,
    ms=DEFAULT_MS,
    *,
    tolerance_scale=1.0,
    c1_perturbation=0.0,
    seed=DEFAULT_SEED,
    checks=None,
    progress_callback=None,
) -> List[VerificationReport]:
    suite = verification_suite(
        omegas,
        ms,
        tolerance_scale=tolerance_scale,
        c1_perturbation=c1_perturbation,
        seed=seed,
        checks=checks,
    )
    reports = [report_from_result(result) for result in suite.run_tests(progress_callback)]
    for report in reports:
        log.debug("%s: %s", report.name, "passed" if report.passed else "FAILED")
    return reports
