"""
Exact solutions of the Schrödinger equations Z'' + ω²Z = V±Z.

In z = e^{-x} the pair (R̃₁, R̃₂) of the first order system is a pair of
power-times-2F1 terms, and Z± = e^{-iπ/4}(R̃₁ ± iR̃₂). In v = 1 - z the same
equations have a second fundamental system built from 2F1 with c = 1/2 and
3/2, which is the one suited to the boundary at x = 0.

The hypergeometric parameters are derived from (ω, m) by a small function
graph, SPECTRAL_GRAPH, whose tests hold the invariants of the parameter set.
"""
from __future__ import annotations

import cmath
import dataclasses
import math
from dataclasses import dataclass
from enum import Enum
from logging import getLogger
from typing import Tuple

import numpy as np

from .exceptions import DomainError, ParameterError
from .graph import Composer
from .potentials import Sign
from .special_fn import Hyp2F1Params, hyp2f1, hyp2f1_derivative

log = getLogger(__name__)

INDICIAL_TOLERANCE = 1e-14
INTEGER_DISTANCE = 1e-10
PHASE = cmath.exp(-0.25j * math.pi)


class Branch(Enum):
    I = "I"
    II = "II"

    @classmethod
    def parse(cls, value) -> Branch:
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).upper())
        except ValueError:
            raise ValueError(f"Unknown branch '{value}', expected I or II.")


class Coordinate(Enum):
    X = "x"
    Z = "z"
    V = "v"


class ZeroEnergy(Enum):
    PSI_MINUS = -1
    PSI_PLUS = 1


@dataclass(frozen=True)
class SolutionSample:
    """A wavefunction value and its derivative with respect to ``variable``."""

    coord: float
    value: complex
    derivative: complex
    variable: Coordinate = Coordinate.X

    def __post_init__(self):
        if self.variable is Coordinate.X:
            valid = self.coord > 0
        else:
            valid = 0 < self.coord < 1
        if not valid:
            raise DomainError(
                f"{self.variable.value} = {self.coord} is outside its physical range."
            )


@dataclass(frozen=True)
class SpectralParams:
    omega: float
    m: float
    root: float
    A1: complex
    A2: complex
    a1: complex
    b1: complex
    c1: complex
    a2: complex
    b2: complex
    c2: complex
    B1: complex
    B2: complex
    alpha1: complex
    beta1: complex
    gamma1: complex
    alpha2: complex
    beta2: complex
    gamma2: complex
    G1: complex = 1 + 0j
    H1: complex = 1 + 0j

    def perturbed(self, **deltas) -> SpectralParams:
        """A copy with some fields shifted, for negative controls."""
        return dataclasses.replace(
            self, **{name: getattr(self, name) + delta for name, delta in deltas.items()}
        )


# Spectral parameter graph


def root(omega, m):
    return math.hypot(m, omega)


def upper_exponent(omega):
    return 0.5 + 1j * omega


def lower_exponent(omega):
    return 1j * omega


def family_a(A, root):
    return A + 1j * root


def family_b(A, root):
    return A - 1j * root


def family_c(A):
    return 2 * A + 0.5


def family_gamma():
    return 0.5 + 0j


def _indicial_residual(A, omega, epsilon):
    return A * A - A / 2 - 0.5j * omega * epsilon + omega ** 2


def indicial_A1(A1, omega):
    residual = abs(_indicial_residual(A1, omega, 1))
    if residual >= INDICIAL_TOLERANCE:
        raise ParameterError(f"A1 = {A1} misses its indicial equation by {residual}.")


def indicial_A2(A2, omega):
    residual = abs(_indicial_residual(A2, omega, -1))
    if residual >= INDICIAL_TOLERANCE:
        raise ParameterError(f"A2 = {A2} misses its indicial equation by {residual}.")


def non_integer_c(z1__c, z2__c):
    for label, value in [("c1", z1__c), ("c2", z2__c), ("2-c1", 2 - z1__c), ("2-c2", 2 - z2__c)]:
        if abs(value - round(value.real)) <= INTEGER_DISTANCE:
            raise ParameterError(f"{label} = {value} is an integer; the method needs it off the integers.")


z_family = Composer().update(a=family_a, b=family_b, c=family_c)
v_family = Composer().update(alpha=family_a, beta=family_b, gamma=family_gamma).link(A="B")

SPECTRAL_GRAPH = (
    Composer()
    .update(root, A1=upper_exponent, A2=lower_exponent, B1=upper_exponent, B2=lower_exponent)
    .update_namespaces(z1=z_family, z2=z_family, v1=v_family, v2=v_family)
    .link(z1__A="A1", z2__A="A2", v1__B="B1", v2__B="B2")
    .update_parameters(G1=1 + 0j, H1=1 + 0j)
    .update_tests(indicial_A1=indicial_A1, indicial_A2=indicial_A2, non_integer_c=non_integer_c)
)

_FIELDS = dict(
    root="root",
    A1="A1",
    A2="A2",
    a1="z1__a",
    b1="z1__b",
    c1="z1__c",
    a2="z2__a",
    b2="z2__b",
    c2="z2__c",
    B1="B1",
    B2="B2",
    alpha1="v1__alpha",
    beta1="v1__beta",
    gamma1="v1__gamma",
    alpha2="v2__alpha",
    beta2="v2__beta",
    gamma2="v2__gamma",
    G1="G1",
    H1="H1",
)


def make_params(omega: float, m: float) -> SpectralParams:
    """
    Every hypergeometric parameter of the exact solutions at energy ω², with
    the normalizations G1 = H1 = 1.
    """
    omega = float(omega)
    m = float(m)
    if omega == 0:
        raise ParameterError(
            "omega = 0 is the zero-energy case; use zero_energy_state or "
            "zero_energy_hypergeometric (the `zero-energy` command)."
        )
    if not omega > 0:
        raise ParameterError(f"omega must be positive, got {omega}.")
    if m == 0:
        raise ParameterError("m must be nonzero.")

    graph = SPECTRAL_GRAPH.update_parameters(omega=omega, m=m)
    for result in graph.run_tests():
        if not result.passed:
            raise result.exception

    results = graph.calculate(list(_FIELDS.values()))
    return SpectralParams(
        omega=omega, m=m, **{field: results[node] for field, node in _FIELDS.items()}
    )


# z-variable family


def anchored_method(center: float) -> str:
    """
    The 2F1 method for every point of a difference stencil around
    ``center``, so that the stencil never straddles the z = 1/2 switch.
    """
    return "series" if center <= 0.5 else "connection"


def _power(base: float, exponent: complex) -> complex:
    return cmath.exp(exponent * math.log(base))


def _representable_decay(x: float) -> float:
    if not x > 0:
        raise DomainError(f"x must be positive, got {x}.")
    z = math.exp(-x)
    if z == 0:
        raise DomainError(f"x = {x} is too large, e^-x underflows to zero.")
    return z


def _check_unit_interval(t: float, complement: float, name: str):
    if not (t > 0 and complement > 0):
        raise DomainError(f"{name} must lie in (0, 1), got {t}.")


def _power_series_term(exponent, hp: Hyp2F1Params, z, w, method):
    """z^exponent F(hp; z) and its z-derivative."""
    zp = _power(z, exponent)
    value = hyp2f1(hp, z, complement=w, method=method)
    slope = hyp2f1_derivative(hp, z, complement=w, method=method)
    return zp * value, zp * (exponent / z * value + slope)


def partner_coefficient(branch: Branch, p: SpectralParams) -> complex:
    """G₂/G₁ for branch I and H₂/H₁ for branch II."""
    if Branch.parse(branch) is Branch.I:
        return (p.c1 - 1) / (1j * p.m)
    return (p.a1 - p.c1 + 1) * (p.b1 - p.c1 + 1) / (1j * p.m * (2 - p.c1))


def _rtilde_terms(branch: Branch, p: SpectralParams):
    if branch is Branch.I:
        return (
            (p.A1, Hyp2F1Params(p.a1, p.b1, p.c1), p.G1),
            (p.A2, Hyp2F1Params(p.a2, p.b2, p.c2), p.G1 * partner_coefficient(branch, p)),
        )
    return (
        (p.A1 + 1 - p.c1, Hyp2F1Params(p.a1 - p.c1 + 1, p.b1 - p.c1 + 1, 2 - p.c1), p.H1),
        (
            p.A2 + 1 - p.c2,
            Hyp2F1Params(p.a2 - p.c2 + 1, p.b2 - p.c2 + 1, 2 - p.c2),
            p.H1 * partner_coefficient(branch, p),
        ),
    )


def _rtilde(branch, z, p, complement=None, method="auto"):
    branch = Branch.parse(branch)
    w = 1.0 - z if complement is None else complement
    _check_unit_interval(z, w, "z")
    pair = []
    for exponent, hp, coefficient in _rtilde_terms(branch, p):
        value, slope = _power_series_term(exponent, hp, z, w, method)
        pair.append((coefficient * value, coefficient * slope))
    return pair


def rtilde_pair_I(z: float, p: SpectralParams) -> Tuple[complex, complex]:
    (r1, _), (r2, _) = _rtilde(Branch.I, z, p)
    return r1, r2


def rtilde_pair_II(z: float, p: SpectralParams) -> Tuple[complex, complex]:
    (r1, _), (r2, _) = _rtilde(Branch.II, z, p)
    return r1, r2


def rtilde_pair_derivatives(branch, z: float, p: SpectralParams) -> Tuple[complex, complex]:
    """d/dz of the R̃ pair, differentiated term by term."""
    (_, d1), (_, d2) = _rtilde(branch, z, p)
    return d1, d2


def _assemble(sign: Sign, pair):
    (r1, d1), (r2, d2) = pair
    s = Sign.parse(sign).value
    return PHASE * (r1 + s * 1j * r2), PHASE * (d1 + s * 1j * d2)


def solution_z_sample(branch, sign, z, p, *, complement=None, method="auto") -> SolutionSample:
    value, derivative = _assemble(sign, _rtilde(branch, z, p, complement, method))
    return SolutionSample(z, value, derivative, Coordinate.Z)


def solution_z(branch, sign, z: float, p: SpectralParams) -> complex:
    """Z±ᴵ or Z±ᴵᴵ at z."""
    return solution_z_sample(branch, sign, z, p).value


def solution_x(branch, sign, x: float, p: SpectralParams, *, method="auto") -> SolutionSample:
    """
    Z±ᴵ or Z±ᴵᴵ as a function of x, with d/dx = -z d/dz.

    Defined while e^{-x} is a nonzero double, that is x below about 745.
    """
    z = _representable_decay(x)
    value, derivative = _assemble(sign, _rtilde(branch, z, p, -math.expm1(-x), method))
    return SolutionSample(x, value, -z * derivative, Coordinate.X)


def wronskian_closed(sign, p: SpectralParams) -> complex:
    """W(Zᴵ, Zᴵᴵ) in x, for G1 = H1 = 1."""
    return Sign.parse(sign).value * 2 * p.omega * (p.c1 - 1) / p.m


# v-variable family


def _boundary_terms(p: SpectralParams, v, w, method):
    """
    P_k = (1-v)^{B_k} F(α_k, β_k; γ_k; v) and
    Q_k = (1-v)^{B_k} v^{1-γ_k} F(α_k-γ_k+1, β_k-γ_k+1; 2-γ_k; v),
    each as (value, d/dv).
    """

    def term(B, exponent, hp):
        base = _power(w, B) * _power(v, exponent)
        value = hyp2f1(hp, v, complement=w, method=method)
        slope = hyp2f1_derivative(hp, v, complement=w, method=method)
        return base * value, base * (slope + (exponent / v - B / w) * value)

    terms = {}
    for k, (B, alpha, beta, gamma) in enumerate(
        [(p.B1, p.alpha1, p.beta1, p.gamma1), (p.B2, p.alpha2, p.beta2, p.gamma2)], start=1
    ):
        terms[f"P{k}"] = term(B, 0j, Hyp2F1Params(alpha, beta, gamma))
        terms[f"Q{k}"] = term(
            B, 1 - gamma, Hyp2F1Params(alpha - gamma + 1, beta - gamma + 1, 2 - gamma)
        )
    return terms


def _combine(first, second, coefficient):
    return first[0] + coefficient * second[0], first[1] + coefficient * second[1]


def _v_solution(branch, sign, v, w, p, method):
    _check_unit_interval(v, w, "v")
    branch = Branch.parse(branch)
    s = Sign.parse(sign).value
    terms = _boundary_terms(p, v, w, method)
    if branch is Branch.I:
        return _combine(terms["P1"], terms["Q2"], -s * p.m / p.gamma1)
    return _combine(terms["Q1"], terms["P2"], -s * p.gamma1 / p.m)


def solution_v_sample(branch, sign, v, p, *, complement=None, method="auto") -> SolutionSample:
    w = 1.0 - v if complement is None else complement
    value, derivative = _v_solution(branch, sign, v, w, p, method)
    return SolutionSample(v, value, derivative, Coordinate.V)


def solution_v(branch, sign, v: float, p: SpectralParams, *, method="auto") -> complex:
    """
    Z̃±ᴵ = P₁ ∓ (m/γ₁)Q₂ and Z̃±ᴵᴵ = Q₁ ∓ (γ₁/m)P₂ with C̃₁ = C̃₂ = 1.

    The coupled first order system fixes the relative sign; for V₊ it is a
    minus in both.
    """
    return solution_v_sample(branch, sign, v, p, method=method).value


def solution_v_x(branch, sign, x: float, p: SpectralParams) -> SolutionSample:
    """The v-family as a function of x; dv/dx = e^{-x}. Same range in x as solution_x."""
    w = _representable_decay(x)
    value, derivative = _v_solution(branch, sign, -math.expm1(-x), w, p, "auto")
    return SolutionSample(x, value, w * derivative, Coordinate.X)


def wronskian_v_closed(sign, p: SpectralParams) -> complex:
    """
    W(Z̃ᴵ, Z̃ᴵᴵ) in x. The boundary pair Z̃ᴵ ∓ (m/γ₁)Z̃ᴵᴵ → 2 and
    Z̃ᴵ ± (m/γ₁)Z̃ᴵᴵ → 2iωv has Wronskian 4iω, which gives ±iω/m.
    """
    return Sign.parse(sign).value * 2j * p.omega * p.gamma1 / p.m


def connection_matrix(sign, p: SpectralParams, x0: float = 1.0) -> np.ndarray:
    """
    The 2x2 matrix C with (Z̃ᴵ, Z̃ᴵᴵ) = (Zᴵ, Zᴵᴵ) C, from values and
    derivatives at x0.
    """
    z_basis = [solution_x(branch, sign, x0, p) for branch in Branch]
    v_basis = [solution_v_x(branch, sign, x0, p) for branch in Branch]
    lhs = np.array([[s.value for s in z_basis], [s.derivative for s in z_basis]])
    rhs = np.array([[s.value for s in v_basis], [s.derivative for s in v_basis]])
    return np.linalg.solve(lhs, rhs)


# Zero energy


def zero_energy_state(x: float, m: float, which: ZeroEnergy) -> complex:
    """
    ψ₀∓ = [sqrt(1 - e^{-x}) + i e^{-x/2}]^{±2im}. The base has unit modulus,
    so the states are real, reciprocal and never decay.
    """
    if not x > 0:
        raise DomainError(f"x must be positive, got {x}.")
    base = complex(math.sqrt(-math.expm1(-x)), math.exp(-x / 2))
    exponent = -ZeroEnergy(which).value * 2j * m
    return cmath.exp(exponent * cmath.log(base))


def _reciprocal_pair_sum(even: complex, odd: complex, t: int) -> complex:
    """
    even + t odd, given even² - odd² = 1.

    Both are real and even > 0. When the two terms have opposite signs the sum
    is taken as 1 / (even - t odd), which has none of the cancellation.
    """
    if t * odd.real >= 0:
        return even + t * odd
    return 1 / (even - t * odd)


def zero_energy_hypergeometric(z: float, m: float, which: ZeroEnergy) -> complex:
    """ψ₀∓ = F(im, -im; 1/2; z) ∓ 2m sqrt(z) F(1/2 + im, 1/2 - im; 3/2; z)."""
    _check_unit_interval(z, 1 - z, "z")
    even = hyp2f1(Hyp2F1Params(1j * m, -1j * m, 0.5), z)
    odd = 2 * m * math.sqrt(z) * hyp2f1(Hyp2F1Params(0.5 + 1j * m, 0.5 - 1j * m, 1.5), z)
    return _reciprocal_pair_sum(even, odd, ZeroEnergy(which).value)


def zero_energy_rtilde_pair(z: float, m: float) -> Tuple[complex, complex]:
    """The R̃ pair of branch I at ω = 0."""
    _check_unit_interval(z, 1 - z, "z")
    if m == 0:
        raise DomainError("m must be nonzero.")
    r1 = math.sqrt(z) * hyp2f1(Hyp2F1Params(0.5 + 1j * m, 0.5 - 1j * m, 1.5), z)
    r2 = hyp2f1(Hyp2F1Params(1j * m, -1j * m, 0.5), z) / (2j * m)
    return r1, r2


def zero_energy_partner(z: float, m: float, which: ZeroEnergy) -> complex:
    """Z∓ at ω = 0, for which ψ₀∓ = ∓2m e^{iπ/4} Z∓."""
    r1, r2 = zero_energy_rtilde_pair(z, m)
    t = ZeroEnergy(which).value
    # t 2m e^{iπ/4} Z = 2im r2 + t 2m r1, a pair with the same reciprocal structure
    psi = _reciprocal_pair_sum(2j * m * r2, 2 * m * r1, t)
    return psi / (t * 2 * m * cmath.exp(0.25j * math.pi))
