"""
The superpotential W = -m / sqrt(e^x - 1), the partner potentials
V± = W² ± W' it generates, and their landmarks.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from logging import getLogger
from typing import Optional, Tuple

from .exceptions import DomainError

log = getLogger(__name__)

THRESHOLD_TOLERANCE = 1e-14


class Sign(Enum):
    PLUS = 1
    MINUS = -1

    @classmethod
    def parse(cls, value) -> Sign:
        if isinstance(value, cls):
            return value
        aliases = {"plus": cls.PLUS, "+": cls.PLUS, "minus": cls.MINUS, "-": cls.MINUS}
        try:
            return aliases[str(value).lower()]
        except KeyError:
            raise ValueError(f"Unknown sign '{value}', expected plus or minus.")

    def __str__(self):
        return self.name.lower()


@dataclass(frozen=True)
class PotentialSpec:
    m: float
    sign: Sign = Sign.PLUS

    def __post_init__(self):
        object.__setattr__(self, "m", float(self.m))
        object.__setattr__(self, "sign", Sign.parse(self.sign))
        if self.m == 0:
            raise DomainError("m = 0 makes both partner potentials vanish.")

    def partner(self) -> PotentialSpec:
        return PotentialSpec(self.m, Sign(-self.sign.value))


@dataclass(frozen=True)
class PotentialLandmarks:
    """Zero crossings and critical points of V₋, in the coordinate s = e^x."""

    zero_crossings: Optional[Tuple[float, float]]
    critical_points: Optional[Tuple[float, float]]

    @property
    def x_zero_crossings(self):
        return _log_pair(self.zero_crossings)

    @property
    def x_critical_points(self):
        return _log_pair(self.critical_points)

    def as_dict(self):
        return dict(
            zero_crossings=self.zero_crossings,
            critical_points=self.critical_points,
            x_zero_crossings=self.x_zero_crossings,
            x_critical_points=self.x_critical_points,
        )


def _log_pair(pair):
    if pair is None:
        return None
    return tuple(math.log(s) for s in pair)


def _check_x(x: float):
    if not x > 0:
        raise DomainError(f"x must be positive, got {x}.")


def _decay_pair(x: float) -> Tuple[float, float]:
    # (e^{-x}, 1 - e^{-x}), both finite for every x > 0
    return math.exp(-x), -math.expm1(-x)


def superpotential(x: float, m: float) -> float:
    _check_x(x)
    z, w = _decay_pair(x)
    return -m * math.sqrt(z / w)


def superpotential_derivative(x: float, m: float) -> float:
    _check_x(x)
    z, w = _decay_pair(x)
    return 0.5 * m * math.sqrt(z) / w ** 1.5


def _potential_zw(z: float, w: float, spec: PotentialSpec) -> float:
    m = spec.m
    return m ** 2 * z / w + spec.sign.value * (m / 2) * math.sqrt(z) / w ** 1.5


def potential(x: float, spec: PotentialSpec) -> float:
    _check_x(x)
    return _potential_zw(*_decay_pair(x), spec)


def potential_derivative_minus(x: float, m: float) -> float:
    """dV₋/dx in closed form; its zeros are the critical points."""
    _check_x(x)
    z, w = _decay_pair(x)
    return -(m ** 2) * z / w ** 2 + (m / 2) * (z + 0.5) * math.sqrt(z) / w ** 2.5


def potential_z(z: float, spec: PotentialSpec) -> float:
    """The potential in z = e^{-x}."""
    if not 0 < z < 1:
        raise DomainError(f"z must lie in (0, 1), got {z}.")
    return _potential_zw(z, 1 - z, spec)


def _clamped_sqrt(discriminant: float) -> Optional[float]:
    if discriminant < 0:
        if discriminant > -THRESHOLD_TOLERANCE:
            return 0.0
        return None
    return math.sqrt(discriminant)


def landmarks(m: float) -> PotentialLandmarks:
    """
    Where V₋ crosses zero, s = 2m² ± 2m sqrt(m² - 1), and where it turns,
    s = 8m² - 2 ± 4m sqrt(4m² - 3). At the thresholds m = 1 and m = sqrt(3)/2
    the pairs coincide.
    """
    if not m > 0:
        raise DomainError(f"landmarks are defined for m > 0, got {m}.")

    zero_crossings = None
    root = _clamped_sqrt(m * m - 1)
    if root is not None:
        zero_crossings = (2 * m * m - 2 * m * root, 2 * m * m + 2 * m * root)

    critical_points = None
    root = _clamped_sqrt(4 * m * m - 3)
    if root is not None:
        critical_points = (8 * m * m - 2 - 4 * m * root, 8 * m * m - 2 + 4 * m * root)

    log.debug("Landmarks for m=%s: %s %s", m, zero_crossings, critical_points)
    return PotentialLandmarks(zero_crossings, critical_points)


def _coth_shifted(u: float, sign: int) -> float:
    # coth(u) + sign in terms of e^{-2u}
    numerator = 2.0 if sign > 0 else 2.0 * math.exp(-2 * u)
    return numerator / -math.expm1(-2 * u)


def _csch(u: float) -> float:
    return 2.0 * math.exp(-u) / -math.expm1(-2 * u)


def hyperbolic_form(x: float, spec: PotentialSpec) -> float:
    """The potential rewritten with mu = m/sqrt(2) and hyperbolic functions of x/2."""
    _check_x(x)
    mu = spec.m / math.sqrt(2)
    u = x / 2
    return mu ** 2 * _coth_shifted(u, -1) + spec.sign.value * (mu / 4) * math.sqrt(
        _coth_shifted(u, 1)
    ) * _csch(u)


def hyperbolic_superpotential(x: float, m: float) -> float:
    _check_x(x)
    mu = m / math.sqrt(2)
    return -mu * math.sqrt(_coth_shifted(x / 2, -1))


def near_zero_asymptote(x: float, spec: PotentialSpec) -> float:
    """m²/x ± m/(2 x^{3/2}), the behaviour of V± as x -> 0."""
    _check_x(x)
    return spec.m ** 2 / x + spec.sign.value * spec.m / (2 * x ** 1.5)


def hulthen(x: float, Q: float) -> float:
    _check_x(x)
    z, w = _decay_pair(x)
    return Q * z / w


def generalized_superpotential(x: float, m: float, scale_a: float, scale_b: float) -> float:
    """W = -m (A e^x - B)^{-1/2}, defined where A e^x > B."""
    reduced = scale_a - scale_b * math.exp(-x)
    if not reduced > 0:
        raise DomainError(f"A e^x - B must be positive, got A - B e^-x = {reduced} at x = {x}.")
    return -m * math.exp(-x / 2) / math.sqrt(reduced)


def reduce_generalized(m: float, scale_a: float, scale_b: float) -> Tuple[float, float]:
    """
    Map the two-scale superpotential onto the one-scale one.

    Returns ``(shift, m_hat)`` with
    ``generalized_superpotential(x, m, A, B) == superpotential(x + shift, m_hat)``.
    """
    if not (scale_a > 0 and scale_b > 0):
        raise DomainError("Both scales must be positive.")
    return math.log(scale_a / scale_b), m / math.sqrt(scale_b)
