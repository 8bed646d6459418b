"""
Complex Gamma and Gauss hypergeometric functions.

Everything here is plain double precision complex arithmetic. ``hyp2f1`` sums
the Gauss series directly for z <= 1/2 and otherwise goes through the
z -> 1 - z connection formula, so every series that actually gets summed has
argument at most 1/2.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from logging import getLogger
from typing import Iterable, Optional, Tuple

from .exceptions import (
    ConvergenceError,
    DegenerateConnectionError,
    DomainError,
    GammaPoleError,
    HypergeometricError,
)

log = getLogger(__name__)

LANCZOS_G = 7
LANCZOS_COEFFICIENTS = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)

POLE_TOLERANCE = 1e-12
SERIES_TOLERANCE = 1e-15
MAX_TERMS = 20000
DEGENERATE_TOLERANCE = 1e-8
LIMIT_OFFSET = 1e-5

_HALF_LOG_TWO_PI = 0.5 * math.log(2 * math.pi)
_LOG_PI = math.log(math.pi)


def _near_non_positive_integer(z: complex, tolerance: float = POLE_TOLERANCE) -> bool:
    nearest = round(z.real)
    return nearest <= 0 and abs(z - nearest) < tolerance


def _near_integer(z: complex, tolerance: float) -> bool:
    return abs(z - round(z.real)) < tolerance


def _sinpi(z: complex) -> complex:
    # sin(pi z) is 2-periodic in Re z; reducing first keeps pi*z small
    return cmath.sin(math.pi * complex(math.fmod(z.real, 2.0), z.imag))


def _lanczos_sum(shifted: complex) -> complex:
    total = LANCZOS_COEFFICIENTS[0]
    for i, coefficient in enumerate(LANCZOS_COEFFICIENTS[1:], start=1):
        total += coefficient / (shifted + i)
    return total


def _check_pole(z: complex):
    if _near_non_positive_integer(z):
        raise GammaPoleError(
            f"Gamma has a pole at {z}: argument is within {POLE_TOLERANCE} of a non-positive integer."
        )


def gamma(z) -> complex:
    """
    The Gamma function of a complex argument.

    Lanczos approximation for Re z >= 1/2, reflection formula below that.
    """
    z = complex(z)
    _check_pole(z)
    if z.real < 0.5:
        return math.pi / (_sinpi(z) * gamma(1 - z))

    shifted = z - 1
    t = shifted + LANCZOS_G + 0.5
    return (
        math.sqrt(2 * math.pi)
        * cmath.exp((shifted + 0.5) * cmath.log(t) - t)
        * _lanczos_sum(shifted)
    )


def _principal(w: complex) -> complex:
    # imaginary part into (-pi, pi]
    turns = math.ceil((w.imag - math.pi) / (2 * math.pi))
    return complex(w.real, w.imag - 2 * math.pi * turns)


def _log_gamma_continued(z: complex) -> complex:
    if z.real < 0.5:
        return _LOG_PI - cmath.log(_sinpi(z)) - _log_gamma_continued(1 - z)

    shifted = z - 1
    t = shifted + LANCZOS_G + 0.5
    return (
        _HALF_LOG_TWO_PI
        + (shifted + 0.5) * cmath.log(t)
        - t
        + cmath.log(_lanczos_sum(shifted))
    )


def log_gamma(z) -> complex:
    """
    Principal logarithm of the Gamma function, safe against overflow of Gamma
    itself.

    ``exp(log_gamma(z)) == gamma(z)`` and the imaginary part lies in (-pi, pi],
    so for negative real Gamma(z) it is pi.
    """
    z = complex(z)
    _check_pole(z)
    return _principal(_log_gamma_continued(z))


def reciprocal_gamma(z) -> complex:
    """1/Gamma(z), which is entire and vanishes at the poles of Gamma."""
    z = complex(z)
    if _near_non_positive_integer(z):
        return 0j
    return 1 / gamma(z)


def gamma_ratio(numerator: Iterable[complex], denominator: Iterable[complex]) -> complex:
    """
    prod Gamma(numerator) / prod Gamma(denominator), accumulated in logs.

    A denominator argument on a pole makes the ratio exactly zero.
    """
    denominator = [complex(d) for d in denominator]
    if any(_near_non_positive_integer(d) for d in denominator):
        return 0j
    total = sum(log_gamma(n) for n in numerator) - sum(log_gamma(d) for d in denominator)
    return cmath.exp(total)


@dataclass(frozen=True)
class Hyp2F1Params:
    a: complex
    b: complex
    c: complex

    def __post_init__(self):
        for name in ("a", "b", "c"):
            object.__setattr__(self, name, complex(getattr(self, name)))
        if _near_non_positive_integer(self.c):
            raise HypergeometricError(
                f"c = {self.c} is a non-positive integer; 2F1 is undefined."
            )

    @property
    def excess(self) -> complex:
        """c - a - b, which governs the behaviour at z = 1."""
        return self.c - self.a - self.b

    def differentiated(self) -> Hyp2F1Params:
        return Hyp2F1Params(self.a + 1, self.b + 1, self.c + 1)


def _check_argument(z: float, complement: float):
    if not (z >= 0.0 and 0.0 < complement <= 1.0):
        raise DomainError(f"2F1 argument must lie in [0, 1), got {z}.")


def hyp2f1_series(
    p: Hyp2F1Params,
    z: float,
    max_terms: int = MAX_TERMS,
    tolerance: float = SERIES_TOLERANCE,
) -> complex:
    """
    The Gauss series summed term by term, with no transformations.

    Stops once two consecutive terms are below ``tolerance`` relative to the
    partial sum.
    """
    z = float(z)
    _check_argument(z, 1.0 - z)

    a, b, c = p.a, p.b, p.c
    term = 1 + 0j
    total = term
    quiet = 0
    for n in range(max_terms):
        term *= (a + n) * (b + n) / ((c + n) * (n + 1)) * z
        total += term
        if term == 0:
            return total
        if abs(term) <= tolerance * abs(total):
            quiet += 1
            if quiet == 2:
                return total
        else:
            quiet = 0

    raise ConvergenceError(
        f"2F1{(p.a, p.b, p.c)} series did not converge at z = {z} within {max_terms} terms."
    )


def connection_coefficients(p: Hyp2F1Params) -> Tuple[complex, complex]:
    """
    The two Gamma-function coefficients of the connection formula

        F(a,b;c;z) = first * F(a,b;a+b-c+1;1-z)
                     + second * (1-z)^(c-a-b) * F(c-a,c-b;c-a-b+1;1-z)
    """
    excess = p.excess
    first = gamma_ratio((p.c, excess), (p.c - p.a, p.c - p.b))
    second = gamma_ratio((p.c, -excess), (p.a, p.b))
    return first, second


def kummer_connection(
    p: Hyp2F1Params,
    z: float,
    *,
    complement: Optional[float] = None,
    limit_fallback: bool = False,
) -> complex:
    """
    Right hand side of the connection formula, with both series summed
    directly in 1 - z.

    ``complement`` supplies 1 - z when the caller knows it more precisely than
    it can be recovered from z.
    """
    w = 1.0 - z if complement is None else float(complement)
    excess = p.excess

    if _near_integer(excess, DEGENERATE_TOLERANCE):
        if not limit_fallback:
            raise DegenerateConnectionError(
                f"c - a - b = {excess} is within {DEGENERATE_TOLERANCE} of an integer."
            )
        log.debug("Degenerate connection for %s, averaging c +/- %s", p, LIMIT_OFFSET)
        upper = kummer_connection(
            Hyp2F1Params(p.a, p.b, p.c + LIMIT_OFFSET), z, complement=w
        )
        lower = kummer_connection(
            Hyp2F1Params(p.a, p.b, p.c - LIMIT_OFFSET), z, complement=w
        )
        return 0.5 * (upper + lower)

    first, second = connection_coefficients(p)
    result = 0j
    if first != 0:
        result += first * hyp2f1_series(Hyp2F1Params(p.a, p.b, 1 - excess), w)
    if second != 0:
        result += (
            second
            * cmath.exp(excess * math.log(w))
            * hyp2f1_series(Hyp2F1Params(p.c - p.a, p.c - p.b, 1 + excess), w)
        )
    return result


def hyp2f1(
    p: Hyp2F1Params,
    z: float,
    *,
    complement: Optional[float] = None,
    method: str = "auto",
    limit_fallback: bool = False,
) -> complex:
    """
    The Gauss hypergeometric function 2F1(a, b; c; z) for 0 <= z < 1.

    Args:
        p: the parameters (a, b, c)
        z: the argument
        complement: 1 - z, if known exactly. Arguments exponentially close to
            one should always pass it.
        method: "auto" picks the direct series for z <= 1/2 and the connection
            formula above; "series" always sums the raw series and
            "connection" always goes through 1 - z.
        limit_fallback: replace the degenerate-connection error with the
            symmetric limit in c.
    """
    z = float(z)
    w = 1.0 - z if complement is None else float(complement)
    _check_argument(z, w)

    if method not in ("auto", "series", "connection"):
        raise ValueError(f"Unknown 2F1 method '{method}'.")

    if method == "series" or (method == "auto" and z <= 0.5):
        return hyp2f1_series(p, z)
    log.debug("2F1%s at z=%s through the connection formula", (p.a, p.b, p.c), z)
    return kummer_connection(p, z, complement=w, limit_fallback=limit_fallback)


def hyp2f1_derivative(
    p: Hyp2F1Params,
    z: float,
    *,
    complement: Optional[float] = None,
    method: str = "auto",
) -> complex:
    """d/dz 2F1(a, b; c; z) = (ab/c) 2F1(a+1, b+1; c+1; z)."""
    if p.a == 0 or p.b == 0:
        return 0j
    return (
        p.a
        * p.b
        / p.c
        * hyp2f1(p.differentiated(), z, complement=complement, method=method)
    )
