"""
An independent numerical oracle for the closed forms.

Nothing here evaluates a hypergeometric function. Solutions are seen as black
box callables or as SolutionSamples, and are judged by finite differences and
by direct integration of the differential equations.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace
from functools import lru_cache
from logging import getLogger
from typing import Callable, Optional, Sequence, Union

import numpy as np

from . import potentials
from .exceptions import CoordinateMismatchError, DomainError, IntegrationError
from .potentials import PotentialSpec, Sign, potential_z, superpotential
from .solutions import Coordinate, SolutionSample

log = getLogger(__name__)

RELATIVE_STEP = 5e-3
SAMPLE_STEP = 1e-2
RTOL = 1e-10
ATOL = 1e-12
MAX_STEPS = 200000
SAFETY = 0.9
MIN_FACTOR = 0.2
MAX_FACTOR = 5.0
APPENDIX_STEP = 0.01
MIN_GRID_POINTS = 3


@dataclass(frozen=True)
class GridSpec:
    start: float
    end: float
    points: int
    spacing: str = "linear"

    def __post_init__(self):
        if int(self.points) != self.points or self.points < MIN_GRID_POINTS:
            raise ValueError(
                f"A grid needs an integer number of points, at least {MIN_GRID_POINTS}, got {self.points}."
            )
        if not self.start < self.end:
            raise ValueError(f"A grid needs start < end, got {self.start} and {self.end}.")
        if self.spacing not in ("linear", "log"):
            raise ValueError(f"Unknown grid spacing '{self.spacing}'.")
        if self.spacing == "log" and not (self.start > 0 and self.end > 0):
            raise DomainError("A log grid needs positive end points.")

    @classmethod
    def parse(cls, text: str, log: bool = False) -> GridSpec:
        """Read ``start:end:count``."""
        try:
            start, end, points = text.split(":")
            return cls(float(start), float(end), int(points), "log" if log else "linear")
        except ValueError as e:
            raise ValueError(f"Bad grid '{text}', expected start:end:count. {e}")

    def values(self) -> np.ndarray:
        if self.spacing == "log":
            return np.geomspace(self.start, self.end, self.points)
        return np.linspace(self.start, self.end, self.points)


def _grid_values(grid: Union[GridSpec, Sequence[float]]) -> np.ndarray:
    if isinstance(grid, GridSpec):
        return grid.values()
    return np.asarray(grid, dtype=float)


@dataclass(frozen=True)
class VerificationReport:
    name: str
    max_residual: float
    tolerance: float
    samples: int
    degenerate: bool = False
    detail: str = ""

    @property
    def passed(self) -> bool:
        return not math.isnan(self.max_residual) and self.max_residual <= self.tolerance

    def scaled(self, factor: float) -> VerificationReport:
        return replace(self, tolerance=self.tolerance * factor)

    def as_row(self):
        return dict(
            name=self.name,
            max_residual=self.max_residual,
            tolerance=self.tolerance,
            samples=self.samples,
            passed=self.passed,
        )


def report_from_residuals(name, residuals, tolerance, detail="") -> VerificationReport:
    """Fold a sequence of residuals into a report; any NaN makes it fail."""
    residuals = np.asarray(list(residuals), dtype=float)
    if residuals.size == 0:
        worst = 0.0
    elif np.isnan(residuals).any():
        worst = math.nan
    else:
        worst = float(residuals.max())
    report = VerificationReport(name, worst, tolerance, int(residuals.size), detail=detail)
    log.debug("%s: max residual %.3g against %.3g", name, worst, tolerance)
    return report


# Finite differences


def _richardson(stencil, h):
    # Both stencils are fourth order, so one extrapolation step removes h^4
    return (16 * stencil(h) - stencil(2 * h)) / 15


def central_derivative(f: Callable, t: float, h: float) -> complex:
    """f'(t) from a 5-point central stencil, Richardson-extrapolated from h and 2h."""

    def stencil(step):
        return (f(t - 2 * step) - 8 * f(t - step) + 8 * f(t + step) - f(t + 2 * step)) / (
            12 * step
        )

    return _richardson(stencil, h)


def second_derivative(f: Callable, t: float, h: float) -> complex:
    def stencil(step):
        return (
            -f(t - 2 * step)
            + 16 * f(t - step)
            - 30 * f(t)
            + 16 * f(t + step)
            - f(t + 2 * step)
        ) / (12 * step * step)

    return _richardson(stencil, h)


def _potential_at(t, spec, variable):
    if variable is Coordinate.X:
        return potentials.potential(t, spec)
    if variable is Coordinate.Z:
        return potential_z(t, spec)
    return potentials.potential(-math.log1p(-t), spec)


def _step(t, variable, relative=RELATIVE_STEP):
    if variable is Coordinate.X:
        return relative * min(t, 1.0)
    return relative * min(t, 1.0 - t)


def pointwise_residual(
    f: Callable, t: float, spec: PotentialSpec, omega: float, variable=Coordinate.X
) -> float:
    """
    The Schrödinger residual Z'' + (ω² - V)Z at one point, written in the
    given variable and divided by the largest of its terms.

    ``f`` returns either plain values or SolutionSamples in ``variable``.
    Samples carry their own first derivative, and only that is differenced
    for the second; plain values are differenced twice.
    """
    variable = Coordinate(variable)
    if variable is Coordinate.X:
        if not t > 0:
            raise DomainError(f"x must be positive, got {t}.")
    elif not 0 < t < 1:
        raise DomainError(f"{variable.value} must lie in (0, 1), got {t}.")

    # The stencils share their points
    f = lru_cache(maxsize=None)(f)
    at_t = f(t)
    if isinstance(at_t, SolutionSample):
        if at_t.variable is not variable:
            raise CoordinateMismatchError(
                f"Samples are in {at_t.variable.value}, the residual is taken in {variable.value}."
            )
        value = at_t.value
        first = at_t.derivative
        second = central_derivative(lambda s: f(s).derivative, t, _step(t, variable, SAMPLE_STEP))
    else:
        h = _step(t, variable)
        value = at_t
        first = central_derivative(f, t, h)
        second = second_derivative(f, t, h)
    potential_value = _potential_at(t, spec, variable)

    if variable is Coordinate.X:
        terms = [second, omega ** 2 * value, -potential_value * value]
    elif variable is Coordinate.Z:
        # d/dx = -z d/dz
        terms = [t * t * second, t * first, omega ** 2 * value, -potential_value * value]
    else:
        # d/dx = (1 - v) d/dv
        w = 1.0 - t
        terms = [w * w * second, -w * first, omega ** 2 * value, -potential_value * value]

    scale = max(abs(term) for term in terms)
    if scale == 0:
        return 0.0
    return abs(sum(terms)) / scale


def _anchor(f, t, anchored):
    if anchored:
        return lambda s: f(s, t)
    return f


def ode_residual_z(
    f: Callable,
    spec: PotentialSpec,
    omega: float,
    grid,
    *,
    tolerance: float = 1e-8,
    anchored: bool = False,
    name: str = "schrodinger_z",
) -> VerificationReport:
    """
    The residual of d/dz(z f') + (ω²/z - V_z/z) f over a z grid.

    With ``anchored`` the callable is invoked as ``f(z, center)`` so that a
    whole stencil can be evaluated along one computational path. Callables
    returning SolutionSamples are differenced once, see pointwise_residual.
    """
    residuals = [
        pointwise_residual(_anchor(f, z, anchored), z, spec, omega, Coordinate.Z)
        for z in _grid_values(grid)
    ]
    return report_from_residuals(name, residuals, tolerance)


def ode_residual_v(
    f: Callable,
    spec: PotentialSpec,
    omega: float,
    grid,
    *,
    tolerance: float = 1e-8,
    anchored: bool = False,
    name: str = "schrodinger_v",
) -> VerificationReport:
    residuals = [
        pointwise_residual(_anchor(f, v, anchored), v, spec, omega, Coordinate.V)
        for v in _grid_values(grid)
    ]
    return report_from_residuals(name, residuals, tolerance)


# Dormand-Prince 5(4)

_NODES = np.array([0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1, 1])
_MATRIX = [
    np.array([]),
    np.array([1 / 5]),
    np.array([3 / 40, 9 / 40]),
    np.array([44 / 45, -56 / 15, 32 / 9]),
    np.array([19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729]),
    np.array([9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656]),
    np.array([35 / 384, 0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84]),
]
_WEIGHTS = np.array([35 / 384, 0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84, 0])
_EMBEDDED_WEIGHTS = np.array(
    [5179 / 57600, 0, 7571 / 16695, 393 / 640, -92097 / 339200, 187 / 2100, 1 / 40]
)
_ERROR_WEIGHTS = _WEIGHTS - _EMBEDDED_WEIGHTS


def _dopri_step(rhs, x, y, h):
    k = np.empty((7, y.size), dtype=complex)
    k[0] = rhs(x, y)
    for i in range(1, 7):
        k[i] = rhs(x + _NODES[i] * h, y + h * (_MATRIX[i] @ k[:i]))
    return y + h * (_WEIGHTS @ k), h * (_ERROR_WEIGHTS @ k)


def _march(rhs, x, y, targets, h, rtol, atol, max_steps):
    results = []
    steps = 0
    for target in targets:
        direction = math.copysign(1.0, target - x)
        while x != target:
            steps += 1
            if steps > max_steps:
                raise IntegrationError(f"Step budget of {max_steps} exhausted at x = {x}.")
            landing = abs(target - x) <= h
            step = (target - x) if landing else direction * h

            y_new, error = _dopri_step(rhs, x, y, step)
            scale = atol + rtol * np.maximum(np.abs(y), np.abs(y_new))
            ratio = float(np.max(np.abs(error) / scale))
            if ratio == 0:
                factor = MAX_FACTOR
            else:
                factor = min(MAX_FACTOR, max(MIN_FACTOR, SAFETY * ratio ** -0.2))

            if ratio <= 1:
                x = target if landing else x + step
                y = y_new
                h = max(h, abs(step) * factor) if landing else abs(step) * factor
            else:
                log.debug("Rejected step %.3g at x = %.6g (error ratio %.3g)", step, x, ratio)
                h = abs(step) * factor
                if h < 1e-12 * max(1.0, abs(x)):
                    raise IntegrationError(f"Step size underflow at x = {x}.")
        results.append(y.copy())
    return results


def integrate(
    rhs: Callable,
    x0: float,
    y0,
    targets: Sequence[float],
    rtol: float = RTOL,
    atol: float = ATOL,
    *,
    initial_step: float = 1e-3,
    max_steps: int = MAX_STEPS,
) -> np.ndarray:
    """
    Integrate y' = rhs(x, y) from x0 to every target with an adaptive
    Dormand-Prince 5(4) pair.

    Targets on either side of x0 are reached by marching outwards, landing
    exactly on each one. Returns an array of states in the order of
    ``targets``.
    """
    y0 = np.asarray(y0, dtype=complex).ravel()
    targets = [float(t) for t in targets]
    states = {}
    for side in (1.0, -1.0):
        ordered = sorted({t for t in targets if (t - x0) * side > 0}, key=lambda t: side * t)
        if ordered:
            for target, state in zip(
                ordered, _march(rhs, x0, y0, ordered, initial_step, rtol, atol, max_steps)
            ):
                states[target] = state
    for target in targets:
        if target == x0:
            states[target] = y0.copy()
    return np.array([states[t] for t in targets])


def integrate_radial(
    spec: PotentialSpec,
    omega: float,
    ic: SolutionSample,
    grid,
    *,
    potential: Optional[Callable[[float], float]] = None,
    rtol: float = RTOL,
    atol: float = ATOL,
):
    """
    Propagate (Z, Z') of Z'' = (V - ω²)Z from ``ic`` to every grid point.

    ``potential`` replaces V(x), for example by zero for a free particle.
    """
    if ic.variable is not Coordinate.X:
        raise CoordinateMismatchError("Initial conditions must be given in x.")
    if potential is None:
        potential = lambda x: potentials.potential(x, spec)

    def rhs(x, y):
        return np.array([y[1], (potential(x) - omega ** 2) * y[0]])

    xs = _grid_values(grid)
    states = integrate(rhs, ic.coord, [ic.value, ic.derivative], xs, rtol, atol)
    return [
        SolutionSample(float(x), complex(state[0]), complex(state[1]), Coordinate.X)
        for x, state in zip(xs, states)
    ]


def coupled_residual(z: float, pair, pair_deriv, omega: float, m: float):
    """
    The larger of the residuals of z R̃₁' + iωR̃₁ = im s R̃₂ and
    z R̃₂' - iωR̃₂ = -im s R̃₁, s = sqrt(z / (1 - z)), each divided by its
    largest term.
    """
    r1, r2 = pair
    d1, d2 = pair_deriv
    s = math.sqrt(z / (1 - z))
    lines = [
        [z * d1, 1j * omega * r1, -1j * m * s * r2],
        [z * d2, -1j * omega * r2, 1j * m * s * r1],
    ]
    residuals = []
    for terms in lines:
        scale = max(abs(term) for term in terms)
        residuals.append(abs(sum(terms)) / scale if scale else 0.0)
    return max(residuals)


def appendix_check(
    omega: float,
    m: float,
    grid,
    *,
    seed: Optional[int] = None,
    initial=None,
    tolerance: float = 1e-7,
    rtol: float = RTOL,
    atol: float = ATOL,
) -> VerificationReport:
    """
    Integrate R₁' = iωR₁ + WR₂, R₂' = -iωR₂ + WR₁ from random complex data
    and check that Z± = R₁ ± R₂ solve the V± Schrödinger equations.

    Z±' comes from the system itself and Z±'' from a finite difference of
    Z±'.
    """
    name = "appendix"
    if initial is None:
        rng = np.random.default_rng(seed)
        initial = rng.normal(size=2) + 1j * rng.normal(size=2)
    initial = np.asarray(initial, dtype=complex)
    if not np.any(initial):
        return VerificationReport(name, 0.0, tolerance, 0, degenerate=True, detail="zero initial data")

    xs = _grid_values(grid)
    h = APPENDIX_STEP
    offsets = np.array([-4, -2, -1, 0, 1, 2, 4]) * h
    if xs.min() + offsets[0] <= 0:
        raise DomainError(f"The grid must stay above {4 * h} for the difference stencil.")

    def rhs(x, r):
        w = superpotential(x, m)
        return np.array([1j * omega * r[0] + w * r[1], -1j * omega * r[1] + w * r[0]])

    targets = [x + offset for x in xs for offset in offsets]
    states = integrate(rhs, float(xs[0]), initial, targets, rtol, atol)

    residuals = []
    for index, x in enumerate(xs):
        block = states[index * len(offsets) : (index + 1) * len(offsets)]
        slopes = np.array([rhs(x + offset, state) for offset, state in zip(offsets, block)])
        for sign in Sign:
            s = sign.value
            values = block[:, 0] + s * block[:, 1]
            derivatives = dict(zip(np.round(offsets / h).astype(int), slopes[:, 0] + s * slopes[:, 1]))
            second = central_derivative(lambda t: derivatives[int(round((t - x) / h))], x, h)
            value = values[3]
            v = potentials.potential(x, PotentialSpec(m, sign))
            terms = [second, omega ** 2 * value, -v * value]
            residuals.append(abs(sum(terms)) / max(abs(t) for t in terms))

    return report_from_residuals(name, residuals, tolerance, detail=f"seed={seed}")


def wronskian_numeric(f: SolutionSample, g: SolutionSample) -> complex:
    """f g' - g f' from two samples taken at the same point."""
    if f.variable is not g.variable or f.coord != g.coord:
        raise CoordinateMismatchError(
            f"Samples at {f.variable.value}={f.coord} and {g.variable.value}={g.coord} "
            "cannot form a Wronskian."
        )
    return f.value * g.derivative - g.value * f.derivative
