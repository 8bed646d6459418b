"""
Exact solutions, scattering amplitudes and numerical verification for the
partner potentials V± = m²/(eˣ-1) ± (m/2)eˣ/(eˣ-1)^{3/2}.
"""
from .exceptions import (
    CesSolverError,
    ConvergenceError,
    CoordinateMismatchError,
    DegenerateConnectionError,
    DomainError,
    FitError,
    GammaPoleError,
    HypergeometricError,
    IntegrationError,
    ParameterError,
)
from .graph import Composer, ComposerTestResult
from .potentials import PotentialLandmarks, PotentialSpec, Sign, landmarks, potential, superpotential
from .profiler import Profiler
from .scattering import (
    ScatteringResult,
    asymptotic_fit,
    physical_solution,
    scattering_amplitude_minus,
    scattering_amplitude_plus,
)
from .solutions import (
    Branch,
    Coordinate,
    SolutionSample,
    SpectralParams,
    ZeroEnergy,
    make_params,
    solution_v,
    solution_x,
    solution_z,
    zero_energy_state,
)
from .special_fn import Hyp2F1Params, gamma, hyp2f1, log_gamma

__version__ = "0.1.0"
