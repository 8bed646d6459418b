"""
Command line front end.

    ces-solver potential --m 2 --grid 0.05:10:200
    ces-solver solve --omega 1 --m 1 --branch II --sign minus --var z
    ces-solver scatter --m 1 --grid 0.25:4:16 --format json
    ces-solver zero-energy --m 1
    ces-solver verify --m-list 0.5,1,2 --omega-list 0.5,1,2

Tables go to stdout (or --out) as CSV or JSON. With CSV the metadata is
written to stderr as one JSON line.
"""
import argparse
import cmath
import json
import logging
import math
import sys
from typing import Optional, Sequence

import numpy as np
import pandas as pd

from .exceptions import GammaPoleError, HypergeometricError, ParameterError
from .oracle import GridSpec, pointwise_residual, wronskian_numeric
from .potentials import (
    PotentialSpec,
    Sign,
    hulthen,
    landmarks,
    potential,
    superpotential,
)
from .profiler import Profiler
from .scattering import DERIVED, scattering_amplitude_minus, scattering_amplitude_plus
from .solutions import (
    Branch,
    Coordinate,
    ZeroEnergy,
    anchored_method,
    make_params,
    solution_v_sample,
    solution_v_x,
    solution_x,
    solution_z_sample,
    wronskian_closed,
    wronskian_v_closed,
    zero_energy_hypergeometric,
    zero_energy_state,
)
from .suite import (
    CHECK_NAMES,
    LOOSE_SCALE,
    report_from_result,
    tolerance_scale_from_environment,
    verification_suite,
)

log = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2

DEFAULT_GRIDS = {
    "potential": "0.05:10:200",
    "solve-x": "0.1:5:50",
    "solve-z": "0.05:0.95:19",
    "solve-v": "0.05:0.95:19",
    "scatter": "0.25:4:16",
    "zero-energy": "0.05:10:50",
}


def _complex_json(value: complex):
    return {"re": value.real, "im": value.imag}


def _split(name, values):
    values = np.asarray(values, dtype=complex)
    return {f"{name}.re": values.real, f"{name}.im": values.imag}


def _grid(args, key) -> np.ndarray:
    return GridSpec.parse(args.grid or DEFAULT_GRIDS[key], log=args.log).values()


def _float_list(text):
    try:
        return tuple(float(item) for item in text.split(",") if item.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"Expected a comma separated list of numbers, got '{text}'.")


# Commands


def potential_table(args):
    m = args.m
    rows = []
    for x in _grid(args, "potential"):
        rows.append(
            dict(
                x=x,
                W=superpotential(x, m),
                V_plus=potential(x, PotentialSpec(m, Sign.PLUS)),
                V_minus=potential(x, PotentialSpec(m, Sign.MINUS)),
                hulthen_ref=hulthen(x, m * m),
            )
        )
    meta = dict(command="potential", m=m, landmarks=landmarks(m).as_dict() if m > 0 else None)
    return pd.DataFrame(rows), meta, EXIT_OK


def _evaluator(variable, branch, sign, p):
    """(sample at t, sample function anchored at a stencil center)."""
    if variable is Coordinate.X:
        return (
            lambda t: solution_x(branch, sign, t, p),
            lambda s, center: solution_x(
                branch, sign, s, p, method=anchored_method(math.exp(-center))
            ),
        )
    if variable is Coordinate.Z:
        return (
            lambda t: solution_z_sample(branch, sign, t, p),
            lambda s, center: solution_z_sample(
                branch, sign, s, p, method=anchored_method(center)
            ),
        )
    return (
        lambda t: solution_v_sample(branch, sign, t, p),
        lambda s, center: solution_v_sample(branch, sign, s, p, method=anchored_method(center)),
    )


def solve_table(args):
    branch = Branch.parse(args.branch)
    sign = Sign.parse(args.sign)
    variable = Coordinate(args.var)
    p = make_params(args.omega, args.m)
    spec = PotentialSpec(args.m, sign)
    sample_at, anchored = _evaluator(variable, branch, sign, p)

    rows = []
    for t in _grid(args, f"solve-{variable.value}"):
        value = sample_at(t).value
        residual = pointwise_residual(lambda s, t=t: anchored(s, t), t, spec, p.omega, variable)
        rows.append(
            {"coord": t, "Z.re": value.real, "Z.im": value.imag, "Z.abs": abs(value), "residual": residual}
        )
    frame = pd.DataFrame(rows)

    meta = dict(
        command="solve",
        omega=p.omega,
        m=p.m,
        branch=branch.value,
        sign=str(sign),
        variable=variable.value,
    )
    if branch is Branch.II and len(frame):
        t = float(frame["coord"].iloc[0])
        if variable is Coordinate.V:
            x = -math.log1p(-t)
            numeric = wronskian_numeric(
                solution_v_x(Branch.I, sign, x, p), solution_v_x(Branch.II, sign, x, p)
            )
            closed = wronskian_v_closed(sign, p)
        else:
            x = t if variable is Coordinate.X else -math.log(t)
            numeric = wronskian_numeric(
                solution_x(Branch.I, sign, x, p), solution_x(Branch.II, sign, x, p)
            )
            closed = wronskian_closed(sign, p)
        meta["wronskian"] = dict(x=x, numeric=_complex_json(numeric), closed=_complex_json(closed))
    return frame, meta, EXIT_OK


def scatter_table(args):
    m = args.m
    omegas = _grid(args, "scatter")
    amplitudes = {Sign.PLUS: [], Sign.MINUS: []}
    ok = []
    for omega in omegas:
        try:
            plus = scattering_amplitude_plus(omega, m).amplitude
            minus = scattering_amplitude_minus(omega, m).amplitude
            ok.append(1)
        except (GammaPoleError, HypergeometricError) as e:
            log.warning("No amplitude at omega=%s: %s", omega, e)
            plus = minus = complex(math.nan, math.nan)
            ok.append(0)
        amplitudes[Sign.PLUS].append(plus)
        amplitudes[Sign.MINUS].append(minus)

    valid = np.array(ok, dtype=bool)
    columns = {"omega": omegas}
    for sign in Sign:
        values = np.array(amplitudes[sign], dtype=complex)
        phases = np.full(len(values), math.nan)
        if valid.any():
            phases[valid] = np.unwrap([cmath.phase(s) for s in values[valid]])
        columns.update(_split(f"S_{sign}", values))
        columns[f"phase_{sign}"] = phases
    for sign in Sign:
        values = np.array(amplitudes[sign], dtype=complex)
        columns[f"unitarity_error_{sign}"] = np.abs(np.abs(values) - 1)
    columns["ok"] = ok

    order = [
        "omega",
        "S_plus.re",
        "S_plus.im",
        "phase_plus",
        "S_minus.re",
        "S_minus.im",
        "phase_minus",
        "unitarity_error_plus",
        "unitarity_error_minus",
        "ok",
    ]
    meta = dict(command="scatter", m=m, minus_provenance=DERIVED)
    return pd.DataFrame(columns)[order], meta, EXIT_OK


def zero_energy_table(args):
    m = args.m
    rows = []
    for x in _grid(args, "zero-energy"):
        row = dict(x=x)
        errors = []
        for which, label in [(ZeroEnergy.PSI_MINUS, "psi_minus"), (ZeroEnergy.PSI_PLUS, "psi_plus")]:
            state = zero_energy_state(x, m, which)
            row[f"{label}.re"] = state.real
            row[f"{label}.im"] = state.imag
            hypergeometric = zero_energy_hypergeometric(math.exp(-x), m, which)
            errors.append(abs(hypergeometric - state) / abs(state))
        row["hyp_consistency_error"] = max(errors)
        rows.append(row)
    return pd.DataFrame(rows), dict(command="zero-energy", m=m), EXIT_OK


def verify_table(args):
    omegas = args.omega_list
    ms = args.m_list
    if not omegas or any(not omega > 0 for omega in omegas):
        raise ParameterError(f"Every omega must be positive, got {omegas}.")
    if not ms or any(m == 0 for m in ms):
        raise ParameterError(f"Every m must be nonzero, got {ms}.")
    unknown = sorted(set(args.checks or []) - set(CHECK_NAMES))
    if unknown:
        raise ParameterError(f"Unknown checks {unknown}; choose from {CHECK_NAMES}.")
    tolerance_scale = tolerance_scale_from_environment()
    if args.strictness == "loose":
        tolerance_scale *= LOOSE_SCALE

    suite = verification_suite(
        omegas,
        ms,
        tolerance_scale=tolerance_scale,
        c1_perturbation=args.inject_fault,
        checks=args.checks,
    )
    profiler = Profiler() if args.profile else None
    results = list(suite.run_tests(progress_callback=profiler))
    reports = [report_from_result(result) for result in results]

    if profiler:
        print(json.dumps(profiler.results()), file=sys.stderr)
    if args.dot:
        with open(args.dot, "w") as f:
            f.write(suite.graphviz(test_results=results).source)

    frame = pd.DataFrame([report.as_row() for report in reports])
    failed = [report.name for report in reports if not report.passed]
    meta = dict(command="verify", tolerance_scale=tolerance_scale, failed=failed)
    return frame, meta, EXIT_FAILED if failed else EXIT_OK


COMMANDS = {
    "potential": potential_table,
    "solve": solve_table,
    "scatter": scatter_table,
    "zero-energy": zero_energy_table,
    "verify": verify_table,
}


# Output


def _json_default(value):
    if isinstance(value, np.generic):
        return value.item()
    raise TypeError(f"{type(value).__name__} is not JSON serializable")


def _nan_to_none(value):
    if isinstance(value, dict):
        return {k: _nan_to_none(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_nan_to_none(v) for v in value]
    if isinstance(value, float) and math.isnan(value):
        return None
    return value


def emit(frame: pd.DataFrame, meta: dict, output_format: str, out=None):
    stream = open(out, "w", newline="") if out else sys.stdout
    try:
        if output_format == "json":
            rows = frame.astype(object).where(frame.notna(), None).to_dict("records")
            document = _nan_to_none(dict(meta=meta, rows=rows))
            json.dump(document, stream, default=_json_default, indent=2)
            stream.write("\n")
        else:
            frame.to_csv(stream, index=False, float_format="%.17g", lineterminator="\n")
            print(json.dumps(_nan_to_none(meta), default=_json_default), file=sys.stderr)
    finally:
        if out:
            stream.close()


# Parsing


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--m", type=float, default=1.0, help="coupling m")
    common.add_argument("--omega", type=float, default=1.0, help="wave number ω > 0")
    common.add_argument(
        "--grid", "--x", dest="grid", default=None, help="start:end:count of the sampled variable"
    )
    common.add_argument("--log", action="store_true", help="logarithmic grid spacing")
    common.add_argument("--format", choices=["csv", "json"], default="csv")
    common.add_argument("--out", default=None, help="write here instead of stdout")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(
        prog="ces-solver",
        description="Exact solutions and scattering for the partner potentials "
        "V± = m²/(eˣ-1) ± (m/2)eˣ/(eˣ-1)^{3/2}.",
    )
    commands = parser.add_subparsers(dest="command", required=True)

    commands.add_parser("potential", parents=[common], help="tabulate W, V± and landmarks")

    solve = commands.add_parser("solve", parents=[common], help="tabulate an exact solution")
    solve.add_argument("--branch", choices=["I", "II"], default="I")
    solve.add_argument("--sign", choices=["plus", "minus"], default="plus")
    solve.add_argument("--var", choices=["x", "z", "v"], default="x")

    commands.add_parser("scatter", parents=[common], help="S± over an ω sweep given by --grid")
    commands.add_parser("zero-energy", parents=[common], help="tabulate the ω = 0 states")

    verify = commands.add_parser("verify", parents=[common], help="run the verification suite")
    verify.add_argument("--m-list", type=_float_list, default=(0.5, 1.0, 2.0))
    verify.add_argument("--omega-list", type=_float_list, default=(0.5, 1.0, 2.0))
    verify.add_argument("--strictness", choices=["normal", "loose"], default="normal")
    verify.add_argument("--checks", type=lambda s: [c for c in s.split(",") if c], default=None)
    verify.add_argument("--profile", action="store_true", help="print node timings to stderr")
    verify.add_argument("--dot", default=None, help="write the check graph as DOT source")
    verify.add_argument("--inject-fault", type=float, default=0.0, help=argparse.SUPPRESS)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )

    try:
        frame, meta, code = COMMANDS[args.command](args)
    except ValueError as e:
        # DomainError and ParameterError are ValueErrors too
        print(f"ces-solver: error: {e}", file=sys.stderr)
        return EXIT_USAGE

    emit(frame, meta, args.format, args.out)
    return code


if __name__ == "__main__":
    sys.exit(main())
