import io
import json

import pandas as pd
import pytest

from ces_solver.cli import EXIT_FAILED, EXIT_OK, EXIT_USAGE, main
from ces_solver.scattering import DERIVED


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def last_json_line(text):
    return json.loads(text.strip().splitlines()[-1])


def test_potential_csv(capsys):
    code, out, err = run(capsys, "potential", "--m", "2", "--grid", "0.1:5:10")
    assert code == EXIT_OK

    frame = pd.read_csv(io.StringIO(out))
    assert list(frame.columns) == ["x", "W", "V_plus", "V_minus", "hulthen_ref"]
    assert len(frame) == 10
    assert (frame.V_plus > 0).all()

    meta = last_json_line(err)
    assert meta["command"] == "potential"
    assert meta["landmarks"]["zero_crossings"][0] == pytest.approx(8 - 4 * 3 ** 0.5)


def test_potential_json(capsys):
    code, out, _ = run(capsys, "potential", "--m", "0.5", "--x", "1:2:3", "--format", "json")
    assert code == EXIT_OK
    document = json.loads(out)
    assert document["meta"]["landmarks"]["critical_points"] is None
    assert [row["x"] for row in document["rows"]] == [1.0, 1.5, 2.0]


def test_output_file(capsys, tmp_path):
    path = tmp_path / "table.csv"
    code, out, _ = run(capsys, "potential", "--grid", "1:2:3", "--out", str(path))
    assert code == EXIT_OK
    assert out == ""
    assert path.read_text().splitlines()[0] == "x,W,V_plus,V_minus,hulthen_ref"


@pytest.mark.parametrize("var", ["x", "z", "v"])
def test_solve(capsys, var):
    code, out, err = run(capsys, "solve", "--branch", "II", "--sign", "minus", "--var", var, "--grid", "0.2:0.8:4")
    assert code == EXIT_OK

    frame = pd.read_csv(io.StringIO(out))
    assert list(frame.columns) == ["coord", "Z.re", "Z.im", "Z.abs", "residual"]
    assert (frame.residual < 1e-8).all()

    meta = last_json_line(err)
    assert meta["variable"] == var
    numeric = complex(meta["wronskian"]["numeric"]["re"], meta["wronskian"]["numeric"]["im"])
    closed = complex(meta["wronskian"]["closed"]["re"], meta["wronskian"]["closed"]["im"])
    assert abs(numeric - closed) < 1e-8 * abs(closed)


def test_solve_at_zero_energy_is_a_usage_error(capsys):
    code, out, err = run(capsys, "solve", "--omega", "0")
    assert code == EXIT_USAGE
    assert out == ""
    assert "zero-energy" in err


def test_unknown_choice_exits_through_argparse(capsys):
    with pytest.raises(SystemExit) as info:
        main(["solve", "--var", "w"])
    assert info.value.code == 2


def test_scatter(capsys):
    code, out, err = run(capsys, "scatter", "--m", "1", "--grid", "0.5:2:4")
    assert code == EXIT_OK

    frame = pd.read_csv(io.StringIO(out))
    assert len(frame) == 4
    assert (frame.ok == 1).all()
    assert (frame.unitarity_error_plus < 1e-10).all()
    assert (frame.unitarity_error_minus < 1e-8).all()
    assert last_json_line(err)["minus_provenance"] == DERIVED


def test_scatter_needs_positive_m(capsys):
    code, out, _ = run(capsys, "scatter", "--m", "-1", "--grid", "0.5:1:3")
    assert code == EXIT_USAGE


def test_zero_energy(capsys):
    code, out, _ = run(capsys, "zero-energy", "--m", "1", "--grid", "0.1:5:5", "--format", "json")
    assert code == EXIT_OK
    rows = json.loads(out)["rows"]
    assert len(rows) == 5
    assert all(row["hyp_consistency_error"] < 1e-10 for row in rows)
    assert all(row["psi_minus.re"] * row["psi_plus.re"] == pytest.approx(1) for row in rows)


def test_verify_subset_passes(capsys):
    code, out, err = run(
        capsys, "verify", "--checks", "gauss_summation,gamma_reflection,landmarks", "--profile"
    )
    assert code == EXIT_OK
    frame = pd.read_csv(io.StringIO(out))
    assert set(frame.name) == {"gauss_summation", "gamma_reflection", "landmarks"}
    assert frame.passed.all()

    lines = err.strip().splitlines()
    timings = json.loads(lines[-2])
    assert set(timings["tests"]) == {"gauss_summation", "gamma_reflection", "landmarks"}
    assert last_json_line(err)["failed"] == []


def test_verify_detects_an_injected_fault(capsys):
    code, _, err = run(
        capsys,
        "verify",
        "--checks",
        "coupled_system",
        "--m-list",
        "1",
        "--omega-list",
        "1",
        "--inject-fault",
        "1e-3",
    )
    assert code == EXIT_FAILED
    assert last_json_line(err)["failed"] == ["coupled_system"]


def test_verify_writes_dot(capsys, tmp_path):
    path = tmp_path / "checks.dot"
    code, _, _ = run(capsys, "verify", "--checks", "gamma_reflection", "--dot", str(path))
    assert code == EXIT_OK
    source = path.read_text()
    assert "digraph" in source
    assert "gamma_reflection" in source


@pytest.mark.parametrize(
    "argv",
    [
        ["verify", "--checks", "no_such_check"],
        ["verify", "--omega-list", "0,1"],
        ["verify", "--m-list", "0"],
    ],
)
def test_verify_usage_errors(capsys, argv):
    code, _, _ = run(capsys, *argv)
    assert code == EXIT_USAGE


def test_bad_tolerance_variable(capsys, monkeypatch):
    monkeypatch.setenv("CES_SOLVER_TOL", "abc")
    code, _, err = run(capsys, "verify", "--checks", "gamma_reflection")
    assert code == EXIT_USAGE
    assert "CES_SOLVER_TOL" in err


@pytest.mark.parametrize("grid", ["5:1:10", "1:5:2"])
def test_degenerate_grids_are_usage_errors(capsys, grid):
    code, out, err = run(capsys, "potential", "--grid", grid)
    assert code == EXIT_USAGE
    assert out == ""
    assert "grid" in err


def test_potential_far_out(capsys):
    code, out, _ = run(capsys, "potential", "--m", "1", "--grid", "1:800:3")
    assert code == EXIT_OK
    frame = pd.read_csv(io.StringIO(out))
    assert len(frame) == 3
    assert frame.iloc[-1][["W", "V_plus", "V_minus", "hulthen_ref"]].abs().max() < 1e-150
