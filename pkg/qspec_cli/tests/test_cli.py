import json

import pandas as pd
import pytest

from qspec_cli.cli import COMMANDS, RunConfig, build_parser, main
from qspec_core.operators import QMatrix, op_norm
from qspec_core.report_io import read_matrix

# small grids keep every command quick
COMMAND_ARGS = {
    "spectrum": [],
    "resolvent": ["--point", "2,0,1,0", "--power", "2"],
    "yosida": ["--radii", "1.5,2", "--angles", "4", "--n-max", "3"],
    "calculus": ["--function", "q^2", "--radius", "2", "--nodes", "64"],
    "powers": ["--n-max", "20"],
    "kreiss": ["--radii", "1.5,2", "--angles", "4"],
    "kt": ["--n-max", "20"],
    "ritt": ["--radii", "1.5,1.25", "--angles", "4", "--n-max", "20"],
    "gelfand": ["--n-max", "20"],
    "fixtures": ["--kind", "diagonal", "--n", "3"],
}


@pytest.fixture
def random_file(tmp_path):
    path = tmp_path / "random.json"
    assert main(["fixtures", "--seed", "3", "--kind", "random", "--n", "2", "--out", str(path)]) == 0
    return path


def test_every_command_has_arguments():
    assert set(COMMAND_ARGS) == set(COMMANDS)


def test_defaults_reproduce_the_documented_grids():
    config = RunConfig.from_args(build_parser().parse_args(["kreiss", "--input", "m.json"]))
    grid = config.scan_grid()
    assert grid.radii == [1.05, 1.1, 1.25, 1.5, 2.0, 4.0]
    assert len(grid.angles) == 16
    assert len(grid.axes) == 3
    assert grid.n_max == 12
    assert config.nodes == 1024


@pytest.mark.parametrize("command", sorted(COMMAND_ARGS))
@pytest.mark.parametrize("fmt", ["json", "csv"])
def test_reports_are_deterministic(tmp_path, random_file, command, fmt):
    outputs = []
    for run in range(2):
        out = tmp_path / f"{command}-{run}.{fmt}"
        argv = [command, "--input", str(random_file), "--seed", "5", "--format", fmt, "--out", str(out)]
        assert main(argv + COMMAND_ARGS[command]) == 0
        outputs.append(out.read_bytes())
    assert outputs[0] == outputs[1]
    assert outputs[0]


def test_spectrum_of_identity(tmp_path, identity_file):
    out = tmp_path / "spectrum.json"
    assert main(["spectrum", "--input", str(identity_file), "--out", str(out)]) == 0
    assert json.loads(out.read_text()) == [{"x": 1.0, "y": 0.0, "modulus": 1.0}]


def test_kt_csv_of_minus_identity(tmp_path, matrix_file):
    path = matrix_file(QMatrix.identity(2) * -1.0)
    out = tmp_path / "kt.csv"
    assert main(["kt", "--input", str(path), "--format", "csv", "--out", str(out)]) == 0
    frame = pd.read_csv(out)
    assert list(frame.columns) == ["n", "value"]
    assert len(frame) == 201
    assert frame["value"].tolist() == pytest.approx([2.0] * 201)


def test_shift_function(tmp_path, one_and_contraction_file):
    out = tmp_path / "shift.json"
    argv = ["calculus", "--input", str(one_and_contraction_file), "--function", "q-1", "--radius", "2", "--nodes", "1024"]
    assert main(argv + ["--out", str(out)]) == 0
    t = read_matrix(one_and_contraction_file)
    assert op_norm(read_matrix(out) - (t - QMatrix.identity(2))) <= 1e-8


def test_jordan_fixture(tmp_path):
    out = tmp_path / "jordan.json"
    assert main(["fixtures", "--seed", "1", "--kind", "jordan", "--n", "2", "--out", str(out)]) == 0
    entries = json.loads(out.read_text())["entries"]
    assert entries == [[[1.0, 0.0, 0.0, 0.0], [1.0, 0.0, 0.0, 0.0]], [[0.0, 0.0, 0.0, 0.0], [1.0, 0.0, 0.0, 0.0]]]


def test_report_to_stdout(capsys, identity_file):
    assert main(["powers", "--input", str(identity_file), "--n-max", "5"]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["classification"] == "bounded"
    assert report["norms"] == pytest.approx([1.0] * 6)


def test_summary_line(capsys, tmp_path, identity_file):
    out = tmp_path / "gelfand.json"
    assert main(["gelfand", "--input", str(identity_file), "--n-max", "5", "--out", str(out)]) == 0
    assert str(out) in capsys.readouterr().out
    assert json.loads(out.read_text())["consistent"]


def test_domain_failures_exit_with_two(capsys, identity_file):
    assert main(["resolvent", "--input", str(identity_file), "--point", "1,0,0,0"]) == 2
    assert "error=SpectrumPoint" in capsys.readouterr().err

    assert main(["calculus", "--input", str(identity_file), "--power", "2", "--radius", "1"]) == 2
    assert "error=ContourThroughSpectrum" in capsys.readouterr().err

    assert main(["calculus", "--input", str(identity_file), "--power", "2", "--order", "2", "--side", "right"]) == 2
    assert "error=DomainError" in capsys.readouterr().err


def test_input_failures_exit_with_one(capsys, tmp_path, identity_file):
    assert main(["spectrum", "--input", str(tmp_path / "missing.json")]) == 1
    assert "error=MatrixFileError" in capsys.readouterr().err

    broken = tmp_path / "broken.json"
    broken.write_text("not json")
    assert main(["kt", "--input", str(broken)]) == 1
    assert "error=MatrixFileError" in capsys.readouterr().err

    assert main(["spectrum"]) == 1
    assert "error=UsageError" in capsys.readouterr().err

    assert main(["spectrum", "--input", str(identity_file), "--format", "xml"]) == 1
    assert main(["nonsense"]) == 1
    assert main(["kreiss", "--input", str(identity_file), "--axis", "0,0,0"]) == 1
    assert main(["kreiss", "--input", str(identity_file), "--radii", "0.5,2"]) == 1
    assert main(["calculus", "--input", str(identity_file), "--function", "sin"]) == 1
    assert main(["resolvent", "--input", str(identity_file)]) == 1
    capsys.readouterr()
