import io
import json
import math

import pandas as pd
import pytest

from qspec_core.errors import DimensionMismatch, MatrixFileError
from qspec_core.models import ResidualReport, ScanGrid
from qspec_core.operators import QMatrix
from qspec_core.power_analysis import gelfand_rigidity_check, kreiss_scan, kt_scan
from qspec_core.quaternion import AXIS_IJK, Quaternion
from qspec_core.report_io import (
    axis_label,
    csv_text,
    json_text,
    matrix_frame,
    read_matrix,
    report_frame,
    sequence_frame,
    spectrum_json_text,
    write_matrix,
)
from qspec_core.spectrum import s_spectrum


def test_matrix_file_round_trip(tmp_path, corpus):
    path = tmp_path / "matrix.json"
    write_matrix(corpus[5], path)
    data = json.loads(path.read_text())
    assert data["n"] == corpus[5].n
    assert len(data["entries"][0][0]) == 4
    assert read_matrix(path).is_close(corpus[5], 0.0)


def test_matrix_file_errors(tmp_path):
    with pytest.raises(MatrixFileError):
        read_matrix(tmp_path / "missing.json")

    broken = tmp_path / "broken.json"
    broken.write_text('{"n": 2, "entries": [[[1, 0, 0]]]}')
    with pytest.raises(MatrixFileError):
        read_matrix(broken)

    short = tmp_path / "short.json"
    short.write_text(json.dumps({"n": 2, "entries": [[[1, 0, 0, 0], [0, 0, 0, 0]]]}))
    with pytest.raises(DimensionMismatch):
        read_matrix(short)


def test_spectrum_json():
    data = json.loads(spectrum_json_text(s_spectrum(QMatrix.identity(2))))
    assert data == [{"x": 1.0, "y": 0.0, "modulus": 1.0}]


def test_csv_keeps_full_precision():
    text = csv_text(sequence_frame([0.1, 1.0 / 3.0]))
    assert text.splitlines() == ["n,value", "0,0.10000000000000001", "1,0.33333333333333331"]


def test_non_finite_values_stay_valid_json():
    data = json.loads(json_text(ResidualReport(residual=math.inf, bound=1.0)))
    assert data == {"residual": "Infinity", "bound": 1.0}


def test_matrix_frame():
    frame = matrix_frame(QMatrix.diag([Quaternion(w=1.0, z=2.0), Quaternion(x=3.0)]))
    assert list(frame.columns) == ["row", "col", "w", "x", "y", "z"]
    assert len(frame) == 4
    assert frame.loc[3, "x"] == 3.0


def test_report_frames(one_and_contraction):
    kt = report_frame(kt_scan(one_and_contraction, horizon=10))
    assert list(kt["n"]) == list(range(11))

    gelfand = report_frame(gelfand_rigidity_check(QMatrix.identity(2), horizon=3))
    assert list(gelfand["n"]) == [-3, -2, -1, 0, 1, 2, 3]
    assert gelfand["value"].tolist() == pytest.approx([1.0] * 7)

    grid = ScanGrid(radii=[1.5, 1.1], angles=ScanGrid.uniform_angles(4), axes=[AXIS_IJK])
    kreiss = report_frame(kreiss_scan(one_and_contraction, grid))
    assert list(kreiss["radius"]) == [1.1, 1.5]

    spectrum = report_frame(s_spectrum(one_and_contraction))
    assert list(spectrum.columns) == ["x", "y", "modulus"]

    with pytest.raises(TypeError):
        report_frame(ResidualReport(residual=0.0, bound=0.0))


def test_axis_label():
    assert axis_label(AXIS_IJK) == ";".join([f"{1.0 / math.sqrt(3.0):.17g}"] * 3)
    frame = pd.read_csv(io.StringIO(csv_text(pd.DataFrame({"axis": [axis_label(AXIS_IJK)]}))))
    assert frame.loc[0, "axis"].count(";") == 2
