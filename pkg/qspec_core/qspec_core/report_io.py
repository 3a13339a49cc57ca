"""
Matrix files, JSON reports and CSV tables.

A matrix file is {"n": n, "entries": [[[w, x, y, z], ...], ...]} in row-major order.
CSV tables carry full double precision so that they can serve as regression baselines.
"""

import logging
from pathlib import Path
from typing import List, Union

import pandas as pd
from pydantic import BaseModel, Field, TypeAdapter, ValidationError

from qspec_core.errors import DimensionMismatch, MatrixFileError
from qspec_core.models import (
    GelfandReport,
    KreissReport,
    KTReport,
    PowerReport,
    RittReport,
    SliceScanReport,
    SpectralMappingReport,
    SpectralSphere,
    SSpectrum,
    YosidaScanReport,
)
from qspec_core.operators import QMatrix
from qspec_core.quaternion import Quaternion, UnitImaginary

logger = logging.getLogger(__name__)

CSV_FLOAT_FORMAT = "%.17g"

PathLike = Union[str, Path]


class MatrixFile(BaseModel):
    n: int = Field(ge=1)
    entries: List[List[Quaternion]]

    @classmethod
    def from_matrix(cls, t: QMatrix) -> "MatrixFile":
        return cls(n=t.n, entries=[[t.entry(r, c) for c in range(t.n)] for r in range(t.n)])

    def to_matrix(self) -> QMatrix:
        if len(self.entries) != self.n:
            raise DimensionMismatch(self.n, len(self.entries), "matrix rows")
        for row in self.entries:
            if len(row) != self.n:
                raise DimensionMismatch(self.n, len(row), "matrix row length")
        return QMatrix.from_entries([[q.as_list() for q in row] for row in self.entries])


def read_matrix(path: PathLike) -> QMatrix:
    try:
        text = Path(path).read_text()
    except OSError as e:
        raise MatrixFileError(f"cannot read matrix file {path}: {e}") from e
    try:
        data = MatrixFile.model_validate_json(text)
    except ValidationError as e:
        raise MatrixFileError(f"{path} is not a matrix file ({e.error_count()} validation errors)") from e
    return data.to_matrix()


def matrix_json_text(t: QMatrix) -> str:
    return MatrixFile.from_matrix(t).model_dump_json(indent=2)


def write_matrix(t: QMatrix, path: PathLike):
    write_text(matrix_json_text(t), path)


def json_text(report: BaseModel) -> str:
    return report.model_dump_json(indent=2)


def spectrum_json_text(spectrum: SSpectrum) -> str:
    """The S-spectrum as a bare list of {x, y, modulus}."""
    return TypeAdapter(List[SpectralSphere]).dump_json(spectrum.spheres, indent=2).decode()


def csv_text(frame: pd.DataFrame) -> str:
    return frame.to_csv(float_format=CSV_FLOAT_FORMAT, index=False)


def write_text(text: str, path: PathLike):
    Path(path).write_text(text if text.endswith("\n") else text + "\n")
    logger.debug("wrote %d bytes to %s", len(text), path)


def axis_label(axis: UnitImaginary) -> str:
    d = axis.direction
    return f"{d.x:.17g};{d.y:.17g};{d.z:.17g}"


def matrix_frame(t: QMatrix) -> pd.DataFrame:
    rows = []
    for r in range(t.n):
        for c in range(t.n):
            q = t.entry(r, c)
            rows.append({"row": r, "col": c, "w": q.w, "x": q.x, "y": q.y, "z": q.z})
    return pd.DataFrame(rows, columns=["row", "col", "w", "x", "y", "z"])


def sequence_frame(values: List[float], start: int = 0) -> pd.DataFrame:
    return pd.DataFrame({"n": range(start, start + len(values)), "value": values})


def report_frame(report: BaseModel) -> pd.DataFrame:
    """The tabular part of a report."""
    if isinstance(report, SSpectrum):
        return pd.DataFrame([{"x": s.x, "y": s.y, "modulus": s.modulus} for s in report.spheres], columns=["x", "y", "modulus"])
    if isinstance(report, SliceScanReport):
        return pd.DataFrame(
            [
                {
                    "re": row.re,
                    "im_modulus": row.im_modulus,
                    "axis": axis_label(row.axis),
                    "margin": row.margin,
                    "in_spectrum": row.in_spectrum,
                    "in_resolvent_set": row.in_resolvent_set,
                }
                for row in report.rows
            ]
        )
    if isinstance(report, YosidaScanReport):
        return pd.DataFrame(
            [
                {"radius": p.radius, "angle": p.angle, "axis": axis_label(p.axis), "side": p.side.value, "n": p.n, "value": p.value}
                for p in report.per_point
            ]
        )
    if isinstance(report, RittReport):
        return pd.DataFrame(
            [{"radius": p.radius, "angle": p.angle, "axis": axis_label(p.axis), "value": p.value} for p in report.table]
        )
    if isinstance(report, KreissReport):
        return pd.DataFrame({"radius": sorted(report.grid.radii), "value": report.radius_maxima})
    if isinstance(report, PowerReport):
        return sequence_frame(report.norms)
    if isinstance(report, KTReport):
        return sequence_frame(report.d)
    if isinstance(report, GelfandReport):
        negative = list(reversed(report.negative_norms[1:]))
        return sequence_frame(negative + report.positive_norms, start=-len(negative))
    if isinstance(report, SpectralMappingReport):
        return pd.DataFrame(
            [{"set": "computed", "x": s.x, "y": s.y} for s in report.computed.spheres]
            + [{"set": "mapped", "x": s.x, "y": s.y} for s in report.mapped.spheres]
        )
    raise TypeError(f"no table layout for {type(report).__name__}")
