import math
from enum import Enum
from typing import List, Literal, NamedTuple, Optional

from pydantic import BaseModel, ConfigDict, Field, computed_field, model_validator

from qspec_core.quaternion import AXIS_I, AXIS_IJK, AXIS_J, UnitImaginary


class Side(str, Enum):
    LEFT = "left"
    RIGHT = "right"


class ReportModel(BaseModel):
    # inf/nan survive as strings so that reports stay valid JSON
    model_config = ConfigDict(ser_json_inf_nan="strings")

    def json(self, **kwargs):
        return super().model_dump_json(**kwargs)


class SpectralSphere(BaseModel):
    """The sphere [x + y S]; y = 0 is the real point x."""

    model_config = ConfigDict(frozen=True)

    x: float
    y: float = Field(ge=0.0)

    @computed_field  # type: ignore[prop-decorator]
    @property
    def modulus(self) -> float:
        return math.hypot(self.x, self.y)

    @property
    def distance_to_one(self) -> float:
        """|s - 1| for any s on the sphere."""
        return math.hypot(self.x - 1.0, self.y)

    def distance(self, x: float, y: float) -> float:
        return math.hypot(self.x - x, self.y - y)

    def __str__(self):
        return f"[{self.x:.6g} + {self.y:.6g}S]" if self.y else f"{{{self.x:.6g}}}"


class SSpectrum(BaseModel):
    model_config = ConfigDict(frozen=True)

    spheres: List[SpectralSphere]

    @property
    def radius(self) -> float:
        return max((s.modulus for s in self.spheres), default=0.0)

    def min_distance(self, x: float, y: float) -> float:
        return min((s.distance(x, y) for s in self.spheres), default=math.inf)

    def contains(self, x: float, y: float, tol: float) -> bool:
        return self.min_distance(x, y) <= tol

    def hausdorff(self, other: "SSpectrum") -> float:
        """Hausdorff distance between the two sphere sets in the (x, y) half-plane."""
        if not self.spheres or not other.spheres:
            return 0.0 if not self.spheres and not other.spheres else math.inf
        forward = max(other.min_distance(s.x, s.y) for s in self.spheres)
        backward = max(self.min_distance(s.x, s.y) for s in other.spheres)
        return max(forward, backward)

    def within_one(self, tol: float) -> bool:
        """True when every sphere is the real point 1 (within tol)."""
        return all(s.distance(1.0, 0.0) <= tol for s in self.spheres)

    def __len__(self):
        return len(self.spheres)


class Membership(NamedTuple):
    in_resolvent_set: bool
    margin: float


class ScanGrid(BaseModel):
    """Grid of s = r e^{I theta} with |s| > 1 used by the Kreiss and Yosida scans."""

    model_config = ConfigDict(frozen=True)

    radii: List[float] = [1.05, 1.1, 1.25, 1.5, 2.0, 4.0]
    angles: List[float] = Field(default_factory=lambda: [-math.pi + 2 * math.pi * k / 16 for k in range(16)])
    axes: List[UnitImaginary] = Field(default_factory=lambda: [AXIS_I, AXIS_J, AXIS_IJK])
    n_max: int = Field(default=12, ge=1)

    @model_validator(mode="after")
    def check_radii(self) -> "ScanGrid":
        if not self.radii or min(self.radii) <= 1.0:
            raise ValueError("scan radii must all exceed 1")
        return self

    @property
    def size(self) -> int:
        return len(self.radii) * len(self.angles) * len(self.axes)

    @classmethod
    def uniform_angles(cls, count: int) -> List[float]:
        return [-math.pi + 2 * math.pi * k / count for k in range(count)]


def _ritt_radii() -> List[float]:
    return [1.0 + 2.0**-k for k in range(1, 13)]


def _ritt_angles() -> List[float]:
    # clustered toward theta = 0 where s approaches 1
    angles = [0.0, math.pi]
    for j in range(1, 13):
        t = math.pi * 2.0**-j
        angles.extend([-t, t])
    return sorted(angles)


class RittGrid(BaseModel):
    model_config = ConfigDict(frozen=True)

    radii: List[float] = Field(default_factory=_ritt_radii)
    angles: List[float] = Field(default_factory=_ritt_angles)
    axes: List[UnitImaginary] = Field(default_factory=lambda: [AXIS_I, AXIS_J, AXIS_IJK])


class SliceScanRow(ReportModel):
    re: float
    im_modulus: float
    axis: UnitImaginary
    margin: float
    in_spectrum: bool
    in_resolvent_set: bool
    boundary_distance: float


class SliceScanReport(ReportModel):
    rows: List[SliceScanRow]
    disagreements: int
    checked: int


class YosidaPoint(ReportModel):
    radius: float
    angle: float
    axis: UnitImaginary
    side: Side
    n: int
    value: float


class YosidaScanReport(ReportModel):
    grid: ScanGrid
    n_max: int
    worst_ratio: float
    worst_point: Optional[YosidaPoint] = None
    radius_worst: List[float]
    c_target: float
    verdict: Literal["satisfies", "violates", "undetermined"]
    witness: Optional[YosidaPoint] = None
    per_point: List[YosidaPoint]


class PowerReport(ReportModel):
    norms: List[float]
    p_n: float
    r_s: float
    classification: Literal["bounded", "unbounded", "marginal"]
    burn_in: int
    trend_slope: float
    evidence: List[str]


class KTReport(ReportModel):
    d: List[float]
    peripheral: SSpectrum
    lower_bounds: List[float]
    difference_radii: List[tuple[int, float]]
    power_classification: Literal["bounded", "unbounded", "marginal"]
    spectral_side_holds: bool
    verdict: Literal["converges", "stagnates", "undetermined", "inconsistent", "not_applicable"]
    numerical_trend: Literal["converges", "stagnates", "undetermined"]
    evidence: List[str]


class RittPoint(ReportModel):
    radius: float
    angle: float
    axis: UnitImaginary
    value: float


class RittReport(ReportModel):
    alpha: float
    table: List[RittPoint]
    radius_maxima: List[float]
    c_est: float
    c_hyp: Optional[float] = None
    peripheral_in_one: bool
    tail_growth: float
    hypothesis_met: bool
    conclusion_observed: bool
    evidence: List[str]


class KreissReport(ReportModel):
    grid: ScanGrid
    c_est: float
    worst_radius: float
    worst_angle: float
    worst_axis: UnitImaginary
    radius_maxima: List[float]


class GelfandReport(ReportModel):
    horizon: int
    sup_norm: float
    positive_norms: List[float]
    negative_norms: List[float]
    spectrum: SSpectrum
    spectrum_is_one: bool
    power_bounded: bool
    power_bound: float
    hypotheses_hold: bool
    distance_to_identity: float
    consistent: bool


class SpectralMappingReport(ReportModel):
    computed: SSpectrum
    mapped: SSpectrum
    hausdorff_distance: float


class ResidualReport(ReportModel):
    residual: float
    bound: float

