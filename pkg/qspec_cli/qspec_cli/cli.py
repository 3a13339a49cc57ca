"""
qspec command line.

Every subcommand except ``fixtures`` reads a matrix file, runs one qspec_core operation
and writes the report as JSON or CSV. Exit status: 0 on success, 2 when a mathematical
precondition fails, 1 on malformed input or IO errors.
"""

import argparse
import logging
import sys
from pathlib import Path
from typing import Callable, Dict, List, Literal, NamedTuple, Optional

import pandas as pd
from pydantic import BaseModel, ConfigDict, Field, ValidationError

from qspec_core.calculus import (
    ContourSpec,
    IntrinsicFunction,
    contour_power,
    functional_calculus,
    spectral_mapping_check,
)
from qspec_core.config import override
from qspec_core.errors import DomainFailure, InputFailure, QSpecError
from qspec_core.fixtures import FIXTURE_KINDS, FixtureFactory
from qspec_core.models import RittGrid, ScanGrid, Side
from qspec_core.operators import QMatrix
from qspec_core.power_analysis import DEFAULT_HORIZON, gelfand_rigidity_check, kreiss_scan, kt_scan, power_norms, ritt_scan
from qspec_core.quaternion import AXIS_I, Quaternion, UnitImaginary
from qspec_core.random_manager import RandomManager
from qspec_core.report_io import (
    csv_text,
    json_text,
    matrix_frame,
    matrix_json_text,
    read_matrix,
    report_frame,
    spectrum_json_text,
    write_text,
)
from qspec_core.spectrum import s_resolvent_pow, s_spectral_radius, s_spectrum, slice_scan
from qspec_core.yosida import yosida_bound_scan, yosida_pow

logger = logging.getLogger(__name__)


class UsageError(InputFailure):
    pass


class ArgumentParser(argparse.ArgumentParser):
    # argparse would exit with 2, which belongs to domain failures
    def error(self, message: str):
        raise UsageError(f"{self.prog}: {message}")


class RunConfig(BaseModel):
    model_config = ConfigDict(frozen=True)

    command: str
    input: Optional[Path] = None
    out: Optional[Path] = None
    format: Literal["json", "csv"] = "json"
    verbose: bool = False
    workers: int = Field(default=1, ge=1)
    seed: Optional[int] = None

    # tolerance overrides
    tol: Optional[float] = Field(default=None, gt=0.0, lt=1.0)
    kt_tol: Optional[float] = Field(default=None, gt=0.0)
    quadrature_tol: Optional[float] = Field(default=None, gt=0.0)

    # grid overrides
    radii: Optional[List[float]] = None
    angles: Optional[int] = Field(default=None, ge=1)
    axis: Optional[UnitImaginary] = None
    n_max: Optional[int] = Field(default=None, ge=1)
    points: int = Field(default=41, ge=2)
    scan: bool = False

    # contour overrides
    radius: Optional[float] = Field(default=None, gt=0.0)
    nodes: int = 1024

    side: Optional[Side] = None
    point: Optional[Quaternion] = None
    power: Optional[int] = Field(default=None, ge=0)
    function: Optional[str] = None
    order: int = 1
    mapping: bool = False
    alpha: float = 1.0
    c_hyp: Optional[float] = None
    kind: str = "random"
    n: int = Field(default=2, ge=1)

    @classmethod
    def from_args(cls, args: argparse.Namespace) -> "RunConfig":
        return cls.model_validate({key: value for key, value in vars(args).items() if value is not None})

    def tolerance_overrides(self) -> Dict[str, float]:
        overrides = {"epsilon": self.tol, "kt_tol": self.kt_tol, "quadrature_tol": self.quadrature_tol}
        return {key: value for key, value in overrides.items() if value is not None}

    def matrix(self) -> QMatrix:
        if self.input is None:
            raise UsageError(f"{self.command} needs --input")
        return read_matrix(self.input)

    def scan_grid(self) -> ScanGrid:
        fields: Dict = {}
        if self.radii:
            fields["radii"] = self.radii
        if self.angles:
            fields["angles"] = ScanGrid.uniform_angles(self.angles)
        if self.axis is not None:
            fields["axes"] = [self.axis]
        if self.n_max:
            fields["n_max"] = self.n_max
        return ScanGrid(**fields)

    def ritt_grid(self) -> RittGrid:
        fields: Dict = {}
        if self.radii:
            fields["radii"] = self.radii
        if self.angles:
            fields["angles"] = ScanGrid.uniform_angles(self.angles)
        if self.axis is not None:
            fields["axes"] = [self.axis]
        return RittGrid(**fields)

    def contour(self, t: QMatrix) -> ContourSpec:
        radius = self.radius if self.radius is not None else default_contour_radius(t)
        return ContourSpec(axis=self.axis or AXIS_I, radius=radius, nodes=self.nodes)

    def intrinsic_function(self) -> IntrinsicFunction:
        if self.function is None:
            raise UsageError(f"{self.command} needs --function")
        return IntrinsicFunction.parse(self.function)

    def power_or(self, default: int) -> int:
        return default if self.power is None else self.power

    def required_point(self) -> Quaternion:
        if self.point is None:
            raise UsageError(f"{self.command} needs --point w,x,y,z")
        return self.point


class Output(NamedTuple):
    text: str
    frame: pd.DataFrame


def default_contour_radius(t: QMatrix) -> float:
    return max(2.0, 2.0 * s_spectral_radius(t))


def matrix_output(t: QMatrix) -> Output:
    return Output(matrix_json_text(t), matrix_frame(t))


def report_output(report: BaseModel) -> Output:
    return Output(json_text(report), report_frame(report))


def cmd_spectrum(config: RunConfig) -> Output:
    t = config.matrix()
    if config.scan:
        return report_output(slice_scan(t, axis=config.axis or AXIS_I, points=config.points, workers=config.workers))
    spectrum = s_spectrum(t)
    return Output(spectrum_json_text(spectrum), report_frame(spectrum))


def cmd_resolvent(config: RunConfig) -> Output:
    t = config.matrix()
    return matrix_output(s_resolvent_pow(config.side or Side.LEFT, t, config.required_point(), config.power_or(1)))


def cmd_yosida(config: RunConfig) -> Output:
    t = config.matrix()
    if config.point is not None:
        return matrix_output(yosida_pow(config.side or Side.LEFT, t, config.point, config.power_or(1)))
    sides = (config.side,) if config.side is not None else (Side.LEFT, Side.RIGHT)
    return report_output(yosida_bound_scan(t, grid=config.scan_grid(), sides=sides, workers=config.workers))


def cmd_calculus(config: RunConfig) -> Output:
    t = config.matrix()
    contour = config.contour(t)
    side = config.side or Side.LEFT
    if config.mapping:
        return report_output(spectral_mapping_check(t, config.intrinsic_function(), contour))
    if config.function is not None:
        return matrix_output(functional_calculus(t, config.intrinsic_function(), contour, side=side))
    return matrix_output(contour_power(side, t, config.power_or(1), contour, order=config.order))


def cmd_powers(config: RunConfig) -> Output:
    return report_output(power_norms(config.matrix(), horizon=config.n_max or DEFAULT_HORIZON))


def cmd_kreiss(config: RunConfig) -> Output:
    return report_output(kreiss_scan(config.matrix(), grid=config.scan_grid(), workers=config.workers))


def cmd_kt(config: RunConfig) -> Output:
    return report_output(kt_scan(config.matrix(), horizon=config.n_max or DEFAULT_HORIZON))


def cmd_ritt(config: RunConfig) -> Output:
    report = ritt_scan(
        config.matrix(),
        alpha=config.alpha,
        grid=config.ritt_grid(),
        c_hyp=config.c_hyp,
        horizon=config.n_max or DEFAULT_HORIZON,
        workers=config.workers,
    )
    return report_output(report)


def cmd_gelfand(config: RunConfig) -> Output:
    return report_output(gelfand_rigidity_check(config.matrix(), horizon=config.n_max or DEFAULT_HORIZON))


def cmd_fixtures(config: RunConfig) -> Output:
    factory = FixtureFactory(RandomManager(config.seed))
    return matrix_output(factory.build(config.kind, config.n))


COMMANDS: Dict[str, Callable[[RunConfig], Output]] = {
    "spectrum": cmd_spectrum,
    "resolvent": cmd_resolvent,
    "yosida": cmd_yosida,
    "calculus": cmd_calculus,
    "powers": cmd_powers,
    "kreiss": cmd_kreiss,
    "kt": cmd_kt,
    "ritt": cmd_ritt,
    "gelfand": cmd_gelfand,
    "fixtures": cmd_fixtures,
}


def _floats(count: Optional[int] = None) -> Callable[[str], List[float]]:
    def parse(text: str) -> List[float]:
        try:
            values = [float(v) for v in text.split(",")]
        except ValueError:
            raise argparse.ArgumentTypeError(f"expected comma separated numbers, got {text!r}")
        if count is not None and len(values) != count:
            raise argparse.ArgumentTypeError(f"expected {count} comma separated numbers, got {len(values)}")
        return values

    return parse


def build_parser() -> ArgumentParser:
    common = ArgumentParser(add_help=False)
    common.add_argument("--input", type=Path, help="Matrix file {n, entries}")
    common.add_argument("--out", type=Path, help="Report path (stdout when omitted)")
    common.add_argument("--format", choices=["json", "csv"], default="json", help="Report format")
    common.add_argument("--tol", type=float, help="Library epsilon override")
    common.add_argument("--axis", type=_floats(3), help="Slice axis x,y,z (normalized)")
    common.add_argument("--radii", type=_floats(), help="Grid radii r1,r2,...")
    common.add_argument("--angles", type=int, help="Number of uniform grid angles")
    common.add_argument("--n-max", type=int, help="Largest power or horizon")
    common.add_argument("--side", choices=[side.value for side in Side], help="Resolvent side")
    common.add_argument("--seed", type=int, help="Seed for random number generator")
    common.add_argument("--workers", type=int, default=1, help="Worker processes for grid scans")
    common.add_argument("--verbose", action="store_true", help="Debug logging on stderr")

    parser = ArgumentParser(prog="qspec", description="S-spectrum scans for quaternion matrices")
    commands = parser.add_subparsers(dest="command", required=True)

    spectrum = commands.add_parser("spectrum", parents=[common], help="S-spectrum as spheres")
    spectrum.add_argument("--scan", action="store_true", help="Tabulate the slice grid against the pencil check")
    spectrum.add_argument("--points", type=int, default=41, help="Slice grid points per side")

    for name, help_text in [("resolvent", "S-resolvent power at a point"), ("yosida", "Yosida bound scan")]:
        sub = commands.add_parser(name, parents=[common], help=help_text)
        sub.add_argument("--point", type=_floats(4), help="Quaternion w,x,y,z")
        sub.add_argument("--power", type=int, help="Power n")

    calculus = commands.add_parser("calculus", parents=[common], help="Contour S-functional calculus")
    calculus.add_argument("--radius", type=float, help="Contour radius")
    calculus.add_argument("--nodes", type=int, default=1024, help="Quadrature nodes")
    calculus.add_argument("--function", help="Preset name or coefficients a0,a1,...")
    calculus.add_argument("--power", type=int, help="Power n when no function is given")
    calculus.add_argument("--order", type=int, default=1, choices=[1, 2], help="Resolvent order of the power formula")
    calculus.add_argument("--mapping", action="store_true", help="Compare sigma_S(f(T)) with f(sigma_S(T))")
    calculus.add_argument("--quadrature-tol", type=float, help="Refinement tolerance")

    commands.add_parser("powers", parents=[common], help="Power norms and boundedness class")
    commands.add_parser("kreiss", parents=[common], help="Kreiss constant on the scan grid")
    kt = commands.add_parser("kt", parents=[common], help="Katznelson-Tzafriri differences")
    kt.add_argument("--kt-tol", type=float, help="Convergence tolerance for d_N")

    ritt = commands.add_parser("ritt", parents=[common], help="Ritt-type resolvent table")
    ritt.add_argument("--alpha", type=float, default=1.0, help="Exponent alpha in (0, 1]")
    ritt.add_argument("--c-hyp", type=float, help="Bound the table must respect")

    commands.add_parser("gelfand", parents=[common], help="Doubly power-bounded rigidity check")

    fixtures = commands.add_parser("fixtures", parents=[common], help="Write a generated matrix file")
    fixtures.add_argument("--kind", choices=FIXTURE_KINDS, default="random", help="Fixture family")
    fixtures.add_argument("--n", type=int, default=2, help="Matrix dimension")
    return parser


def _fail(error: Exception, status: int) -> int:
    message = str(error).replace("\n", " ")
    print(f"error={type(error).__name__} message={message}", file=sys.stderr)
    return status


def main(argv: Optional[List[str]] = None) -> int:
    try:
        config = RunConfig.from_args(build_parser().parse_args(argv))
    except (QSpecError, ValidationError) as e:
        # a degenerate --axis is bad input here, not a domain failure
        return _fail(e, 1)

    logging.basicConfig(
        stream=sys.stderr,
        level=logging.DEBUG if config.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    logger.info("running %s on %s", config.command, config.input or "generated input")
    try:
        with override(**config.tolerance_overrides()):
            output = COMMANDS[config.command](config)
        text = output.text if config.format == "json" else csv_text(output.frame)
        if config.out is None:
            sys.stdout.write(text if text.endswith("\n") else text + "\n")
        else:
            write_text(text, config.out)
            print(f"{config.command}: {config.format} report written to {config.out}")
    except DomainFailure as e:
        return _fail(e, 2)
    except (InputFailure, ValidationError, OSError) as e:
        return _fail(e, 1)
    return 0


if __name__ == "__main__":
    sys.exit(main())
