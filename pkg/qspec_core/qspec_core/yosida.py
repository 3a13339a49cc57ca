"""
Spherical Yosida approximations.

    Y_L(s, T) = S_L^-1(s, T) s^2 - s I        Y_R(s, T) = s^2 S_R^-1(s, T) - s I
    Y_L^n     = T^n S_L^-n(s, T) s^n          Y_R^n     = s^n S_R^-n(s, T) T^n

A matrix T is power-bounded exactly when (1 - 1/|s|)^n ||Y^n(s, T)|| stays bounded over
|s| > 1 and n >= 1; ``yosida_bound_scan`` tabulates that quantity on a fixed grid.
"""

import logging
from functools import partial
from typing import List, Optional, Sequence

from qspec_core.errors import DomainError
from qspec_core.models import ResidualReport, ScanGrid, Side, YosidaPoint, YosidaScanReport
from qspec_core.operators import QMatrix, mat_pow, op_norm, successive_powers
from qspec_core.parallel import ordered_map
from qspec_core.power_analysis import power_norms
from qspec_core.quaternion import Quaternion, UnitImaginary
from qspec_core.spectrum import resolvent_series_oracle, s_resolvent, s_resolvent_powers

logger = logging.getLogger(__name__)

# relative slack when comparing the table against the target constant
TARGET_SLACK = 1e-6
DEFAULT_TARGET_HORIZON = 200


def yosida(side: Side, t: QMatrix, s: Quaternion) -> QMatrix:
    resolvent = s_resolvent(side, t, s)
    s_squared = s * s
    scaled = resolvent.scale_right(s_squared) if side == Side.LEFT else resolvent.scale_left(s_squared)
    return scaled - QMatrix.scalar(s, t.n)


def yosida_powers(side: Side, t: QMatrix, s: Quaternion, n_max: int) -> List[QMatrix]:
    """[Y^1, ..., Y^n_max] sharing one pencil inverse and one power table."""
    resolvents = s_resolvent_powers(side, t, s, n_max)
    t_powers = successive_powers(t, n_max)
    results = []
    s_power = Quaternion.ONE
    for n, resolvent in enumerate(resolvents, start=1):
        s_power = s_power * s
        if side == Side.LEFT:
            results.append(t_powers[n] @ resolvent.scale_right(s_power))
        else:
            results.append(resolvent.scale_left(s_power) @ t_powers[n])
    return results


def yosida_pow(side: Side, t: QMatrix, s: Quaternion, n: int) -> QMatrix:
    return yosida_powers(side, t, s, n)[-1]


def yosida_pow_series(t: QMatrix, s: Quaternion, n: int, tail_tol: float = 1e-12) -> QMatrix:
    """T^n sum_m C(m+n-1, n-1) T^m s^-m, the left power through the resolvent series."""
    return mat_pow(t, n) @ resolvent_series_oracle(t, s, n, tail_tol).scale_right(s**n)


def _require_outside_norm(t: QMatrix, s: Quaternion) -> float:
    norm = op_norm(t)
    if s.modulus <= norm:
        raise DomainError(f"|s|={s.modulus:.6g} must exceed ||T||={norm:.6g}")
    return norm


def yosida_limit_residual(t: QMatrix, s: Quaternion) -> ResidualReport:
    """||Y_L(s,T) - T|| against ||T||^2 / (|s| - ||T||)."""
    norm = _require_outside_norm(t, s)
    residual = op_norm(yosida(Side.LEFT, t, s) - t)
    return ResidualReport(residual=residual, bound=norm * norm / (s.modulus - norm))


def yosida_pow_residual(t: QMatrix, s: Quaternion, n: int) -> ResidualReport:
    """||Y_L^n(s,T) - T^n|| against ||T||^n ((1 - ||T||/|s|)^-n - 1)."""
    norm = _require_outside_norm(t, s)
    residual = op_norm(yosida_pow(Side.LEFT, t, s, n) - mat_pow(t, n))
    bound = norm**n * ((1.0 - norm / s.modulus) ** -n - 1.0)
    return ResidualReport(residual=residual, bound=bound)


def _scan_cell(
    t: QMatrix, sides: Sequence[Side], n_max: int, cell: tuple[float, float, UnitImaginary]
) -> List[YosidaPoint]:
    radius, angle, axis = cell
    s = Quaternion.from_polar(radius, angle, axis)
    damping = 1.0 - 1.0 / radius
    points = []
    for side in sides:
        for n, power in enumerate(yosida_powers(side, t, s, n_max), start=1):
            points.append(
                YosidaPoint(radius=radius, angle=angle, axis=axis, side=side, n=n, value=damping**n * op_norm(power))
            )
    return points


def _verdict(radius_worst: List[float], c_target: float) -> str:
    limit = c_target * (1.0 + TARGET_SLACK)
    exceeded = [value > limit for value in radius_worst]
    # a single radius above the target may be a near-spectrum artifact
    if any(a and b for a, b in zip(exceeded, exceeded[1:])):
        return "violates"
    if any(exceeded):
        return "undetermined"
    return "satisfies"


def yosida_bound_scan(
    t: QMatrix,
    grid: Optional[ScanGrid] = None,
    n_max: Optional[int] = None,
    sides: Sequence[Side] = (Side.LEFT, Side.RIGHT),
    c_target: Optional[float] = None,
    workers: int = 1,
) -> YosidaScanReport:
    grid = grid or ScanGrid()
    n_max = n_max or grid.n_max
    if n_max < 1:
        raise DomainError(f"n_max must be at least 1, got {n_max}")
    if c_target is None:
        c_target = power_norms(t, DEFAULT_TARGET_HORIZON).p_n

    radii = sorted(grid.radii)
    cells = [(radius, angle, axis) for radius in radii for angle in grid.angles for axis in grid.axes]
    per_point = [p for chunk in ordered_map(partial(_scan_cell, t, tuple(sides), n_max), cells, workers) for p in chunk]

    worst = max(per_point, key=lambda p: p.value)
    radius_worst = [max(p.value for p in per_point if p.radius == radius) for radius in radii]
    verdict = _verdict(radius_worst, c_target)
    for radius, value in zip(radii, radius_worst):
        logger.debug("yosida scan: radius %.6g worst %.6g", radius, value)
    logger.info("yosida scan: %d cells, worst ratio %.6g, target %.6g, %s", len(cells), worst.value, c_target, verdict)

    return YosidaScanReport(
        grid=grid,
        n_max=n_max,
        worst_ratio=worst.value,
        worst_point=worst,
        radius_worst=radius_worst,
        c_target=c_target,
        verdict=verdict,
        witness=worst if verdict == "violates" else None,
        per_point=per_point,
    )
