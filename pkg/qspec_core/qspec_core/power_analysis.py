"""
Power-boundedness diagnostics.

sup_n ||T^n|| < oo cannot be certified from finitely many powers, so every report
states the numbers it saw (norms, grid constants, spectra) next to its verdict.
"""

import logging
from functools import partial
from typing import List, Optional

import numpy as np

from qspec_core.config import eps, get_config
from qspec_core.errors import DomainError, SpectrumPoint
from qspec_core.models import (
    GelfandReport,
    KreissReport,
    KTReport,
    PowerReport,
    RittGrid,
    RittPoint,
    RittReport,
    ScanGrid,
    Side,
)
from qspec_core.operators import QMatrix, mat_inv, op_norm, successive_powers
from qspec_core.parallel import ordered_map
from qspec_core.quaternion import Quaternion, UnitImaginary
from qspec_core.spectrum import peripheral_spectrum, s_resolvent, s_resolvent_pow, s_spectral_radius, s_spectrum

logger = logging.getLogger(__name__)

# finest-radius maximum allowed over the coarser ones for the Ritt table to count as bounded
RITT_GROWTH = 0.1
KT_STAGNATION_FACTOR = 10.0
DEFAULT_HORIZON = 200


def _trend_slope(norms: List[float]) -> float:
    """Least-squares slope of the last quartile of the sequence."""
    size = max(2, len(norms) // 4)
    tail = norms[-size:]
    return float(np.polyfit(np.arange(len(tail), dtype=float), np.asarray(tail), 1)[0])


def _classify(norms: List[float], r_s: float) -> tuple[str, int, float, List[str]]:
    tol = eps()
    burn_in = len(norms) // 2
    slope = _trend_slope(norms)
    tail = norms[burn_in:]
    non_increasing = all(b <= a * (1.0 + tol) + tol for a, b in zip(tail, tail[1:]))

    if r_s > 1.0 + tol:
        return "unbounded", burn_in, slope, [f"r_S = {r_s:.12g} exceeds 1"]
    if r_s < 1.0 - tol:
        return "bounded", burn_in, slope, [f"r_S = {r_s:.12g} is below 1"]
    evidence = [f"r_S = {r_s:.12g} is unimodular"]
    if non_increasing:
        return "bounded", burn_in, slope, evidence + [f"norms are non-increasing after n = {burn_in}"]
    if slope > get_config().growth_tol:
        return "unbounded", burn_in, slope, evidence + [f"last-quartile slope {slope:.6g} shows growth"]
    return "marginal", burn_in, slope, evidence + [f"last-quartile slope {slope:.6g}, no verdict from finitely many powers"]


def _power_report(powers: List[QMatrix], r_s: float) -> PowerReport:
    norms = [op_norm(p) for p in powers]
    classification, burn_in, slope, evidence = _classify(norms, r_s)
    return PowerReport(
        norms=norms,
        p_n=max(norms),
        r_s=r_s,
        classification=classification,
        burn_in=burn_in,
        trend_slope=slope,
        evidence=evidence,
    )


def power_norms(t: QMatrix, horizon: int = DEFAULT_HORIZON) -> PowerReport:
    """||T^n|| for n = 0..horizon by repeated multiplication."""
    if horizon < 1:
        raise DomainError(f"horizon must be at least 1, got {horizon}")
    report = _power_report(successive_powers(t, horizon), s_spectral_radius(t))
    logger.info("power norms: N=%d p_N=%.6g r_S=%.6g %s", horizon, report.p_n, report.r_s, report.classification)
    return report


def _kreiss_cell(t: QMatrix, cell: tuple[float, float, UnitImaginary]) -> float:
    radius, angle, axis = cell
    s = Quaternion.from_polar(radius, angle, axis)
    return (radius - 1.0) * op_norm(s_resolvent(Side.LEFT, t, s))


def kreiss_scan(t: QMatrix, grid: Optional[ScanGrid] = None, workers: int = 1) -> KreissReport:
    """max over the grid of (|s| - 1) ||S_L^-1(s, T)||. No boundedness verdict is drawn from it."""
    grid = grid or ScanGrid()
    radii = sorted(grid.radii)
    cells = [(radius, angle, axis) for radius in radii for angle in grid.angles for axis in grid.axes]
    values = ordered_map(partial(_kreiss_cell, t), cells, workers)

    worst = int(np.argmax(values))
    radius_maxima = [max(v for cell, v in zip(cells, values) if cell[0] == radius) for radius in radii]
    logger.info("kreiss scan: %d cells, C_est %.6g at radius %.6g", len(cells), values[worst], cells[worst][0])
    return KreissReport(
        grid=grid,
        c_est=values[worst],
        worst_radius=cells[worst][0],
        worst_angle=cells[worst][1],
        worst_axis=cells[worst][2],
        radius_maxima=radius_maxima,
    )


def _difference_indices(horizon: int) -> List[int]:
    indices = [0]
    n = 1
    while n < horizon:
        indices.append(n)
        n *= 2
    return indices + [horizon]


def _kt_trend(d: List[float], tol: float) -> str:
    horizon = len(d) - 1
    half = horizon // 2
    if d[horizon] < tol and d[horizon] <= d[half]:
        return "converges"
    if min(d[half + 1 :]) > KT_STAGNATION_FACTOR * tol:
        return "stagnates"
    return "undetermined"


def kt_scan(t: QMatrix, horizon: int = DEFAULT_HORIZON, tol: Optional[float] = None) -> KTReport:
    """d_n = ||T^n - T^(n+1)|| against the peripheral spectrum."""
    if horizon < 2:
        raise DomainError(f"horizon must be at least 2, got {horizon}")
    config = get_config()
    tol = config.kt_tol if tol is None else tol

    powers = successive_powers(t, horizon + 1)
    differences = [powers[n] - powers[n + 1] for n in range(horizon + 1)]
    d = [op_norm(diff) for diff in differences]
    power_report = _power_report(powers[: horizon + 1], s_spectral_radius(t))

    peripheral = peripheral_spectrum(t, config.peripheral_tol)
    lower_bounds = [sphere.distance_to_one for sphere in peripheral.spheres]
    difference_radii = [(n, s_spectral_radius(differences[n])) for n in _difference_indices(horizon)]
    spectral_side_holds = peripheral.within_one(config.peripheral_tol)
    trend = _kt_trend(d, tol)

    evidence = [f"d_{horizon} = {d[horizon]:.6g}, d_{horizon // 2} = {d[horizon // 2]:.6g}"]
    if lower_bounds:
        floor = max(lower_bounds)
        below = [n for n, value in enumerate(d) if value < floor - eps()]
        evidence.append(f"lower bound {floor:.6g} from the peripheral spectrum")
        if below and power_report.classification == "bounded":
            logger.warning("kt scan: d_n below the peripheral lower bound at n=%s", below[:5])
            evidence.append(f"lower bound violated at n = {below[:5]}")

    if power_report.classification != "bounded":
        verdict = "not_applicable"
        evidence.append(f"powers classified {power_report.classification}")
    elif (trend == "converges") != spectral_side_holds and trend != "undetermined":
        verdict = "inconsistent"
        evidence.append(f"trend {trend} contradicts the peripheral spectrum {[str(s) for s in peripheral.spheres]}")
    else:
        verdict = trend

    logger.info("kt scan: N=%d trend %s verdict %s", horizon, trend, verdict)
    return KTReport(
        d=d,
        peripheral=peripheral,
        lower_bounds=lower_bounds,
        difference_radii=difference_radii,
        power_classification=power_report.classification,
        spectral_side_holds=spectral_side_holds,
        verdict=verdict,
        numerical_trend=trend,
        evidence=evidence,
    )


def _ritt_cell(t: QMatrix, alpha: float, cell: tuple[float, float, UnitImaginary]) -> RittPoint:
    radius, angle, axis = cell
    s = Quaternion.from_polar(radius, angle, axis)
    try:
        norm = op_norm(s_resolvent_pow(Side.LEFT, t, s, 2))
    except SpectrumPoint:
        logger.warning("ritt scan: grid point %s lies on the S-spectrum", s)
        norm = float("inf")
    return RittPoint(radius=radius, angle=angle, axis=axis, value=(s - 1.0).modulus ** (1.0 + alpha) * norm)


def ritt_scan(
    t: QMatrix,
    alpha: float = 1.0,
    grid: Optional[RittGrid] = None,
    c_hyp: Optional[float] = None,
    horizon: int = DEFAULT_HORIZON,
    workers: int = 1,
) -> RittReport:
    """|s - 1|^(1+alpha) ||S_L^-2(s, T)|| on radii shrinking toward 1, checked against the powers of T."""
    if not 0.0 < alpha <= 1.0:
        raise DomainError(f"alpha must lie in (0, 1], got {alpha}")
    grid = grid or RittGrid()
    radii = sorted(grid.radii, reverse=True)
    cells = [(radius, angle, axis) for radius in radii for angle in grid.angles for axis in grid.axes]
    table = ordered_map(partial(_ritt_cell, t, alpha), cells, workers)

    radius_maxima = [max(p.value for p in table if p.radius == radius) for radius in radii]
    c_est = max(radius_maxima)
    coarse = max(radius_maxima[:-1], default=radius_maxima[-1])
    tail_growth = radius_maxima[-1] / coarse if coarse > 0.0 else 1.0
    peripheral_in_one = peripheral_spectrum(t).within_one(get_config().peripheral_tol)

    evidence = [f"C_est = {c_est:.6g}", f"finest radius {radii[-1]:.6g} holds {tail_growth:.6g} of the coarser maximum"]
    hypothesis_met = peripheral_in_one and np.isfinite(c_est) and tail_growth <= 1.0 + RITT_GROWTH
    if not peripheral_in_one:
        evidence.append("peripheral spectrum is not contained in {1}")
    if c_hyp is not None and c_est > c_hyp:
        hypothesis_met = False
        evidence.append(f"C_est exceeds the given bound {c_hyp:.6g}")

    power_report = power_norms(t, horizon)
    conclusion_observed = power_report.classification == "bounded"
    evidence.append(f"powers classified {power_report.classification} with p_N = {power_report.p_n:.6g}")
    if hypothesis_met and not conclusion_observed:
        logger.warning("ritt scan: hypothesis met but powers classified %s", power_report.classification)
    logger.info("ritt scan: alpha=%.3g C_est=%.6g hypothesis %s", alpha, c_est, hypothesis_met)

    return RittReport(
        alpha=alpha,
        table=table,
        radius_maxima=radius_maxima,
        c_est=c_est,
        c_hyp=c_hyp,
        peripheral_in_one=peripheral_in_one,
        tail_growth=tail_growth,
        hypothesis_met=bool(hypothesis_met),
        conclusion_observed=conclusion_observed,
        evidence=evidence,
    )


def gelfand_rigidity_check(
    t: QMatrix, horizon: int = DEFAULT_HORIZON, power_bound: float = 1.01, tol: float = 1e-6
) -> GelfandReport:
    """sup over |n| <= N of ||T^n|| and sigma_S(T) = {1} should force T = I."""
    inverse = mat_inv(t)
    positive = [op_norm(p) for p in successive_powers(t, horizon)]
    negative = [op_norm(p) for p in successive_powers(inverse, horizon)]
    sup_norm = max(positive + negative)

    spectrum = s_spectrum(t)
    spectrum_is_one = spectrum.within_one(get_config().peripheral_tol)
    power_bounded = sup_norm <= power_bound
    hypotheses_hold = spectrum_is_one and power_bounded
    distance = op_norm(t - QMatrix.identity(t.n))
    consistent = not hypotheses_hold or distance < tol
    if not consistent:
        logger.warning("gelfand check: hypotheses hold but ||T - I|| = %.3e", distance)
    logger.info("gelfand check: sup %.6g, spectrum one %s, ||T - I|| %.3e", sup_norm, spectrum_is_one, distance)

    return GelfandReport(
        horizon=horizon,
        sup_norm=sup_norm,
        positive_norms=positive,
        negative_norms=negative,
        spectrum=spectrum,
        spectrum_is_one=spectrum_is_one,
        power_bounded=power_bounded,
        power_bound=power_bound,
        hypotheses_hold=hypotheses_hold,
        distance_to_identity=distance,
        consistent=consistent,
    )
