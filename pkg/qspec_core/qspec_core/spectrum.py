"""
S-spectrum and S-resolvent operators of a quaternion matrix.

For s in H the pencil Q_s(T) = T^2 - 2 Re(s) T + |s|^2 I depends on s only through
(Re s, |s|), so invertibility is decided per sphere [x + y S]. The S-spectrum is
the set of s where Q_s(T) is singular; for a matrix it is read off the eigenvalues of
the complex adjoint, and ``in_s_resolvent_set`` is the definitional check that guards
that shortcut.
"""

import logging
import math
from functools import partial
from itertools import combinations
from typing import Iterable, List, Optional

import numpy as np

from qspec_core.config import eps, get_config
from qspec_core.errors import Divergent, DomainError, Singular, SpectrumPoint
from qspec_core.models import Membership, SliceScanReport, SliceScanRow, Side, SpectralSphere, SSpectrum
from qspec_core.operators import QMatrix, is_invertible, mat_inv, op_norm, sigma_min
from qspec_core.parallel import ordered_map
from qspec_core.quaternion import AXIS_I, Quaternion, UnitImaginary

logger = logging.getLogger(__name__)

# powers tried while looking for ||T^k||^(1/k) < |s|
MAX_ENVELOPE_POWER = 4096
MAX_SERIES_TERMS = 200_000
PENCIL_ROUNDING = 16 * np.finfo(np.float64).eps
# eigenvalues closer than this times ||T|| are one defective eigenvalue
DEFECT_SPLIT = 64 * math.sqrt(np.finfo(np.float64).eps)


def q_pencil(t: QMatrix, s: Quaternion) -> QMatrix:
    """T^2 - 2 Re(s) T + |s|^2 I, evaluated as (T - Re(s) I)^2 + |Im s|^2 I."""
    shifted = t - QMatrix.identity(t.n) * s.re
    return shifted @ shifted + QMatrix.identity(t.n) * (s.x * s.x + s.y * s.y + s.z * s.z)


def _pencil_is_singular(t: QMatrix, s: Quaternion, pencil: QMatrix) -> bool:
    # a pencil at the rounding level of its terms is zero even when it is well conditioned
    scale = max(op_norm(t), s.modulus) ** 2
    return not is_invertible(pencil) or sigma_min(pencil) <= PENCIL_ROUNDING * scale


def pseudo_resolvent(t: QMatrix, s: Quaternion) -> QMatrix:
    pencil = q_pencil(t, s)
    if _pencil_is_singular(t, s, pencil):
        raise SpectrumPoint(s.as_list(), sigma_min(pencil))
    try:
        return mat_inv(pencil)
    except Singular as e:
        raise SpectrumPoint(s.as_list(), e.sigma_min) from e


def in_s_resolvent_set(t: QMatrix, s: Quaternion) -> Membership:
    pencil = q_pencil(t, s)
    return Membership(in_resolvent_set=not _pencil_is_singular(t, s, pencil), margin=sigma_min(pencil))


def _merge_tol(x: float, y: float) -> float:
    return eps() * (1.0 + abs(x) + y)


def _cluster_distance(a: List[float], b: List[float]) -> float:
    return math.hypot(a[0] / a[2] - b[0] / b[2], a[1] / a[2] - b[1] / b[2])


def spheres_from_points(
    points: Iterable[tuple[float, float]], cluster_tol: float = 0.0, max_spheres: Optional[int] = None
) -> SSpectrum:
    """
    Fold (x, y) points onto y >= 0 and merge them into distinct spheres.

    Points within max(epsilon scale, cluster_tol) of a cluster mean join it and each sphere
    is the mean of its cluster. With max_spheres set, the closest clusters are joined until
    at most that many remain.
    """
    # [sum x, sum y, count]
    clusters: List[List[float]] = []
    for x, y in sorted((x, abs(y)) for x, y in points):
        tol = max(_merge_tol(x, y), cluster_tol)
        near = [c for c in clusters if _cluster_distance(c, [x, y, 1.0]) <= tol]
        if near:
            cluster = min(near, key=lambda c: _cluster_distance(c, [x, y, 1.0]))
            cluster[0] += x
            cluster[1] += y
            cluster[2] += 1.0
        else:
            clusters.append([x, y, 1.0])

    while max_spheres is not None and len(clusters) > max(max_spheres, 1):
        i, j = min(combinations(range(len(clusters)), 2), key=lambda p: _cluster_distance(clusters[p[0]], clusters[p[1]]))
        clusters[i] = [a + b for a, b in zip(clusters[i], clusters[j])]
        del clusters[j]

    spheres = []
    for sum_x, sum_y, count in clusters:
        x, y = sum_x / count, sum_y / count
        if y <= max(_merge_tol(x, y), cluster_tol):
            y = 0.0
        spheres.append(SpectralSphere(x=x, y=y))
    return SSpectrum(spheres=sorted(spheres, key=lambda s: (s.x, s.y)))


def s_spectrum(t: QMatrix) -> SSpectrum:
    """
    Adjoint eigenvalues come in conjugate pairs and both land on the same sphere. A defective
    eigenvalue splits by about sqrt(machine epsilon) * ||T||, so clusters up to that size are
    one sphere, and an n x n matrix never has more than n spheres.
    """
    return spheres_from_points(
        ((float(lam.real), float(lam.imag)) for lam in t.eigenvalues),
        cluster_tol=DEFECT_SPLIT * op_norm(t),
        max_spheres=t.n,
    )


def s_spectral_radius(t: QMatrix) -> float:
    return s_spectrum(t).radius


def gelfand_radius(t: QMatrix, n_max: int) -> List[float]:
    """(||T^n||^(1/n)) for n = 1..n_max."""
    if n_max < 1:
        raise DomainError(f"n_max must be at least 1, got {n_max}")
    values = []
    power = QMatrix.identity(t.n)
    for n in range(1, n_max + 1):
        power = power @ t
        values.append(op_norm(power) ** (1.0 / n))
    return values


def peripheral_spectrum(t: QMatrix, tol: Optional[float] = None) -> SSpectrum:
    tol = get_config().peripheral_tol if tol is None else tol
    return SSpectrum(spheres=[s for s in s_spectrum(t).spheres if abs(s.modulus - 1.0) <= tol])


def s_resolvent(side: Side, t: QMatrix, s: Quaternion) -> QMatrix:
    """S_L^-1 = Q_s(T)^-1 (s* I - T) and S_R^-1 = (s* I - T) Q_s(T)^-1."""
    q_inv = pseudo_resolvent(t, s)
    shifted = QMatrix.scalar(s.conj(), t.n) - t
    return q_inv @ shifted if side == Side.LEFT else shifted @ q_inv


def s_resolvent_powers(side: Side, t: QMatrix, s: Quaternion, n_max: int) -> List[QMatrix]:
    """
    Closed form of the S-resolvent powers for n = 1..n_max:

        S_L^-n = Q_s(T)^-n  sum_m C(n, m) (-T)^m s*^(n-m)
        S_R^-n = sum_m C(n, m) s*^(n-m) (-T)^m  Q_s(T)^-n

    The powers of s* multiply (-T)^m on the right for the left resolvent and on the
    left for the right one. X -> X s* and X -> -T X commute, so the left sum is
    (X -> X s* - T X) applied n times to I, which avoids cancelling binomial terms
    near the spectrum; the right sum is the mirror image.
    """
    if n_max < 1:
        raise DomainError(f"resolvent power must be positive, got {n_max}")
    q_inv = pseudo_resolvent(t, s)
    s_bar = s.conj()

    results = []
    q_inv_n = QMatrix.identity(t.n)
    binomial_sum = QMatrix.identity(t.n)
    for _ in range(n_max):
        q_inv_n = q_inv_n @ q_inv
        if side == Side.LEFT:
            binomial_sum = binomial_sum.scale_right(s_bar) - t @ binomial_sum
            results.append(q_inv_n @ binomial_sum)
        else:
            binomial_sum = binomial_sum.scale_left(s_bar) - binomial_sum @ t
            results.append(binomial_sum @ q_inv_n)
    return results


def s_resolvent_pow(side: Side, t: QMatrix, s: Quaternion, n: int) -> QMatrix:
    return s_resolvent_powers(side, t, s, n)[-1]


def _geometric_envelope(t: QMatrix, modulus: float) -> tuple[float, float, Optional[int]]:
    """
    Find rho < modulus and c with ||T^m|| <= c rho^m for every m.

    Returns (rho, c, nilpotency index or None).
    """
    norms = [1.0]
    power = QMatrix.identity(t.n)
    for k in range(1, MAX_ENVELOPE_POWER + 1):
        power = power @ t
        norm_k = op_norm(power)
        if norm_k == 0.0:
            return 0.0, 1.0, k
        rho = norm_k ** (1.0 / k)
        if rho < modulus:
            c = max(norms[j] / rho**j for j in range(k))
            return rho, max(c, 1.0), None
        norms.append(norm_k)
    raise Divergent(modulus, norms[-1] ** (1.0 / MAX_ENVELOPE_POWER))


def _series_length(ratio: float, n: int, scale: float, tail_tol: float) -> int:
    """Smallest M whose tail sum_{m>M} C(m+n-1, n-1) ratio^m * scale is below tail_tol."""
    term = 1.0  # C(m+n-1, n-1) ratio^m at m = 0
    for m in range(MAX_SERIES_TERMS):
        following = term * ratio * (m + n) / (m + 1)
        # later term ratios never exceed this one
        decay = ratio * (m + 1 + n) / (m + 2)
        if decay < 1.0 and scale * following / (1.0 - decay) < tail_tol:
            return m
        term = following
    raise DomainError(f"series needs more than {MAX_SERIES_TERMS} terms at ratio {ratio:.6g}")


def resolvent_series_oracle(t: QMatrix, s: Quaternion, n: int = 1, tail_tol: float = 1e-12) -> QMatrix:
    """Partial sum of S_L^-n(s, T) = sum_m C(m+n-1, n-1) T^m s^-(m+n), valid for |s| > r_S(T)."""
    if n < 1:
        raise DomainError(f"resolvent power must be positive, got {n}")
    modulus = s.modulus
    r_s = s_spectral_radius(t)
    if modulus <= r_s + eps():
        raise Divergent(modulus, r_s)

    rho, c, nilpotency = _geometric_envelope(t, modulus)
    if nilpotency is not None:
        terms = nilpotency - 1
    else:
        terms = _series_length(rho / modulus, n, c * modulus**-n, tail_tol)
    logger.debug("series oracle: n=%d |s|=%.6g rho=%.6g terms=%d", n, modulus, rho, terms + 1)

    s_inv = s.inverse()
    acc = QMatrix.zeros(t.n)
    power = QMatrix.identity(t.n)
    for m in range(terms + 1):
        acc = acc + power.scale_right(s_inv ** (m + n)) * math.comb(m + n - 1, n - 1)
        power = power @ t
    return acc


def resolvent_equation_residual(t: QMatrix, s: Quaternion) -> float:
    """||S_L^-1(s,T) s - T S_L^-1(s,T) - I||"""
    left = s_resolvent(Side.LEFT, t, s)
    return op_norm(left.scale_right(s) - t @ left - QMatrix.identity(t.n))


def _slice_row(
    t: QMatrix, axis: UnitImaginary, spectrum: SSpectrum, xs: List[float], y: float
) -> List[SliceScanRow]:
    rows = []
    for x in xs:
        point = Quaternion(w=x) + axis.direction * y
        membership = in_s_resolvent_set(t, point)
        distance = spectrum.min_distance(x, abs(y))
        rows.append(
            SliceScanRow(
                re=x,
                im_modulus=abs(y),
                axis=axis if y >= 0 else UnitImaginary(direction=-axis.direction),
                margin=membership.margin,
                in_spectrum=distance <= _merge_tol(x, abs(y)),
                in_resolvent_set=membership.in_resolvent_set,
                boundary_distance=distance,
            )
        )
    return rows


def slice_scan(
    t: QMatrix,
    axis: UnitImaginary = AXIS_I,
    half_width: Optional[float] = None,
    points: int = 41,
    boundary_tol: float = 1e-6,
    workers: int = 1,
) -> SliceScanReport:
    """
    Compare the eigenvalue route with the pencil check on a points x points grid of
    the slice C_axis over [-r, r]^2. Points closer than boundary_tol to a sphere are
    tabulated but not counted.
    """
    if points < 2:
        raise DomainError(f"a slice grid needs at least 2 points per side, got {points}")
    spectrum = s_spectrum(t)
    r = half_width if half_width is not None else 1.25 * max(spectrum.radius, 1e-3)
    coords = [-r + 2.0 * r * k / (points - 1) for k in range(points)]

    grid_rows = ordered_map(partial(_slice_row, t, axis, spectrum, coords), coords, workers)
    rows = [row for grid_row in grid_rows for row in grid_row]
    counted = [row for row in rows if row.boundary_distance > boundary_tol]
    disagreements = sum(1 for row in counted if row.in_spectrum == row.in_resolvent_set)
    if disagreements:
        logger.warning("slice scan: %d of %d points disagree on axis %s", disagreements, len(counted), axis)
    logger.info("slice scan: %d points on axis %s, %d checked", len(rows), axis, len(counted))
    return SliceScanReport(rows=rows, disagreements=disagreements, checked=len(counted))
