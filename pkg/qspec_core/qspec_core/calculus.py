"""
S-functional calculus on disks by trapezoidal contour quadrature.

On the circle s = r e^{I theta} of a slice C_I the measure ds_I equals s dtheta, so

    f(T) = 1/(2 pi) int S_L^-1(s, T) s f(s) dtheta        (left)
    f(T) = 1/(2 pi) int f(s) s S_R^-1(s, T) dtheta        (right)

The integrand is analytic and periodic in theta, so the uniform rule converges
geometrically. Every node lives in the complex adjoint so that the whole contour is
a handful of batched numpy calls.
"""

import logging
import math
import re
from typing import Callable, List, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator

from qspec_core.config import eps, get_config
from qspec_core.errors import ContourThroughSpectrum, DivergedQuadrature, DomainError, InputFailure, OutOfRadius
from qspec_core.models import Side, SpectralMappingReport
from qspec_core.operators import QMatrix, from_adjoint
from qspec_core.quaternion import AXIS_I, Quaternion, UnitImaginary
from qspec_core.spectrum import s_spectrum, spheres_from_points

logger = logging.getLogger(__name__)

# refinement change allowed, in units of the quadrature tolerance
REFINEMENT_FACTOR = 10.0


class ContourSpec(BaseModel):
    model_config = ConfigDict(frozen=True)

    axis: UnitImaginary = AXIS_I
    radius: float = Field(gt=0.0)
    nodes: int = 1024

    @field_validator("nodes")
    @classmethod
    def even_nodes(cls, value: int) -> int:
        if value < 8 or value % 2:
            raise ValueError(f"contour needs an even node count of at least 8, got {value}")
        return value

    def angles(self, count: Optional[int] = None) -> np.ndarray:
        count = count or self.nodes
        return -math.pi + 2.0 * math.pi * np.arange(count) / count

    def points(self) -> List[Quaternion]:
        return [Quaternion.from_polar(self.radius, float(theta), self.axis) for theta in self.angles()]


class IntrinsicFunction(BaseModel):
    """f(q) = sum_m a_m q^m with real a_m, so f maps every slice into itself."""

    model_config = ConfigDict(frozen=True)

    coefficients: List[float] = Field(min_length=1)
    radius: float = Field(default=math.inf, gt=0.0)
    name: Optional[str] = None

    @classmethod
    def polynomial(cls, coefficients: List[float], name: Optional[str] = None) -> "IntrinsicFunction":
        return cls(coefficients=list(coefficients), name=name)

    @classmethod
    def monomial(cls, n: int) -> "IntrinsicFunction":
        return cls(coefficients=[0.0] * n + [1.0], name=f"q^{n}")

    @classmethod
    def kt(cls, n: int) -> "IntrinsicFunction":
        """q^n - q^(n+1)"""
        return cls(coefficients=[0.0] * n + [1.0, -1.0], name=f"kt-{n}")

    @classmethod
    def exp(cls, terms: int) -> "IntrinsicFunction":
        return cls(coefficients=[1.0 / math.factorial(m) for m in range(terms)], name=f"exp-{terms}")

    @classmethod
    def preset(cls, name: str) -> "IntrinsicFunction":
        fixed = {
            "one": [1.0],
            "identity": [0.0, 1.0],
            "q": [0.0, 1.0],
            "shift": [-1.0, 1.0],
            "q-1": [-1.0, 1.0],
            "square": [0.0, 0.0, 1.0],
            "q^2": [0.0, 0.0, 1.0],
            "q^2-q": [0.0, -1.0, 1.0],
        }
        if name in fixed:
            return cls(coefficients=fixed[name], name=name)
        match = re.fullmatch(r"(kt|exp)-(\d+)", name)
        if match is None:
            raise InputFailure(f"unknown function preset {name!r}")
        kind, count = match.group(1), int(match.group(2))
        return cls.kt(count) if kind == "kt" else cls.exp(count)

    @classmethod
    def parse(cls, text: str) -> "IntrinsicFunction":
        """A preset name or a coefficient list "a0,a1,..."."""
        text = text.strip()
        if "," not in text:
            try:
                return cls(coefficients=[float(text)], name=text)
            except ValueError:
                return cls.preset(text)
        try:
            return cls.polynomial([float(v) for v in text.split(",")], name=text)
        except ValueError as e:
            raise InputFailure(f"cannot parse coefficient list {text!r}") from e

    def evaluate(self, z: np.ndarray | complex) -> np.ndarray | complex:
        """Horner evaluation on complex arguments, i.e. on the slice C_i."""
        result = np.zeros_like(z, dtype=np.complex128) + self.coefficients[-1]
        for a in reversed(self.coefficients[:-1]):
            result = result * z + a
        return result if isinstance(z, np.ndarray) else complex(result)


def intrinsic_eval(f: IntrinsicFunction, q: Quaternion) -> Quaternion:
    if q.modulus > f.radius:
        raise OutOfRadius(q.modulus, f.radius)
    result = Quaternion.real(f.coefficients[-1])
    for a in reversed(f.coefficients[:-1]):
        result = result * q + a
    return result


def _slice_adjoints(values: np.ndarray, axis: UnitImaginary, n: int) -> np.ndarray:
    """Adjoints of the scalar operators (u + v I) I_n for complex values u + v i."""
    d = axis.direction
    u, v = values.real, values.imag
    eye = np.eye(n)
    a = (u + 1j * v * d.x)[:, None, None] * eye
    b = (v * d.y + 1j * v * d.z)[:, None, None] * eye
    return np.block([[a, b], [-np.conj(b), np.conj(a)]])


def _check_contour(t: QMatrix, c: ContourSpec):
    spectrum = s_spectrum(t)
    distance = min(abs(sphere.modulus - c.radius) for sphere in spectrum.spheres)
    if distance < eps():
        raise ContourThroughSpectrum(c.radius, distance)
    if c.radius <= spectrum.radius:
        raise DomainError(f"contour radius {c.radius:.6g} does not enclose the S-spectrum (r_S={spectrum.radius:.6g})")


def _quadrature(
    side: Side,
    t: QMatrix,
    c: ContourSpec,
    weight: Callable[[np.ndarray], np.ndarray],
    order: int = 1,
    check: bool = True,
) -> QMatrix:
    """Mean over the nodes of S^-order(s, T) weight(s), in the order the side requires."""
    _check_contour(t, c)
    n = t.n
    count = 2 * c.nodes if check else c.nodes
    z = c.radius * np.exp(1j * c.angles(count))

    t_adj = np.asarray(t.adjoint)
    t_sq = t_adj @ t_adj
    eye = np.eye(2 * n)
    pencils = t_sq[None] - (2.0 * z.real)[:, None, None] * t_adj[None] + (c.radius * c.radius) * eye[None]
    q_inv = np.linalg.inv(pencils)
    s_bar = _slice_adjoints(np.conj(z), c.axis, n)
    if order == 1:
        shifted = s_bar - t_adj[None]
        kernel = q_inv @ shifted if side == Side.LEFT else shifted @ q_inv
    else:
        binomial = _slice_adjoints(np.conj(z) ** 2, c.axis, n) - 2.0 * (t_adj[None] @ s_bar) + t_sq[None]
        kernel = q_inv @ q_inv @ binomial

    w = _slice_adjoints(weight(z), c.axis, n)
    terms = kernel @ w if side == Side.LEFT else w @ kernel
    # the coarse rule uses every other node of the refined one
    result = terms[::2].mean(axis=0) if check else terms.mean(axis=0)
    if check:
        refined = terms.mean(axis=0)
        change = float(np.linalg.norm(result - refined, 2))
        allowed = REFINEMENT_FACTOR * get_config().quadrature_tol * max(1.0, float(np.linalg.norm(refined, 2)))
        logger.debug("quadrature: %d nodes, radius %.6g, refinement change %.3e", c.nodes, c.radius, change)
        if change > allowed:
            logger.warning("quadrature on %d nodes did not settle: change %.3e", c.nodes, change)
            raise DivergedQuadrature(c.nodes, change, allowed)
    return from_adjoint(result, check=False)


def contour_power(side: Side, t: QMatrix, n: int, c: ContourSpec, order: int = 1, check: bool = True) -> QMatrix:
    """
    T^n from the Cauchy formula. order=2 integrates the squared left resolvent,
    T^n = 1/(2 pi (n+1)) int S_L^-2(s, T) s^(n+2) dtheta.
    """
    if n < 0:
        raise DomainError(f"power must be non-negative, got {n}")
    if order == 1:
        return _quadrature(side, t, c, lambda z: z ** (n + 1), check=check)
    if order == 2:
        if side != Side.LEFT:
            raise DomainError("the squared resolvent formula is only available on the left")
        return _quadrature(side, t, c, lambda z: z ** (n + 2) / (n + 1), order=2, check=check)
    raise DomainError(f"order must be 1 or 2, got {order}")


def functional_calculus(
    t: QMatrix, f: IntrinsicFunction, c: ContourSpec, side: Side = Side.LEFT, check: bool = True
) -> QMatrix:
    if c.radius > f.radius:
        raise OutOfRadius(c.radius, f.radius)
    return _quadrature(side, t, c, lambda z: z * f.evaluate(z), check=check)


def kt_operator(t: QMatrix, n: int, c: ContourSpec) -> QMatrix:
    """T^n - T^(n+1) through the calculus."""
    return functional_calculus(t, IntrinsicFunction.kt(n), c)


def spectral_mapping_check(t: QMatrix, f: IntrinsicFunction, c: ContourSpec) -> SpectralMappingReport:
    computed = s_spectrum(functional_calculus(t, f, c))
    images = [f.evaluate(complex(sphere.x, sphere.y)) for sphere in s_spectrum(t).spheres]
    mapped = spheres_from_points((value.real, value.imag) for value in images)
    distance = computed.hausdorff(mapped)
    logger.info("spectral mapping: %s, hausdorff distance %.3e", f.name or f.coefficients, distance)
    return SpectralMappingReport(computed=computed, mapped=mapped, hausdorff_distance=distance)
