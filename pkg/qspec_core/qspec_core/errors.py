"""
Error hierarchy.

``DomainFailure`` subclasses signal a mathematical precondition that does not hold
(a point on the S-spectrum, a singular matrix, a diverging series). ``InputFailure``
subclasses signal malformed input. The command line maps them to exit codes 2 and 1.
"""

from typing import Optional


class QSpecError(Exception):
    pass


class DomainFailure(QSpecError):
    pass


class InputFailure(QSpecError, ValueError):
    pass


class ZeroDivisor(DomainFailure):
    def __init__(self, modulus: float):
        super().__init__(f"quaternion modulus {modulus:.3e} is below epsilon")
        self.modulus = modulus


class Singular(DomainFailure):
    def __init__(self, sigma_min: float, sigma_max: float):
        super().__init__(f"matrix is singular: sigma_min={sigma_min:.3e}, sigma_max={sigma_max:.3e}")
        self.sigma_min = sigma_min
        self.sigma_max = sigma_max


class SpectrumPoint(DomainFailure):
    def __init__(self, point: list[float], margin: float):
        super().__init__(f"point {point} lies on the S-spectrum (margin {margin:.3e})")
        self.point = point
        self.margin = margin


class Divergent(DomainFailure):
    def __init__(self, modulus: float, spectral_radius: float):
        super().__init__(f"series diverges: |s|={modulus:.6g} <= r_S(T)={spectral_radius:.6g}")
        self.modulus = modulus
        self.spectral_radius = spectral_radius


class DomainError(DomainFailure):
    pass


class OutOfRadius(DomainFailure):
    def __init__(self, modulus: float, radius: float):
        super().__init__(f"|q|={modulus:.6g} exceeds the convergence radius {radius:.6g}")
        self.modulus = modulus
        self.radius = radius


class ContourThroughSpectrum(DomainFailure):
    def __init__(self, radius: float, distance: float):
        super().__init__(f"contour of radius {radius:.6g} passes within {distance:.3e} of the S-spectrum")
        self.radius = radius
        self.distance = distance


class DivergedQuadrature(DomainFailure):
    def __init__(self, nodes: int, change: float, tolerance: float):
        super().__init__(f"doubling {nodes} nodes changed the result by {change:.3e} (allowed {tolerance:.3e})")
        self.nodes = nodes
        self.change = change
        self.tolerance = tolerance


class DimensionMismatch(InputFailure):
    def __init__(self, expected: int, got: int, what: Optional[str] = None):
        label = f" for {what}" if what else ""
        super().__init__(f"dimension mismatch{label}: expected {expected}, got {got}")
        self.expected = expected
        self.got = got


class NotAdjointShaped(InputFailure):
    def __init__(self, deviation: float):
        super().__init__(f"matrix violates the complex adjoint block symmetry by {deviation:.3e}")
        self.deviation = deviation


class MatrixFileError(InputFailure):
    pass
