"""
Quaternion S-spectrum core package.

This package provides quaternion arithmetic, quaternion matrices as right-linear
operators, S-spectra and S-resolvents, spherical Yosida approximations, the contour
S-functional calculus and power-boundedness diagnostics.
"""

__version__ = "0.1.0"
