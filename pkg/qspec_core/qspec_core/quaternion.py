"""
Quaternion arithmetic and slice geometry.

A quaternion q = w + x i + y j + z k is stored by its four real components. Every
quaternion with a non-zero imaginary part lies on exactly one slice C_I = R + I R,
where I = Im(q)/|Im(q)| is a unit imaginary quaternion; real quaternions lie on
every slice.
"""

import math
from typing import Any, ClassVar

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_serializer, model_validator

from qspec_core.config import eps
from qspec_core.errors import DomainError, ZeroDivisor

# real part allowed on a unit imaginary before normalization
AXIS_REAL_TOL = 1e-8


class Quaternion(BaseModel):
    model_config = ConfigDict(frozen=True)

    w: float = 0.0
    x: float = 0.0
    y: float = 0.0
    z: float = 0.0

    ONE: ClassVar["Quaternion"]
    I: ClassVar["Quaternion"]
    J: ClassVar["Quaternion"]
    K: ClassVar["Quaternion"]

    @model_validator(mode="before")
    @classmethod
    def parse_list(cls, values: Any) -> Any:
        if isinstance(values, (list, tuple, np.ndarray)):
            if len(values) != 4:
                raise ValueError(f"a quaternion needs 4 components, got {len(values)}")
            return {"w": values[0], "x": values[1], "y": values[2], "z": values[3]}
        return values

    @model_serializer
    def as_list(self) -> list[float]:
        return [self.w, self.x, self.y, self.z]

    @classmethod
    def real(cls, value: float) -> "Quaternion":
        return cls(w=value)

    @classmethod
    def from_array(cls, values: np.ndarray) -> "Quaternion":
        return cls(w=float(values[0]), x=float(values[1]), y=float(values[2]), z=float(values[3]))

    @classmethod
    def from_complex_pair(cls, a: complex, b: complex) -> "Quaternion":
        """Inverse of ``complex_pair``: q = a + b j with a, b in C_i."""
        return cls(w=float(a.real), x=float(a.imag), y=float(b.real), z=float(b.imag))

    @classmethod
    def from_polar(cls, radius: float, theta: float, axis: "UnitImaginary") -> "Quaternion":
        """radius * e^{axis theta}"""
        d = axis.direction
        c, s = radius * math.cos(theta), radius * math.sin(theta)
        return cls(w=c, x=s * d.x, y=s * d.y, z=s * d.z)

    def to_array(self) -> np.ndarray:
        return np.array([self.w, self.x, self.y, self.z], dtype=np.float64)

    def complex_pair(self) -> tuple[complex, complex]:
        return complex(self.w, self.x), complex(self.y, self.z)

    @property
    def re(self) -> float:
        return self.w

    @property
    def im(self) -> "Quaternion":
        return Quaternion(x=self.x, y=self.y, z=self.z)

    @property
    def im_modulus(self) -> float:
        return math.sqrt(self.x * self.x + self.y * self.y + self.z * self.z)

    @property
    def norm2(self) -> float:
        return self.w * self.w + self.x * self.x + self.y * self.y + self.z * self.z

    @property
    def modulus(self) -> float:
        return math.sqrt(self.norm2)

    def conj(self) -> "Quaternion":
        return Quaternion(w=self.w, x=-self.x, y=-self.y, z=-self.z)

    def inverse(self) -> "Quaternion":
        norm2 = self.norm2
        if math.sqrt(norm2) <= eps():
            raise ZeroDivisor(math.sqrt(norm2))
        return Quaternion(w=self.w / norm2, x=-self.x / norm2, y=-self.y / norm2, z=-self.z / norm2)

    def __mul__(self, other: "Quaternion | float") -> "Quaternion":
        if not isinstance(other, Quaternion):
            f = float(other)
            return Quaternion(w=self.w * f, x=self.x * f, y=self.y * f, z=self.z * f)
        a1, b1, c1, d1 = self.w, self.x, self.y, self.z
        a2, b2, c2, d2 = other.w, other.x, other.y, other.z
        return Quaternion(
            w=a1 * a2 - b1 * b2 - c1 * c2 - d1 * d2,
            x=a1 * b2 + b1 * a2 + c1 * d2 - d1 * c2,
            y=a1 * c2 - b1 * d2 + c1 * a2 + d1 * b2,
            z=a1 * d2 + b1 * c2 - c1 * b2 + d1 * a2,
        )

    def __rmul__(self, other: float) -> "Quaternion":
        return self * other

    def __truediv__(self, other: float) -> "Quaternion":
        return self * (1.0 / float(other))

    def __add__(self, other: "Quaternion | float") -> "Quaternion":
        if not isinstance(other, Quaternion):
            return Quaternion(w=self.w + float(other), x=self.x, y=self.y, z=self.z)
        return Quaternion(w=self.w + other.w, x=self.x + other.x, y=self.y + other.y, z=self.z + other.z)

    def __radd__(self, other: float) -> "Quaternion":
        return self + other

    def __sub__(self, other: "Quaternion | float") -> "Quaternion":
        return self + (-other)

    def __rsub__(self, other: float) -> "Quaternion":
        return (-self) + other

    def __neg__(self) -> "Quaternion":
        return Quaternion(w=-self.w, x=-self.x, y=-self.y, z=-self.z)

    def __pow__(self, n: int) -> "Quaternion":
        if n < 0:
            return self.inverse() ** (-n)
        result, base = Quaternion.ONE, self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def is_close(self, other: "Quaternion", tol: float | None = None) -> bool:
        tol = eps() if tol is None else tol
        return (self - other).modulus <= tol * max(1.0, self.modulus, other.modulus)

    def __str__(self) -> str:
        return f"{self.w:g}{self.x:+g}i{self.y:+g}j{self.z:+g}k"


Quaternion.ONE = Quaternion(w=1.0)
Quaternion.I = Quaternion(x=1.0)
Quaternion.J = Quaternion(y=1.0)
Quaternion.K = Quaternion(z=1.0)


class UnitImaginary(BaseModel):
    model_config = ConfigDict(frozen=True)

    direction: Quaternion

    @model_validator(mode="before")
    @classmethod
    def normalize(cls, values: Any) -> Any:
        if isinstance(values, (list, tuple)) and len(values) == 3:
            values = {"direction": Quaternion(x=values[0], y=values[1], z=values[2])}
        direction = values["direction"] if isinstance(values, dict) else values
        if not isinstance(direction, Quaternion):
            direction = Quaternion.model_validate(direction)
        m = direction.im_modulus
        if m <= AXIS_REAL_TOL or abs(direction.w) > AXIS_REAL_TOL * max(1.0, m):
            raise DomainError(f"{direction} is not a purely imaginary non-zero quaternion")
        return {"direction": Quaternion(x=direction.x / m, y=direction.y / m, z=direction.z / m)}

    @model_serializer
    def as_list(self) -> list[float]:
        return [self.direction.x, self.direction.y, self.direction.z]

    @classmethod
    def from_vector(cls, x: float, y: float, z: float) -> "UnitImaginary":
        return cls(direction=Quaternion(x=x, y=y, z=z))

    def __str__(self) -> str:
        d = self.direction
        return f"({d.x:.6g},{d.y:.6g},{d.z:.6g})"


AXIS_I = UnitImaginary(direction=Quaternion.I)
AXIS_J = UnitImaginary(direction=Quaternion.J)
AXIS_K = UnitImaginary(direction=Quaternion.K)
AXIS_IJK = UnitImaginary.from_vector(1.0, 1.0, 1.0)


class SlicePoint(BaseModel):
    model_config = ConfigDict(frozen=True)

    x: float
    y: float = Field(ge=0.0)
    axis: UnitImaginary = AXIS_I
    degenerate: bool = False


def q_mul(a: Quaternion, b: Quaternion) -> Quaternion:
    return a * b


def q_inv(q: Quaternion) -> Quaternion:
    return q.inverse()


def slice_decompose(q: Quaternion) -> SlicePoint:
    y = q.im_modulus
    if y <= eps():
        # Im q / |Im q| is undefined; the axis is a placeholder
        return SlicePoint(x=q.w, y=0.0, axis=AXIS_I, degenerate=True)
    return SlicePoint(x=q.w, y=y, axis=UnitImaginary(direction=q.im))


def embed_slice(p: SlicePoint) -> Quaternion:
    d = p.axis.direction
    return Quaternion(w=p.x, x=p.y * d.x, y=p.y * d.y, z=p.y * d.z)


def random_axis(random_manager) -> UnitImaginary:
    v = random_manager.unit_vectors(1)[0]
    return UnitImaginary.from_vector(float(v[0]), float(v[1]), float(v[2]))
