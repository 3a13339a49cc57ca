"""
Quaternion matrices as bounded right-linear operators on H^n.

A quaternion matrix T is split along C_i as T = A + B j with complex matrices A and B.
Its complex adjoint is the 2n x 2n matrix [[A, B], [-conj(B), conj(A)]]; the map
T -> adjoint(T) is an injective algebra homomorphism, so inversion, eigenvalues and
singular values are all computed on the adjoint with numpy.
"""

from dataclasses import dataclass
from functools import cached_property
from typing import Sequence

import numpy as np

from qspec_core.config import eps
from qspec_core.errors import DimensionMismatch, NotAdjointShaped, Singular
from qspec_core.quaternion import Quaternion


@dataclass(frozen=True, eq=False)
class ComplexAdjoint:
    matrix: np.ndarray

    def __post_init__(self):
        m = np.array(self.matrix, dtype=np.complex128)
        if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] % 2:
            raise NotAdjointShaped(float("inf"))
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @property
    def n(self) -> int:
        return self.matrix.shape[0] // 2

    def block_deviation(self) -> float:
        n = self.n
        m = self.matrix
        return float(
            max(
                np.max(np.abs(m[n:, :n] + np.conj(m[:n, n:])), initial=0.0),
                np.max(np.abs(m[n:, n:] - np.conj(m[:n, :n])), initial=0.0),
            )
        )


@dataclass(frozen=True, eq=False)
class QMatrix:
    a: np.ndarray
    b: np.ndarray

    def __post_init__(self):
        a = np.array(self.a, dtype=np.complex128)
        b = np.array(self.b, dtype=np.complex128)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise DimensionMismatch(a.shape[0], a.shape[-1] if a.ndim else 0, "square matrix")
        if b.shape != a.shape:
            raise DimensionMismatch(a.shape[0], b.shape[0], "j-part")
        a.setflags(write=False)
        b.setflags(write=False)
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)

    @property
    def n(self) -> int:
        return self.a.shape[0]

    @classmethod
    def from_entries(cls, entries: Sequence | np.ndarray) -> "QMatrix":
        e = np.asarray(entries, dtype=np.float64)
        if e.ndim != 3 or e.shape[0] != e.shape[1] or e.shape[2] != 4:
            raise DimensionMismatch(4, e.shape[-1] if e.ndim else 0, f"entries of shape {e.shape}")
        return cls(a=e[..., 0] + 1j * e[..., 1], b=e[..., 2] + 1j * e[..., 3])

    @classmethod
    def identity(cls, n: int) -> "QMatrix":
        return cls(a=np.eye(n), b=np.zeros((n, n)))

    @classmethod
    def zeros(cls, n: int) -> "QMatrix":
        return cls(a=np.zeros((n, n)), b=np.zeros((n, n)))

    @classmethod
    def scalar(cls, q: Quaternion, n: int) -> "QMatrix":
        """The operator q I: q on every diagonal entry."""
        qa, qb = q.complex_pair()
        return cls(a=qa * np.eye(n), b=qb * np.eye(n))

    @classmethod
    def diag(cls, values: Sequence[Quaternion]) -> "QMatrix":
        pairs = [q.complex_pair() for q in values]
        return cls(a=np.diag([p[0] for p in pairs]), b=np.diag([p[1] for p in pairs]))

    def to_entries(self) -> np.ndarray:
        return np.stack([self.a.real, self.a.imag, self.b.real, self.b.imag], axis=-1)

    def entry(self, row: int, col: int) -> Quaternion:
        return Quaternion.from_complex_pair(self.a[row, col], self.b[row, col])

    @cached_property
    def adjoint(self) -> np.ndarray:
        m = np.block([[self.a, self.b], [-np.conj(self.b), np.conj(self.a)]])
        m.setflags(write=False)
        return m

    @cached_property
    def eigenvalues(self) -> np.ndarray:
        return np.linalg.eigvals(self.adjoint)

    @cached_property
    def singular_values(self) -> np.ndarray:
        # every singular value of the adjoint appears twice
        return np.linalg.svd(self.adjoint, compute_uv=False)

    def __matmul__(self, other: "QMatrix") -> "QMatrix":
        if other.n != self.n:
            raise DimensionMismatch(self.n, other.n, "matrix product")
        return QMatrix(
            a=self.a @ other.a - self.b @ np.conj(other.b),
            b=self.a @ other.b + self.b @ np.conj(other.a),
        )

    def __add__(self, other: "QMatrix") -> "QMatrix":
        if other.n != self.n:
            raise DimensionMismatch(self.n, other.n, "matrix sum")
        return QMatrix(a=self.a + other.a, b=self.b + other.b)

    def __sub__(self, other: "QMatrix") -> "QMatrix":
        return self + (-other)

    def __neg__(self) -> "QMatrix":
        return QMatrix(a=-self.a, b=-self.b)

    def __mul__(self, factor: float) -> "QMatrix":
        """Multiplication by a real scalar, which commutes with everything."""
        f = float(factor)
        return QMatrix(a=self.a * f, b=self.b * f)

    __rmul__ = __mul__

    def scale_left(self, q: Quaternion) -> "QMatrix":
        """(qT)v = q(Tv)"""
        alpha, beta = q.complex_pair()
        return QMatrix(
            a=alpha * self.a - beta * np.conj(self.b),
            b=alpha * self.b + beta * np.conj(self.a),
        )

    def scale_right(self, q: Quaternion) -> "QMatrix":
        """(Tq)v = T(qv)"""
        alpha, beta = q.complex_pair()
        return QMatrix(
            a=alpha * self.a - np.conj(beta) * self.b,
            b=beta * self.a + np.conj(alpha) * self.b,
        )

    def is_close(self, other: "QMatrix", tol: float | None = None) -> bool:
        tol = eps() if tol is None else tol
        return op_norm(self - other) <= tol * max(1.0, op_norm(self), op_norm(other))

    def __str__(self) -> str:
        rows = [" ".join(str(self.entry(r, c)) for c in range(self.n)) for r in range(self.n)]
        return "\n".join(rows)


def _as_pair(v: Sequence[Quaternion] | np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    if isinstance(v, np.ndarray):
        arr = np.asarray(v, dtype=np.float64)
    else:
        arr = np.array([q.to_array() for q in v], dtype=np.float64).reshape(-1, 4)
    return arr[:, 0] + 1j * arr[:, 1], arr[:, 2] + 1j * arr[:, 3]


def mat_apply(t: QMatrix, v: Sequence[Quaternion] | np.ndarray) -> list[Quaternion]:
    va, vb = _as_pair(v)
    if va.shape[0] != t.n:
        raise DimensionMismatch(t.n, va.shape[0], "vector")
    ra = t.a @ va - t.b @ np.conj(vb)
    rb = t.a @ vb + t.b @ np.conj(va)
    return [Quaternion.from_complex_pair(complex(x), complex(y)) for x, y in zip(ra, rb)]


def complex_adjoint(t: QMatrix) -> ComplexAdjoint:
    return ComplexAdjoint(matrix=t.adjoint)


def from_adjoint(m: ComplexAdjoint | np.ndarray, check: bool = True) -> QMatrix:
    adj = m if isinstance(m, ComplexAdjoint) else ComplexAdjoint(matrix=m)
    n = adj.n
    mat = adj.matrix
    if check:
        deviation = adj.block_deviation()
        scale = max(1.0, float(np.max(np.abs(mat), initial=0.0)))
        if deviation > eps() * scale:
            raise NotAdjointShaped(deviation)
    # averaging the mirrored blocks is exact on an exact adjoint
    a = (mat[:n, :n] + np.conj(mat[n:, n:])) / 2
    b = (mat[:n, n:] - np.conj(mat[n:, :n])) / 2
    return QMatrix(a=a, b=b)


def op_norm(t: QMatrix) -> float:
    return float(t.singular_values[0]) if t.n else 0.0


def sigma_min(t: QMatrix) -> float:
    return float(t.singular_values[-1]) if t.n else 0.0


def is_invertible(t: QMatrix) -> bool:
    # relative test so that the verdict does not depend on the scale of t
    smax, smin = op_norm(t), sigma_min(t)
    return smin > eps() * smax


def mat_inv(t: QMatrix) -> QMatrix:
    if not is_invertible(t):
        raise Singular(sigma_min(t), op_norm(t))
    return from_adjoint(np.linalg.inv(t.adjoint), check=False)


def mat_pow(t: QMatrix, n: int) -> QMatrix:
    if n < 0:
        return mat_pow(mat_inv(t), -n)
    if n == 0:
        return QMatrix.identity(t.n)
    return from_adjoint(np.linalg.matrix_power(t.adjoint, n), check=False)


def successive_powers(t: QMatrix, count: int) -> list[QMatrix]:
    """[T^0, T^1, ..., T^count] by repeated multiplication (one product per step)."""
    powers = [QMatrix.identity(t.n)]
    for _ in range(count):
        powers.append(powers[-1] @ t)
    return powers
