from typing import Dict, List, Optional, Sequence

import numpy as np

from qspec_core.errors import InputFailure
from qspec_core.operators import QMatrix, op_norm
from qspec_core.quaternion import Quaternion
from qspec_core.random_manager import RandomManager

FIXTURE_KINDS = ["random", "jordan", "diagonal", "unitary-like", "nilpotent", "near-identity"]


class FixtureFactory:
    """Deterministic test matrices; every draw goes through the random manager."""

    def __init__(self, random_manager: Optional[RandomManager] = None):
        self.random_manager = random_manager if random_manager is not None else RandomManager()

    def quaternions(self, count: int) -> np.ndarray:
        return self.random_manager.normal(size=(count, 4))

    def random(self, n: int, norm: float = 0.9) -> QMatrix:
        """Gaussian entries rescaled to the given operator norm."""
        t = QMatrix.from_entries(self.random_manager.normal(size=(n, n, 4)))
        return t * (norm / op_norm(t))

    def jordan(self, n: int = 2) -> QMatrix:
        """Ones on the diagonal and the superdiagonal."""
        return QMatrix(a=np.eye(n) + np.eye(n, k=1), b=np.zeros((n, n)))

    def nilpotent(self, n: int = 2) -> QMatrix:
        return QMatrix(a=np.eye(n, k=1), b=np.zeros((n, n)))

    def diagonal(self, n: int, max_modulus: float = 0.95) -> QMatrix:
        """Random diagonal entries with modulus in [0.1, max_modulus]."""
        entries = self.quaternions(n)
        moduli = self.random_manager.uniform(0.1, max_modulus, size=n)
        scaled = entries / np.linalg.norm(entries, axis=1, keepdims=True) * moduli[:, None]
        return QMatrix.diag([Quaternion.from_array(q) for q in scaled])

    def unitary_like(self, n: int) -> QMatrix:
        """Diagonal of unit quaternions."""
        entries = self.quaternions(n)
        units = entries / np.linalg.norm(entries, axis=1, keepdims=True)
        return QMatrix.diag([Quaternion.from_array(q) for q in units])

    def near_identity(self, n: int, delta: float = 1e-8) -> QMatrix:
        """I + delta N with N strictly upper triangular, ||N|| = 1, so the S-spectrum is {1}."""
        if n < 2:
            return QMatrix.identity(n)
        upper = np.triu(np.ones((n, n)), k=1)[..., None] * self.random_manager.normal(size=(n, n, 4))
        strict = QMatrix.from_entries(upper)
        return QMatrix.identity(n) + strict * (delta / op_norm(strict))

    def peripheral_one(self, n: int, max_modulus: float = 0.9) -> QMatrix:
        """diag(1, q_2, ..., q_n) with |q_k| < 1."""
        rest = self.diagonal(n - 1, max_modulus) if n > 1 else None
        values = [Quaternion.ONE] + ([rest.entry(k, k) for k in range(n - 1)] if rest is not None else [])
        return QMatrix.diag(values)

    def build(self, kind: str, n: int) -> QMatrix:
        if n < 1:
            raise InputFailure(f"fixture dimension must be positive, got {n}")
        builders = {
            "random": self.random,
            "jordan": self.jordan,
            "diagonal": self.diagonal,
            "unitary-like": self.unitary_like,
            "nilpotent": self.nilpotent,
            "near-identity": self.near_identity,
        }
        if kind not in builders:
            raise InputFailure(f"unknown fixture kind {kind!r}, expected one of {FIXTURE_KINDS}")
        return builders[kind](n)

    def random_corpus(self, count: int = 20, sizes: Sequence[int] = (2, 3, 4), norm: float = 0.9) -> List[QMatrix]:
        return [self.random(sizes[k % len(sizes)], norm) for k in range(count)]

    def kt_suite(self) -> Dict[str, QMatrix]:
        """Katznelson-Tzafriri fixtures keyed by name."""
        return {
            "identity": QMatrix.identity(2),
            "minus-identity": QMatrix.identity(2) * -1.0,
            "one-and-contraction": QMatrix.diag([Quaternion.ONE, Quaternion(y=0.6)]),
            "peripheral-one": self.peripheral_one(3),
            "nilpotent": self.nilpotent(2),
        }

    def bounded_suite(self) -> Dict[str, QMatrix]:
        """Matrices whose powers are bounded (r_S < 1 or unimodular and diagonal)."""
        return {
            "identity": QMatrix.identity(2),
            "minus-identity": QMatrix.identity(2) * -1.0,
            "contraction": QMatrix.diag([Quaternion(w=0.9), Quaternion(y=0.8)]),
            "one-and-contraction": QMatrix.diag([Quaternion.ONE, Quaternion(y=0.6)]),
            "unitary-like": self.unitary_like(3),
            "diagonal": self.diagonal(3),
            "random": self.random(3),
            "nilpotent": self.nilpotent(2),
        }
