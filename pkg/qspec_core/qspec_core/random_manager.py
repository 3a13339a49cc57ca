from typing import Optional

import numpy as np


class RandomManager:
    def __init__(self, seed: Optional[int] = None):
        self.seed = seed
        self._random = np.random.default_rng(self.seed)

    def normal(self, *args, **kwargs):
        return self._random.normal(*args, **kwargs)

    def uniform(self, *args, **kwargs):
        return self._random.uniform(*args, **kwargs)

    def unit_vectors(self, count: int, dim: int = 3) -> np.ndarray:
        """Rows drawn uniformly from the unit sphere in R^dim."""
        v = self._random.normal(size=(count, dim))
        return v / np.linalg.norm(v, axis=1, keepdims=True)
