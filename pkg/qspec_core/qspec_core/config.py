from contextlib import contextmanager
from typing import Iterator

from pydantic import BaseModel, ConfigDict, Field


class NumericsConfig(BaseModel):
    model_config = ConfigDict(frozen=True)

    # equality checks, relative invertibility threshold, sphere merging
    epsilon: float = Field(default=1e-10, gt=0.0, lt=1.0)
    quadrature_tol: float = Field(default=1e-8, gt=0.0)
    peripheral_tol: float = Field(default=1e-8, gt=0.0)
    kt_tol: float = Field(default=1e-6, gt=0.0)
    growth_tol: float = Field(default=1e-9, ge=0.0)


_active = NumericsConfig()


def get_config() -> NumericsConfig:
    return _active


def set_config(**overrides: float) -> NumericsConfig:
    global _active
    _active = NumericsConfig.model_validate({**_active.model_dump(), **overrides})
    return _active


@contextmanager
def override(**overrides: float) -> Iterator[NumericsConfig]:
    global _active
    previous = _active
    try:
        yield set_config(**overrides)
    finally:
        _active = previous


def eps() -> float:
    return _active.epsilon
