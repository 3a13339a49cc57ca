from concurrent.futures import ProcessPoolExecutor
from functools import partial
from typing import Callable, Iterable, List, TypeVar

from qspec_core.config import NumericsConfig, get_config, override

T = TypeVar("T")
R = TypeVar("R")


def _with_config(config: NumericsConfig, fn: Callable[[T], R], item: T) -> R:
    # worker processes do not share the parent's module state
    with override(**config.model_dump()):
        return fn(item)


def ordered_map(fn: Callable[[T], R], items: Iterable[T], workers: int = 1) -> List[R]:
    """Map fn over items, in a process pool when workers > 1. Results keep submission order."""
    items = list(items)
    if workers <= 1 or len(items) <= 1:
        return [fn(item) for item in items]

    task = partial(_with_config, get_config(), fn)
    with ProcessPoolExecutor(max_workers=workers) as executor:
        futures = [executor.submit(task, item) for item in items]
        return [future.result() for future in futures]
