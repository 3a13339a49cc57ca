import pytest

from qspec_core.config import NumericsConfig, set_config
from qspec_core.fixtures import FixtureFactory
from qspec_core.operators import QMatrix
from qspec_core.quaternion import Quaternion
from qspec_core.random_manager import RandomManager

CORPUS_SEED = 20240321


@pytest.fixture(autouse=True)
def default_numerics():
    set_config(**NumericsConfig().model_dump())
    yield


@pytest.fixture
def factory():
    return FixtureFactory(RandomManager(CORPUS_SEED))


@pytest.fixture
def corpus(factory):
    """20 random matrices of size 2..4 with ||T|| = 0.9."""
    return factory.random_corpus(20, (2, 3, 4), 0.9)


@pytest.fixture
def jordan(factory):
    return factory.jordan(2)


@pytest.fixture
def one_and_contraction():
    return QMatrix.diag([Quaternion.ONE, Quaternion(y=0.6)])
