import pytest

from qspec_core.config import NumericsConfig, set_config
from qspec_core.operators import QMatrix
from qspec_core.quaternion import Quaternion
from qspec_core.report_io import write_matrix


@pytest.fixture(autouse=True)
def default_numerics():
    set_config(**NumericsConfig().model_dump())
    yield


@pytest.fixture
def matrix_file(tmp_path):
    def write(t: QMatrix, name: str = "matrix.json"):
        path = tmp_path / name
        write_matrix(t, path)
        return path

    return write


@pytest.fixture
def identity_file(matrix_file):
    return matrix_file(QMatrix.identity(2), "identity.json")


@pytest.fixture
def one_and_contraction_file(matrix_file):
    return matrix_file(QMatrix.diag([Quaternion.ONE, Quaternion(y=0.6)]), "one_and_contraction.json")
