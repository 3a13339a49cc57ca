import math

import numpy as np
import pytest

from qspec_core.errors import DomainError
from qspec_core.models import ScanGrid, Side
from qspec_core.operators import QMatrix, mat_pow, op_norm
from qspec_core.power_analysis import power_norms
from qspec_core.quaternion import AXIS_I, AXIS_IJK, AXIS_J, Quaternion, random_axis
from qspec_core.yosida import (
    yosida,
    yosida_bound_scan,
    yosida_limit_residual,
    yosida_pow,
    yosida_pow_residual,
    yosida_pow_series,
    yosida_powers,
)


def point(factory, modulus):
    axis = random_axis(factory.random_manager)
    return Quaternion.from_polar(modulus, float(factory.random_manager.uniform(-math.pi, math.pi)), axis)


def test_first_power_is_the_approximation(corpus):
    s = Quaternion.from_polar(1.7, 0.4, AXIS_IJK)
    for t in corpus[:5]:
        for side in Side:
            assert yosida_powers(side, t, s, 1)[0].is_close(yosida(side, t, s), 1e-12)


def test_yosida_of_identity():
    s = Quaternion(w=3.0, y=4.0)
    expected = QMatrix.scalar(s * (s - 1.0).inverse(), 2)
    for side in Side:
        assert yosida(side, QMatrix.identity(2), s).is_close(expected, 1e-13)


def test_powers_match_series(factory, corpus):
    for t in corpus:
        s = point(factory, 1.5)
        for n in range(1, 4):
            assert op_norm(yosida_pow(Side.LEFT, t, s, n) - yosida_pow_series(t, s, n)) <= 1e-8


def test_limit_residual_bound(factory, corpus):
    for t in corpus:
        for modulus in [10.0, 100.0, 1000.0]:
            report = yosida_limit_residual(t, point(factory, modulus))
            assert report.residual <= report.bound * (1.0 + 1e-9)


def test_limit_residual_is_sharp_for_identity():
    for modulus in [10.0, 100.0, 1000.0]:
        report = yosida_limit_residual(QMatrix.identity(2), Quaternion(w=modulus))
        assert report.residual == pytest.approx(1.0 / (modulus - 1.0), abs=1e-12)
        assert report.bound == pytest.approx(report.residual, abs=1e-12)


def test_power_residual_bound(factory, corpus):
    for t in corpus:
        s = point(factory, 10.0)
        for n in [1, 2, 5]:
            report = yosida_pow_residual(t, s, n)
            assert report.residual <= report.bound * (1.0 + 1e-9)
            assert op_norm(yosida_pow(Side.LEFT, t, s, n) - mat_pow(t, n)) == pytest.approx(report.residual)


def test_residuals_need_s_outside_the_norm(jordan):
    with pytest.raises(DomainError):
        yosida_limit_residual(jordan, Quaternion(w=1.5))
    with pytest.raises(DomainError):
        yosida_pow_residual(jordan, Quaternion(w=1.5), 2)


def test_bound_scan_on_bounded_fixtures(factory):
    for name, t in factory.bounded_suite().items():
        report = yosida_bound_scan(t)
        target = power_norms(t, 200).p_n
        assert report.c_target == pytest.approx(target)
        assert report.worst_ratio <= target * (1.0 + 1e-6), name
        assert report.verdict == "satisfies", name
        assert report.witness is None
        assert {p.side for p in report.per_point} == {Side.LEFT, Side.RIGHT}


def test_bound_scan_shape():
    grid = ScanGrid(radii=[1.5, 3.0], angles=ScanGrid.uniform_angles(4), axes=[AXIS_I, AXIS_J], n_max=3)
    report = yosida_bound_scan(QMatrix.identity(2), grid=grid, sides=(Side.LEFT,))
    assert len(report.per_point) == 2 * 4 * 2 * 3
    assert len(report.radius_worst) == 2
    # for the identity the damped powers peak at theta = 0 with value exactly one
    assert report.worst_ratio == pytest.approx(1.0, abs=1e-12)


def test_jordan_block_grows_near_the_circle(jordan):
    report = yosida_bound_scan(jordan, grid=ScanGrid(n_max=12))
    radii = sorted(report.grid.radii)
    assert radii[0] == 1.05 and radii[-1] == 4.0
    assert report.radius_worst[0] > 10.0 * report.radius_worst[-1]


def test_bound_scan_in_parallel_matches_serial(corpus):
    grid = ScanGrid(radii=[1.25, 2.0], angles=ScanGrid.uniform_angles(4), axes=[AXIS_IJK], n_max=4)
    serial = yosida_bound_scan(corpus[0], grid=grid)
    parallel = yosida_bound_scan(corpus[0], grid=grid, workers=2)
    assert parallel.model_dump_json() == serial.model_dump_json()


def test_sides_coincide_for_real_matrices(jordan):
    grid = ScanGrid(radii=[1.1, 2.0], angles=ScanGrid.uniform_angles(4), axes=[AXIS_J, AXIS_IJK], n_max=4)
    real = QMatrix(a=np.array([[0.5, 0.3], [-0.2, 0.4]]), b=np.zeros((2, 2)))
    for t in [real, jordan]:
        left = yosida_bound_scan(t, grid=grid, sides=(Side.LEFT,))
        right = yosida_bound_scan(t, grid=grid, sides=(Side.RIGHT,))
        assert len(left.per_point) == len(right.per_point)
        for a, b in zip(left.per_point, right.per_point):
            assert (a.radius, a.angle, a.n) == (b.radius, b.angle, b.n)
            assert a.value == pytest.approx(b.value, rel=1e-10)
        assert left.worst_ratio == pytest.approx(right.worst_ratio, rel=1e-10)
