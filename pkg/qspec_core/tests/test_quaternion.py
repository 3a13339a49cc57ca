import math

import numpy as np
import pytest
from hypothesis import assume, given, seed, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays
from pydantic import ValidationError

from qspec_core.errors import DomainError, ZeroDivisor
from qspec_core.quaternion import (
    AXIS_I,
    AXIS_IJK,
    Quaternion,
    SlicePoint,
    UnitImaginary,
    embed_slice,
    q_inv,
    q_mul,
    random_axis,
    slice_decompose,
)
from qspec_core.random_manager import RandomManager

components = arrays(np.float64, (4,), elements=st.floats(min_value=-10.0, max_value=10.0))


def test_basis_products():
    i, j, k = Quaternion.I, Quaternion.J, Quaternion.K
    assert q_mul(i, j) == k
    assert q_mul(j, i) == -k
    assert q_mul(j, k) == i
    assert q_mul(k, i) == j
    assert i * i == Quaternion.real(-1.0)
    assert i * j * k == Quaternion.real(-1.0)


def test_list_form():
    q = Quaternion.model_validate([1.0, 2.0, 3.0, 4.0])
    assert q == Quaternion(w=1.0, x=2.0, y=3.0, z=4.0)
    assert q.model_dump() == [1.0, 2.0, 3.0, 4.0]
    with pytest.raises(ValidationError):
        Quaternion.model_validate([1.0, 2.0, 3.0])


@seed(1)
@settings(max_examples=200, deadline=None)
@given(values=components)
def test_inverse_is_two_sided(values):
    q = Quaternion.from_array(values)
    assume(q.modulus > 1e-3)
    assert (q * q_inv(q)).is_close(Quaternion.ONE, 1e-12)
    assert (q_inv(q) * q).is_close(Quaternion.ONE, 1e-12)


@seed(2)
@settings(max_examples=200, deadline=None)
@given(p=components, q=components)
def test_modulus_is_multiplicative(p, q):
    a, b = Quaternion.from_array(p), Quaternion.from_array(q)
    assert (a * b).modulus == pytest.approx(a.modulus * b.modulus, rel=1e-12, abs=1e-12)
    assert (a * b).conj().is_close(b.conj() * a.conj(), 1e-12)


def test_zero_has_no_inverse():
    with pytest.raises(ZeroDivisor):
        Quaternion().inverse()


def test_integer_powers():
    q = Quaternion(w=0.5, x=-1.0, y=0.25, z=2.0)
    assert (q**3).is_close(q * q * q, 1e-14)
    assert (q**-2 * q**2).is_close(Quaternion.ONE, 1e-12)
    assert q**0 == Quaternion.ONE


def test_from_polar_stays_on_the_slice():
    q = Quaternion.from_polar(2.0, math.pi / 3, AXIS_IJK)
    assert q.modulus == pytest.approx(2.0)
    assert q.re == pytest.approx(1.0)
    assert q.x == pytest.approx(q.y)
    assert q.y == pytest.approx(q.z)


def test_unit_imaginary_normalizes():
    axis = UnitImaginary.model_validate([0.0, 3.0, 4.0])
    assert axis.as_list() == pytest.approx([0.0, 0.6, 0.8])
    assert (axis.direction * axis.direction).is_close(Quaternion.real(-1.0), 1e-14)


def test_unit_imaginary_rejects_real_parts():
    with pytest.raises(DomainError):
        UnitImaginary(direction=Quaternion(w=1.0, x=1.0))
    with pytest.raises(DomainError):
        UnitImaginary.from_vector(0.0, 0.0, 0.0)


def test_slice_decompose_examples():
    p = slice_decompose(Quaternion(w=3.0, x=4.0))
    assert (p.x, p.y, p.axis, p.degenerate) == (3.0, 4.0, AXIS_I, False)

    real = slice_decompose(Quaternion.real(5.0))
    assert (real.x, real.y, real.degenerate) == (5.0, 0.0, True)

    p = slice_decompose(Quaternion(w=1.0, x=1.0, y=1.0, z=1.0))
    assert p.y == pytest.approx(math.sqrt(3.0))
    np.testing.assert_allclose(p.axis.as_list(), AXIS_IJK.as_list(), rtol=1e-15)


@seed(3)
@settings(max_examples=100, deadline=None)
@given(values=components)
def test_embed_slice_inverts_decompose(values):
    q = Quaternion.from_array(values)
    assert embed_slice(slice_decompose(q)).is_close(q, 1e-9)


def test_slice_point_rejects_negative_y():
    with pytest.raises(ValidationError):
        SlicePoint(x=0.0, y=-1.0)


def test_random_axis_is_unit_and_seeded():
    first = random_axis(RandomManager(5))
    assert first.direction.modulus == pytest.approx(1.0)
    assert first == random_axis(RandomManager(5))
