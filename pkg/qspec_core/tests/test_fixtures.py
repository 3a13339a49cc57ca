import numpy as np
import pytest

from qspec_core.errors import InputFailure
from qspec_core.fixtures import FIXTURE_KINDS, FixtureFactory
from qspec_core.operators import op_norm
from qspec_core.quaternion import Quaternion
from qspec_core.random_manager import RandomManager
from qspec_core.spectrum import s_spectrum, spheres_from_points


def test_jordan_fixture():
    t = FixtureFactory(RandomManager(1)).build("jordan", 2)
    expected = np.zeros((2, 2, 4))
    expected[0, 0, 0] = expected[0, 1, 0] = expected[1, 1, 0] = 1.0
    np.testing.assert_array_equal(t.to_entries(), expected)


def test_diagonal_spectrum_sits_on_the_entries():
    t = FixtureFactory(RandomManager(7)).build("diagonal", 3)
    entries = [t.entry(k, k) for k in range(3)]
    expected = spheres_from_points((q.re, q.im_modulus) for q in entries)
    computed = s_spectrum(t)
    assert len(computed) == 3
    assert computed.hausdorff(expected) < 1e-12
    assert all(0.1 <= q.modulus <= 0.95 for q in entries)


def test_same_seed_same_fixture():
    for kind in FIXTURE_KINDS:
        first = FixtureFactory(RandomManager(11)).build(kind, 3)
        second = FixtureFactory(RandomManager(11)).build(kind, 3)
        np.testing.assert_array_equal(first.to_entries(), second.to_entries())


def test_random_fixture_norm(factory):
    assert op_norm(factory.random(4, norm=0.5)) == pytest.approx(0.5)
    corpus = factory.random_corpus(6, sizes=(2, 3))
    assert [t.n for t in corpus] == [2, 3, 2, 3, 2, 3]


def test_unitary_like_entries_are_units(factory):
    t = factory.unitary_like(4)
    for k in range(4):
        assert t.entry(k, k).modulus == pytest.approx(1.0)
    assert op_norm(t) == pytest.approx(1.0)


def test_near_identity_spectrum(factory):
    t = factory.near_identity(3, delta=1e-8)
    assert s_spectrum(t).within_one(1e-8)
    assert t.entry(2, 0).modulus == 0.0


def test_peripheral_one_fixture(factory):
    t = factory.peripheral_one(3)
    assert t.entry(0, 0) == Quaternion.ONE
    assert all(t.entry(k, k).modulus < 1.0 for k in range(1, 3))


def test_unknown_kind():
    factory = FixtureFactory(RandomManager(1))
    with pytest.raises(InputFailure):
        factory.build("hermitian", 2)
    with pytest.raises(InputFailure):
        factory.build("random", 0)
