import numpy as np
import pytest
from hypothesis import given, strategies as st

from gaugejet import lie
from gaugejet.errors import GroupMismatch
from gaugejet.harness.suites import resid

SO3 = lie.make_group("SO3")
ex, ey, ez = SO3.basis
seeds = st.integers(0, 2**32 - 1)
groups = st.sampled_from([lie.make_group(n) for n in lie.GROUP_NAMES])


def test_identity_is_neutral():
    g = lie.element(SO3, lie.random_element(SO3, 1))
    e = lie.element(SO3, np.eye(3))
    assert np.array_equal((g @ e).matrix, g.matrix)


def test_rotation_composition():
    a, b = 0.4, -1.3
    assert np.allclose(lie.rotation2(a) @ lie.rotation2(b), lie.rotation2(a + b), atol=1e-15)


def test_exp_of_zero():
    assert np.array_equal(lie.exp(np.zeros((3, 3))), np.eye(3))


def test_exp_quarter_turn():
    t = np.pi / 2
    assert np.allclose(lie.exp(np.array([[0, -t], [t, 0]])), [[0, -1], [1, 0]], atol=1e-15)


def test_adjoint_rotates_generator():
    assert np.allclose(lie.Ad(lie.rotation_z(np.pi / 2), ex), ey, atol=1e-15)
    assert np.array_equal(lie.Ad(np.eye(3), ex), ex)


def test_bracket_so3():
    assert np.array_equal(lie.bracket(ex, ey), ez)
    assert not lie.bracket(ex, ex).any()


def test_su2_basis_closes():
    b1, b2, b3 = lie.make_group("SU2").basis
    assert np.allclose(lie.bracket(b1, b2), b3, atol=1e-15)


def test_group_mismatch():
    a = lie.element(SO3, np.eye(3))
    b = lie.element(lie.make_group("U1"), np.eye(2))
    with pytest.raises(GroupMismatch):
        lie.mul(a, b)
    with pytest.raises(GroupMismatch):
        lie.element(SO3, 2 * np.eye(3))
    with pytest.raises(GroupMismatch):
        lie.make_group("E8")


def test_scale_zero():
    assert not lie.random_algebra(SO3, 0, 0.0).any()
    assert np.array_equal(lie.random_element(SO3, 0, 0.0), np.eye(3))


def test_same_seed_same_element():
    assert np.array_equal(lie.random_element(SO3, 99), lie.random_element(SO3, 99))


@pytest.mark.parametrize("name", lie.GROUP_NAMES)
def test_membership_of_samples(name):
    G = lie.make_group(name)
    rng = np.random.default_rng(5)
    assert all(G.contains(lie.random_element(G, rng)) for _ in range(1000))


def test_abelian_flags():
    assert lie.make_group("U1").abelian and not SO3.abelian


@given(groups, seeds)
def test_exp_inverse(G, s):
    X = lie.random_algebra(G, s)
    assert resid(lie.exp(X) @ lie.exp(-X), np.eye(G.m)) <= 1e-12


@given(groups, seeds)
def test_group_axioms(G, s):
    rng = np.random.default_rng(s)
    a, b, c = (lie.random_element(G, rng) for _ in range(3))
    assert resid((a @ b) @ c, a @ (b @ c)) <= 1e-12
    assert resid(lie.inv(a) @ a, np.eye(G.m)) <= 1e-12
    assert G.contains(a @ b)


@given(groups, seeds)
def test_adjoint_is_homomorphism(G, s):
    rng = np.random.default_rng(s)
    g1, g2 = lie.random_element(G, rng), lie.random_element(G, rng)
    X, Y = lie.random_algebra(G, rng), lie.random_algebra(G, rng)
    assert resid(lie.Ad(g1 @ g2, X), lie.Ad(g1, lie.Ad(g2, X))) <= 1e-12
    # Ad preserves brackets and stays in the algebra
    assert resid(lie.Ad(g1, lie.bracket(X, Y)), lie.bracket(lie.Ad(g1, X), lie.Ad(g1, Y))) <= 1e-12
    assert G.in_algebra(lie.Ad(g1, X))


@given(groups, seeds)
def test_bracket_antisymmetric(G, s):
    rng = np.random.default_rng(s)
    X, Y = lie.random_algebra(G, rng), lie.random_algebra(G, rng)
    assert np.array_equal(lie.bracket(X, Y), -lie.bracket(Y, X))
