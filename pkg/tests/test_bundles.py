import numpy as np
import pytest
from hypothesis import given, strategies as st

from gaugejet import bundles as bd
from gaugejet import lie
from gaugejet.errors import FiberMismatch
from gaugejet.harness.suites import resid

SO3 = lie.make_group("SO3")
U1 = lie.make_group("U1")
KINDS = bd.FIBER_KINDS
seeds = st.integers(0, 2**32 - 1)
fibers = st.sampled_from([bd.make_fiber(k, lie.make_group(g)) for k in KINDS for g in ("SO3", "U1", "SU2")])
x0 = np.array([0.1, -0.2])


def test_rho_at_identity():
    F = bd.make_fiber("linear", SO3)
    q = np.array([1.0, 2.0, 3.0])
    assert np.array_equal(bd.rho_Q(bd.PrincipalPoint(x0, np.eye(3)), q, F).qhat, q)


def test_rho_rotates_vector():
    F = bd.make_fiber("linear", SO3)
    e = bd.rho_Q(bd.PrincipalPoint(x0, lie.rotation_z(np.pi / 2)), np.array([1.0, 0, 0]), F)
    assert np.allclose(e.qhat, [0, 1, 0], atol=1e-15)


def test_right_action_identity():
    p = bd.PrincipalPoint(x0, lie.random_element(SO3, 3))
    assert np.array_equal(bd.right_action_P(p, np.eye(3)).g, p.g)


def test_delta_u1():
    a, b = 0.3, 1.9
    d = bd.delta_P(bd.PrincipalPoint(x0, lie.rotation2(a)), bd.PrincipalPoint(x0, lie.rotation2(b)))
    assert np.allclose(d, lie.rotation2(b - a), atol=1e-15)


def test_delta_self_and_other_fiber():
    p = bd.PrincipalPoint(x0, lie.random_element(SO3, 4))
    assert np.allclose(bd.delta_P(p, p), np.eye(3), atol=1e-15)
    with pytest.raises(FiberMismatch):
        bd.delta_P(p, bd.PrincipalPoint(x0 + 1, p.g))


def test_fundamental_fields_zero():
    p = bd.PrincipalPoint(x0, lie.random_element(SO3, 4))
    assert not bd.fundamental_vf_P(np.zeros((3, 3)), p).X.any()
    F = bd.make_fiber("linear", SO3)
    assert not bd.fundamental_vf_Q(np.zeros((3, 3)), np.ones(3), F).any()


def test_fundamental_field_on_vector():
    F = bd.make_fiber("linear", SO3)
    ez = SO3.basis[2]
    e1 = np.array([1.0, 0, 0])
    assert np.allclose(bd.fundamental_vf_Q(ez, e1, F), -ez @ e1, atol=1e-15)


def test_vertical_round_trip():
    p = bd.PrincipalPoint(x0, lie.random_element(SO3, 8))
    X = lie.random_algebra(SO3, 9)
    q, Y = bd.vertical_iso(bd.vertical_from_pair(p, X))
    assert q is p and np.array_equal(Y, X)


def test_bad_fiber_point():
    F = bd.make_fiber("linear", SO3)
    with pytest.raises(FiberMismatch):
        F.check_point(np.zeros(4))
    with pytest.raises(FiberMismatch):
        bd.make_fiber("spinor", SO3)


@given(fibers, seeds)
def test_left_action_and_orbit_invariance(F, s):
    rng = np.random.default_rng(s)
    G = F.group
    g1, g2 = lie.random_element(G, rng), lie.random_element(G, rng)
    q = F.random_point(rng, 0.5)
    assert resid(F.act(g1, F.act(g2, q)), F.act(g1 @ g2, q)) <= 1e-12
    p = bd.PrincipalPoint(x0, lie.random_element(G, rng))
    moved = bd.rho_Q(bd.right_action_P(p, g1), F.act(np.linalg.inv(g1), q), F)
    assert resid(moved.qhat, bd.rho_Q(p, q, F).qhat) <= 1e-12


@given(st.sampled_from([SO3, U1, lie.make_group("SU2")]), seeds)
def test_right_action_law(G, s):
    rng = np.random.default_rng(s)
    p = bd.PrincipalPoint(x0, lie.random_element(G, rng))
    g1, g2 = lie.random_element(G, rng), lie.random_element(G, rng)
    lhs = bd.right_action_P(bd.right_action_P(p, g1), g2).g
    assert np.max(np.abs(lhs - bd.right_action_P(p, g1 @ g2).g)) <= 1e-12
    assert G.contains(lhs)
    d = bd.delta_P(bd.right_action_P(p, g1), bd.right_action_P(bd.PrincipalPoint(x0, g2), g1))
    assert np.max(np.abs(d - np.linalg.inv(g1) @ bd.delta_P(p, bd.PrincipalPoint(x0, g2)) @ g1)) <= 1e-12


@given(st.sampled_from([SO3, U1, lie.make_group("SU2")]), seeds)
def test_fundamental_vf_P_equivariance(G, s):
    rng = np.random.default_rng(s)
    p = bd.PrincipalPoint(x0, lie.random_element(G, rng))
    g0, X = lie.random_element(G, rng), lie.random_algebra(G, rng)
    # R_g0 (X)_P(p) = (Ad(g0^-1) X)_P(p.g0), compared as ambient matrices
    lhs = bd.fundamental_vf_P(X, p).matrix @ g0
    rhs = bd.fundamental_vf_P(lie.Ad(np.linalg.inv(g0), X), bd.right_action_P(p, g0)).matrix
    assert np.max(np.abs(lhs - rhs)) <= 1e-12


@given(fibers, seeds)
def test_fundamental_vf_Q_equivariance(F, s):
    rng = np.random.default_rng(s)
    g0, X = lie.random_element(F.group, rng), lie.random_algebra(F.group, rng)
    q = F.random_point(rng, 0.5)
    lhs = F.tangent_map(g0, q) @ bd.fundamental_vf_Q(X, q, F)
    rhs = bd.fundamental_vf_Q(lie.Ad(g0, X), F.act(g0, q), F)
    assert resid(lhs, rhs) <= 1e-10
