import numpy as np
import pytest
import sympy as sp
from hypothesis import given, strategies as st

from gaugejet import taylor as tl
from gaugejet.errors import DimensionMismatch, DivisionNearZero, SingularMatrix


def test_seed_two_coordinates():
    X = tl.seed_coordinates([0.0, 0.0])
    assert np.array_equal(X.value, [0, 0])
    assert np.array_equal(X.grad, np.eye(2))
    assert not X.hess.any()


def test_seed_one_coordinate():
    X = tl.seed_coordinates([1.5])
    assert X.value[0] == 1.5 and X.grad[0].tolist() == [1.0] and X.hess[0].tolist() == [[0.0]]


def test_square_at_three():
    x = tl.seed_coordinates([3.0])[0]
    y = x * x
    assert (float(y.value), y.grad.tolist(), y.hess.tolist()) == (9.0, [6.0], [[2.0]])


def test_product_of_seeds():
    X = tl.seed_coordinates([2.0, 3.0])
    p = X[0] * X[1]
    assert float(p.value) == 6.0
    assert p.grad.tolist() == [3.0, 2.0]
    assert p.hess.tolist() == [[0.0, 1.0], [1.0, 0.0]]


def test_add_zero_is_identity():
    a = tl.TaylorArray([1.0, 2.0], [[1.0], [3.0]], [[[4.0]], [[5.0]]])
    b = a + 0
    assert np.array_equal(b.value, a.value) and np.array_equal(b.grad, a.grad)
    assert np.array_equal(b.hess, a.hess)


def test_exp_at_zero():
    e = tl.exp(tl.seed_coordinates([0.0])[0])
    assert (float(e.value), e.grad.tolist(), e.hess.tolist()) == (1.0, [1.0], [[1.0]])


def test_compose_identity_inner():
    outer = tl.Jet2.of(lambda X: tl.stack([X[0] * X[1], tl.sin(X[0])]), [0.4, -1.2])
    ident = tl.Jet2(np.array([0.4, -1.2]), np.eye(2), np.zeros((2, 2, 2)))
    out = tl.compose_jet2(outer, ident)
    assert np.allclose(out.first, outer.first, atol=0) and np.allclose(out.second, outer.second, atol=0)


def test_compose_square_then_cube():
    # (x^2)^3 = x^6 at 1: 1, 6, 30
    inner = tl.Jet2.of(lambda X: X[0] ** 2, [1.0])
    outer = tl.Jet2.of(lambda Y: Y[0] ** 3, inner.value)
    out = tl.compose_jet2(outer, inner)
    assert (out.value[0], out.first[0, 0], out.second[0, 0, 0]) == (1.0, 6.0, 30.0)


def test_compose_constant_outer():
    inner = tl.Jet2.of(lambda X: tl.stack([X[0] ** 2, X[0] * X[1]]), [0.3, 0.8])
    outer = tl.Jet2(np.array([2.0]), np.zeros((1, 2)), np.zeros((1, 2, 2)))
    out = tl.compose_jet2(outer, inner)
    assert not out.first.any() and not out.second.any()


def test_compose_dimension_mismatch():
    a = tl.Jet2(np.zeros(1), np.zeros((1, 3)), np.zeros((1, 3, 3)))
    b = tl.Jet2(np.zeros(2), np.zeros((2, 2)), np.zeros((2, 2, 2)))
    with pytest.raises(DimensionMismatch):
        tl.compose_jet2(a, b)


def test_fd_polynomial():
    f = lambda X: tl.stack([X[0] ** 3 * X[1] - 2 * X[1] ** 2, X[0] * X[1] * X[1] + 1])
    assert tl.finite_difference_check(f, [0.4, -0.9]) <= 1e-6


def test_fd_constant_map():
    assert tl.finite_difference_check(lambda X: 0.0 * X[0] + 3.0, [0.2]) <= 1e-12


def test_fd_sin():
    assert tl.finite_difference_check(lambda X: tl.sin(X[0]), [0.7]) <= 1e-6


def test_division_near_zero():
    x = tl.seed_coordinates([0.0])[0]
    with pytest.raises(DivisionNearZero):
        1.0 / x
    with pytest.raises(DivisionNearZero):
        tl.seed_coordinates([1.0])[0] / 0.0


def test_mixed_variable_counts():
    with pytest.raises(DimensionMismatch):
        tl.seed_coordinates([1.0])[0] + tl.seed_coordinates([1.0, 2.0])[0]


def test_singular_inverse():
    M = tl.as_taylor(np.array([[1.0, 2.0], [2.0, 4.0]]), 1)
    with pytest.raises(SingularMatrix):
        tl.inv(M)


def test_symbolic_oracle_degree4():
    x, y = sp.symbols("x y")
    expr = 3 * x**4 - 2 * x**2 * y**2 + x * y**3 - 5 * y + 7
    pt = {x: 0.6, y: -1.3}
    X = tl.seed_coordinates([0.6, -1.3])
    got = 3 * X[0] ** 4 - 2 * X[0] ** 2 * X[1] ** 2 + X[0] * X[1] ** 3 - 5 * X[1] + 7
    grad = [float(sp.diff(expr, v).subs(pt)) for v in (x, y)]
    hess = [[float(sp.diff(expr, a, b).subs(pt)) for b in (x, y)] for a in (x, y)]
    assert abs(float(got.value) - float(expr.subs(pt))) <= 1e-12
    assert np.max(np.abs(got.grad - grad)) <= 1e-12
    assert np.max(np.abs(got.hess - hess)) <= 1e-12


def test_matrix_inverse_derivatives():
    def M(X):
        return tl.stack([tl.stack([2.0 + X[0], X[1] * X[0]]),
                         tl.stack([tl.sin(X[1]), 3.0 - X[0] * X[0]])])
    f = lambda X: tl.inv(M(X)).reshape(-1) if isinstance(X, tl.TaylorArray) else \
        np.linalg.inv(np.array([[2 + X[0], X[1] * X[0]], [np.sin(X[1]), 3 - X[0] ** 2]])).reshape(-1)
    assert tl.finite_difference_check(f, [0.3, 0.5]) <= 1e-6


def test_expm_matches_scipy_and_fd():
    from scipy.linalg import expm

    B = np.array([[0.3, -1.1], [0.7, 0.2]])
    C = np.array([[-0.4, 0.5], [0.1, 0.9]])

    def f(X):
        if isinstance(X, tl.TaylorArray):
            Z = tl.as_taylor(B, 2) * X[0] + tl.as_taylor(C, 2) * (X[1] * X[0])
            return tl.expm(Z).reshape(-1)
        return expm(B * X[0] + C * X[1] * X[0]).reshape(-1)

    x = [1.7, -0.6]
    assert np.max(np.abs(tl.Jet2.of(f, x).value - f(np.array(x)))) <= 1e-12
    assert tl.finite_difference_check(f, x) <= 1e-6


def test_inverse_jet_of_diffeo():
    f = lambda X: tl.stack([X[0] + 0.3 * X[1] ** 2, X[1] - 0.2 * X[0] * X[1]])
    jet = tl.Jet2.of(f, [0.2, 0.4])
    inv = tl.inverse_jet2(jet)
    back = tl.compose_jet2(inv, jet)
    assert np.allclose(back.first, np.eye(2), atol=1e-13)
    assert np.max(np.abs(back.second)) <= 1e-13


coef = st.floats(-2, 2, allow_nan=False)


@given(st.lists(coef, min_size=6, max_size=6), coef, coef)
def test_product_rule_property(c, a, b):
    X = tl.seed_coordinates([a, b])
    p = c[0] + c[1] * X[0] + c[2] * X[1] * X[1]
    q = c[3] * X[0] * X[1] + c[4] + c[5] * X[0] ** 3
    pq = p * q
    lhs = pq.grad
    rhs = p.grad * q.value + p.value * q.grad
    assert np.allclose(lhs, rhs, atol=1e-12)
    assert np.allclose(pq.hess, pq.hess.T, atol=0)


@given(st.lists(coef, min_size=4, max_size=4), st.floats(-1, 1), st.floats(-1, 1))
def test_chain_rule_property(c, a, b):
    inner = lambda X: tl.stack([c[0] * X[0] + X[1] ** 2, c[1] * X[0] * X[1] + X[0]])
    outer = lambda Y: tl.stack([tl.sin(Y[0]) * Y[1] + c[2] * Y[0] ** 2, c[3] * Y[1] ** 3])
    ji = tl.Jet2.of(inner, [a, b])
    jo = tl.Jet2.of(outer, ji.value)
    direct = tl.Jet2.of(lambda X: outer(inner(X)), [a, b])
    comp = tl.compose_jet2(jo, ji)
    assert np.allclose(comp.first, direct.first, atol=1e-11)
    assert np.allclose(comp.second, direct.second, atol=1e-11)
