import numpy as np
import pytest
from hypothesis import given, strategies as st

from gaugejet import groupoids as gp
from gaugejet import lie
from gaugejet import randomgen as rg
from gaugejet import taylor as tl
from gaugejet.bundles import AssociatedPoint, PrincipalPoint, make_fiber, right_action_P
from gaugejet.errors import ComposabilityError, DegenerateBisection, NotSemiholonomous
from gaugejet.harness.suites import resid

SO3, U1 = lie.make_group("SO3"), lie.make_group("U1")
seeds = st.integers(0, 2**32 - 1)
cases = st.sampled_from([(G, k, n) for G in (U1, SO3, lie.make_group("SU2"))
                         for k in ("linear", "adjoint", "callback") for n in (1, 2, 3)])


def _jg_gap(a, b):
    return max(resid(a.x_src, b.x_src), resid(a.x_tgt, b.x_tgt), resid(a.h, b.h),
               resid(a.A, b.A), resid(a.Xi, b.Xi))


def _je_gap(a, b):
    return max(resid(a.x, b.x), resid(a.e, b.e), resid(a.slope, b.slope))


# -- gauge groupoid -----------------------------------------------------


def test_u1_composition():
    x1, x2, x3 = np.array([0.1]), np.array([0.5]), np.array([-0.3])
    a = gp.GaugeGroupoidElement(x3, lie.rotation2(0.7), x2)
    b = gp.GaugeGroupoidElement(x2, lie.rotation2(-1.9), x1)
    ab = gp.compose(a, b)
    assert np.array_equal(ab.x_tgt, x3) and np.array_equal(ab.x_src, x1)
    assert np.allclose(ab.h, lie.rotation2(0.7 - 1.9), atol=1e-15)


def test_units_and_inverse():
    x1, x2 = np.array([0.1, 0.2]), np.array([0.4, -0.1])
    g = gp.GaugeGroupoidElement(x2, lie.random_element(SO3, 1), x1)
    assert np.array_equal(gp.compose(g, gp.unit(x1, 3)).h, g.h)
    gi = gp.compose(g, gp.invert(g))
    assert np.allclose(gi.h, np.eye(3), atol=1e-15) and np.array_equal(gi.x_src, x2)


def test_not_composable():
    a = gp.unit(np.array([0.0]), 2)
    b = gp.unit(np.array([1.0]), 2)
    with pytest.raises(ComposabilityError):
        gp.compose(a, b)


def test_unit_action_and_target():
    x1, x2 = np.array([0.3]), np.array([-0.2])
    p = PrincipalPoint(x1, lie.random_element(SO3, 2))
    assert np.array_equal(gp.act_on_P(gp.unit(x1, 3), p).g, p.g)
    g = gp.GaugeGroupoidElement(x2, lie.random_element(SO3, 3), x1)
    assert np.array_equal(gp.act_on_P(g, p).x, x2)


def test_adjoint_transport():
    F = make_fiber("adjoint", SO3)
    h = lie.random_element(SO3, 4)
    X = lie.random_algebra(SO3, 5)
    x = np.array([0.2])
    e = gp.act_on_assoc(gp.GaugeGroupoidElement(x, h, x), AssociatedPoint(x, X.reshape(-1)), F)
    assert np.allclose(e.qhat.reshape(3, 3), h @ X @ h.T, atol=1e-14)


def test_isotropy_identity():
    p = PrincipalPoint(np.array([0.0]), lie.random_element(SO3, 6))
    u = gp.isotropy_embed(p, np.eye(3))
    assert np.allclose(u.h, np.eye(3), atol=1e-15) and np.array_equal(u.x_src, u.x_tgt)


@given(st.sampled_from([U1, SO3]), seeds)
def test_gauge_groupoid_properties(G, s):
    rng = np.random.default_rng(s)
    xs = [rg.random_base_point(rng, 2) for _ in range(4)]
    a, b, c = (gp.GaugeGroupoidElement(xs[i + 1], lie.random_element(G, rng), xs[i]) for i in range(3))
    assert resid(gp.compose(gp.compose(c, b), a).h, gp.compose(c, gp.compose(b, a)).h) <= 1e-12
    p = PrincipalPoint(xs[0], lie.random_element(G, rng))
    g0 = lie.random_element(G, rng)
    assert resid(gp.act_on_P(a, right_action_P(p, g0)).g, right_action_P(gp.act_on_P(a, p), g0).g) <= 1e-12
    g1, g2 = lie.random_element(G, rng), lie.random_element(G, rng)
    lhs = gp.compose(gp.isotropy_embed(p, g1), gp.isotropy_embed(p, g2))
    assert resid(lhs.h, gp.isotropy_embed(p, g1 @ g2).h) <= 1e-12
    F = make_fiber("linear", G)
    e = AssociatedPoint(xs[0], F.random_point(rng))
    two = gp.act_on_assoc(b, gp.act_on_assoc(a, e, F), F)
    assert resid(two.qhat, gp.act_on_assoc(gp.compose(b, a), e, F).qhat) <= 1e-12


# -- jets of bisections ---------------------------------------------------


def test_identity_bisection_jet():
    beta = gp.Bisection(lambda X: X, lambda X: tl.eye(3, X.nvars))
    u = gp.jet_of_bisection(beta, [0.2, 0.1])
    assert np.array_equal(u.A, np.eye(2)) and not u.Xi.any() and np.array_equal(u.h, np.eye(3))


def test_exponential_bisection_jet():
    Xi0 = lie.random_algebra(SO3, 7)
    c = np.array([0.4])
    beta = gp.Bisection(lambda X: X + c, lambda X: tl.expm(tl.as_taylor(Xi0, 1) * X[0]))
    u = gp.jet_of_bisection(beta, [0.0])
    assert np.array_equal(u.A, [[1.0]]) and np.allclose(u.Xi[0], Xi0, atol=1e-15)
    assert np.array_equal(u.x_tgt, c)


def test_quadratic_bisection_second_jet_symmetric():
    beta = rg.random_bisection(np.random.default_rng(8), SO3, 2)
    u2 = gp.jet_of_bisection(beta, [0.1, 0.2], order=2)
    assert np.array_equal(u2.DA, u2.DA.transpose(0, 2, 1)) and u2.is_holonomous(1e-12)


def test_degenerate_bisection():
    beta = gp.Bisection(lambda X: X * X, lambda X: tl.eye(2, X.nvars))
    with pytest.raises(DegenerateBisection):
        gp.jet_of_bisection(beta, [0.0])


def test_unit_jet_acts_trivially():
    rng = np.random.default_rng(9)
    F = make_fiber("adjoint", SO3)
    ue = rg.random_je(rng, F, 2)
    out = gp.act_JG_on_JE(gp.unit_JG(ue.x, 2, 3), ue, F)
    assert _je_gap(out, ue) <= 1e-15
    u2e = rg.random_j2e(rng, F, 2, first=ue)
    unit2 = gp.SecondJetGroupoidElement(gp.unit_JG(ue.x, 2, 3), np.zeros((2, 2, 2)), np.zeros((2, 2, 3, 3)))
    out2 = gp.act_J2G_on_J2E(unit2, u2e, F)
    assert resid(out2.curl, u2e.curl) <= 1e-15 and _je_gap(out2.first, ue) <= 1e-15


def test_non_semiholonomous_rejected():
    rng = np.random.default_rng(10)
    F = make_fiber("linear", SO3)
    ue = rg.random_j2e(rng, F, 2)
    bad = gp.SecondJetOfSection(ue.first, ue.first.slope + 1.0, ue.curl)
    u2g = rg.random_j2g(rng, SO3, 2, x_src=ue.first.x)
    with pytest.raises(NotSemiholonomous):
        gp.act_J2G_on_J2E(u2g, bad, F)


@given(st.sampled_from([U1, SO3]), st.sampled_from([1, 2]), seeds)
def test_jet_groupoid_axioms(G, n, s):
    rng = np.random.default_rng(s)
    a = rg.random_jg(rng, G, n)
    b = rg.random_jg(rng, G, n, x_src=a.x_tgt)
    c = rg.random_jg(rng, G, n, x_src=b.x_tgt)
    assoc = _jg_gap(gp.compose_JG(gp.compose_JG(c, b), a), gp.compose_JG(c, gp.compose_JG(b, a)))
    assert assoc <= 1e-12
    left = gp.compose_JG(a, gp.invert_JG(a))
    assert _jg_gap(left, gp.unit_JG(a.x_tgt, n, G.m)) <= 1e-12
    assert resid(gp.pi_fr(gp.compose_JG(b, a)), b.A @ a.A) <= 1e-12


@given(cases, seeds)
def test_jet_of_product_bisection(case, s):
    G, _, n = case
    rng = np.random.default_rng(s)
    b1, b2 = rg.random_bisection(rng, G, n), rg.random_bisection(rng, G, n)
    x = rg.random_base_point(rng, n)
    u1 = gp.jet_of_bisection(b1, x)
    u2 = gp.jet_of_bisection(b2, u1.x_tgt)
    prod = gp.Bisection(lambda X: b2.psi(b1.psi(X)), lambda X: b2.hmap(b1.psi(X)) @ b1.hmap(X))
    assert _jg_gap(gp.compose_JG(u2, u1), gp.jet_of_bisection(prod, x)) <= 1e-10


@given(cases, seeds)
def test_first_order_characterization(case, s):
    G, kind, n = case
    rng = np.random.default_rng(s)
    F = make_fiber(kind, G)
    beta, phi = rg.random_bisection(rng, G, n), rg.random_section(rng, F, n)
    x = rg.random_base_point(rng, n)
    ug, ue = gp.jet_of_bisection(beta, x), gp.jet_of_section(phi, x)
    lhs = gp.act_JG_on_JE(ug, ue, F)
    assert _je_gap(lhs, gp.transformed_section_jet(beta, phi, F, x, order=1)) <= 1e-10
    assert resid(lhs.x, ug.x_tgt) == 0.0 and resid(lhs.e, F.act(ug.h, ue.e)) <= 1e-12


@given(cases, seeds)
def test_second_order_characterization(case, s):
    G, kind, n = case
    rng = np.random.default_rng(s)
    F = make_fiber(kind, G)
    beta, phi = rg.random_bisection(rng, G, n), rg.random_section(rng, F, n)
    x = rg.random_base_point(rng, n)
    u2g, u2e = gp.jet_of_bisection(beta, x, 2), gp.jet_of_section(phi, x, 2)
    lhs = gp.act_J2G_on_J2E(u2g, u2e, F)
    rhs = gp.transformed_section_jet(beta, phi, F, x, order=2)
    assert max(_je_gap(lhs.first, rhs.first), resid(lhs.curl, rhs.curl)) <= 1e-9
    assert lhs.is_holonomous(1e-9)


@given(st.sampled_from([U1, SO3]), st.sampled_from([1, 2, 3]), seeds)
def test_semiholonomy_preserved(G, n, s):
    rng = np.random.default_rng(s)
    F = make_fiber("linear", G)
    u2e = rg.random_j2e(rng, F, n)
    u2g = rg.random_j2g(rng, G, n, x_src=u2e.first.x)
    out = gp.act_J2G_on_J2E(u2g, u2e, F)
    assert out.is_semiholonomous(1e-12)
    # and the first-order part is the first-order action
    assert _je_gap(out.first, gp.act_JG_on_JE(u2g.first, u2e.first, F)) <= 1e-12
