"""Per-trial residual computations for each verification suite.

Every suite function takes ``(ctx, rng)`` and returns a mapping from check
name to the scaled residual ``max|lhs - rhs| / max(1, max|rhs|)`` of that
trial.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .. import connections as cn
from .. import groupoids as gp
from .. import prolongation as pr
from .. import randomgen as rg
from ..bundles import FiberSpace, PrincipalPoint, fundamental_vf_Q, make_fiber
from ..lie import MatrixGroup, make_group, random_element
from .config import Scenario
from .conventions import Conventions


def resid(lhs, rhs) -> float:
    lhs, rhs = np.asarray(lhs, dtype=float), np.asarray(rhs, dtype=float)
    scale = max(1.0, float(np.max(np.abs(rhs), initial=0.0)))
    return float(np.max(np.abs(lhs - rhs), initial=0.0)) / scale


def resid_many(*pairs) -> float:
    return max(resid(a, b) for a, b in pairs)


@dataclass
class Context:
    scenario: Scenario
    group: MatrixGroup
    fiber: FiberSpace
    conventions: Conventions | None = None

    @classmethod
    def build(cls, scn: Scenario, conv: Conventions | None = None) -> "Context":
        g = make_group(scn.group)
        return cls(scn, g, make_fiber(scn.fiber, g), conv)

    @property
    def n(self) -> int:
        return self.scenario.n


# ---------------------------------------------------------------------------
# helpers


def _gg(rng, ctx):
    return gp.GaugeGroupoidElement(rg.random_base_point(rng, ctx.n),
                                   random_element(ctx.group, rng), rg.random_base_point(rng, ctx.n))


def _jg_close(a: gp.JetGroupoidElement, b: gp.JetGroupoidElement) -> float:
    return resid_many((a.x_src, b.x_src), (a.x_tgt, b.x_tgt), (a.h, b.h), (a.A, b.A), (a.Xi, b.Xi))


def _jet_elem(rng, ctx) -> pr.JetGroupElement:
    return pr.JetGroupElement(rg.random_frame(rng, ctx.n), random_element(ctx.group, rng, 0.5),
                              rg.random_algebra_stack(rng, ctx.group, ctx.n))


def _jet_close(a: pr.JetGroupElement, b: pr.JetGroupElement) -> float:
    return resid_many((a.a0, b.a0), (a.g0, b.g0), (a.xi0, b.xi0))


def _pp(rng, ctx, x=None) -> pr.ProlongedPoint:
    x = rg.random_base_point(rng, ctx.n) if x is None else x
    return pr.ProlongedPoint(rg.random_frame(rng, ctx.n),
                             gp.PrincipalJet(x, random_element(ctx.group, rng, 0.5),
                                             rg.random_algebra_stack(rng, ctx.group, ctx.n)))


def _pp_close(a: pr.ProlongedPoint, b: pr.ProlongedPoint) -> float:
    return resid_many((a.a_x, b.a_x), (a.u_p.g, b.u_p.g), (a.u_p.slope, b.u_p.slope))


def _fiber_jet(rng, ctx) -> pr.FiberJetValue:
    u = rg.random_je(rng, ctx.fiber, ctx.n)
    return pr.FiberJetValue(u.e, u.slope)


def _chain_jg(rng, ctx, count):
    out = [rg.random_jg(rng, ctx.group, ctx.n)]
    for _ in range(count - 1):
        out.append(rg.random_jg(rng, ctx.group, ctx.n, x_src=out[-1].x_tgt))
    return out


# ---------------------------------------------------------------------------
# suites


def suite_axioms(ctx: Context, rng) -> dict:
    n, m, fb = ctx.n, ctx.group.m, ctx.fiber
    out = {}

    # gauge groupoid
    a = _gg(rng, ctx)
    b = gp.GaugeGroupoidElement(a.x_src, random_element(ctx.group, rng), rg.random_base_point(rng, n))
    c = gp.GaugeGroupoidElement(b.x_src, random_element(ctx.group, rng), rg.random_base_point(rng, n))
    l, r = gp.compose(gp.compose(a, b), c), gp.compose(a, gp.compose(b, c))
    ul = gp.compose(gp.unit(a.x_tgt, m), a)
    ur = gp.compose(a, gp.unit(a.x_src, m))
    ia = gp.compose(gp.invert(a), a)
    p = PrincipalPoint(b.x_src, random_element(ctx.group, rng))
    act2 = gp.act_on_P(a, gp.act_on_P(b, p))
    act1 = gp.act_on_P(gp.compose(a, b), p)
    g1, g2 = random_element(ctx.group, rng), random_element(ctx.group, rng)
    iso = gp.compose(gp.isotropy_embed(p, g1), gp.isotropy_embed(p, g2))
    out["groupoid"] = resid_many((l.h, r.h), (ul.h, a.h), (ur.h, a.h), (ia.h, np.eye(m)),
                                 (ia.x_tgt, a.x_src), (act2.g, act1.g), (act2.x, act1.x),
                                 (iso.h, gp.isotropy_embed(p, g1 @ g2).h))

    # jet groupoid
    u1, u2, u3 = _chain_jg(rng, ctx, 3)
    lhs = gp.compose_JG(gp.compose_JG(u3, u2), u1)
    rhs = gp.compose_JG(u3, gp.compose_JG(u2, u1))
    u21 = gp.compose_JG(u2, u1)
    unit_l = gp.compose_JG(gp.unit_JG(u1.x_tgt, n, m), u1)
    inv_l = gp.compose_JG(gp.invert_JG(u1), u1)
    out["jet_groupoid"] = max(_jg_close(lhs, rhs), _jg_close(unit_l, u1),
                              _jg_close(inv_l, gp.unit_JG(u1.x_src, n, m)))
    out["frame_functor"] = resid(gp.pi_fr(u21), gp.pi_fr(u2) @ gp.pi_fr(u1))

    # jet group G0^(1) and its right action on P^(1)
    j1, j2, j3 = (_jet_elem(rng, ctx) for _ in range(3))
    e = pr.jetgroup_unit(n, m)
    mul = pr.jetgroup_mul
    pp = _pp(rng, ctx)
    out["jet_group"] = max(
        _jet_close(mul(mul(j1, j2), j3), mul(j1, mul(j2, j3))),
        _jet_close(mul(e, j1), j1), _jet_close(mul(j1, e), j1),
        _jet_close(mul(pr.jetgroup_inv(j1), j1), e),
        _pp_close(pr.right_action_P1(pr.right_action_P1(pp, j1), j2),
                  pr.right_action_P1(pp, mul(j1, j2))),
        _pp_close(pr.right_action_P1(pp, e), pp))

    # four fiber actions: u.(w.val) = (uw).val
    j12 = mul(j1, j2)
    t = pr.TangentValue(rng.standard_normal(n), fb.random_point(rng, 0.5),
                        0.5 * rng.standard_normal(fb.dim))
    ta, tb = pr.act_tangent(j1, pr.act_tangent(j2, t, fb), fb), pr.act_tangent(j12, t, fb)
    fj = _fiber_jet(rng, ctx)
    ja, jb = pr.act_jet(j1, pr.act_jet(j2, fj, fb), fb), pr.act_jet(j12, fj, fb)
    la, lb = pr.act_linjet(j1, pr.act_linjet(j2, fj, fb), fb), pr.act_linjet(j12, fj, fb)
    A0 = rg.random_algebra_stack(rng, ctx.group, n)
    out["fiber_actions"] = resid_many((ta.v, tb.v), (ta.q, tb.q), (ta.vq, tb.vq), (ja.q, jb.q),
                                      (ja.U, jb.U), (la.U, lb.U),
                                      (pr.act_cp(j1, pr.act_cp(j2, A0)), pr.act_cp(j12, A0)),
                                      (pr.act_jet(e, fj, fb).U, fj.U))
    return out


def suite_prop21(ctx: Context, rng) -> dict:
    u_g = rg.random_jg(rng, ctx.group, ctx.n)
    u1 = rg.random_je(rng, ctx.fiber, ctx.n, x=u_g.x_src)
    u2 = rg.random_je(rng, ctx.fiber, ctx.n, x=u1.x, q=u1.e)
    lhs = (gp.act_JG_on_JE(u_g, u2, ctx.fiber).slope - gp.act_JG_on_JE(u_g, u1, ctx.fiber).slope)
    rhs = gp.linear_frame_action(ctx.fiber, u_g.A, u_g.h, u1.e, u2.slope - u1.slope)
    return {"difference": resid(lhs, rhs)}


def suite_prop22(ctx: Context, rng) -> dict:
    n, fb = ctx.n, ctx.fiber
    out = {}
    semi = rg.random_j2g(rng, ctx.group, n)
    base = rg.random_je(rng, fb, n, x=semi.first.x_src)
    v1 = rg.random_j2e(rng, fb, n, first=base)
    v2 = rg.random_j2e(rng, fb, n, first=base)
    a1, a2 = gp.act_J2G_on_J2E(semi, v1, fb), gp.act_J2G_on_J2E(semi, v2, fb)
    lhs = cn.difference_second(a2, a1).bilinear
    u = semi.first
    rhs = gp.bilinear_frame_action(fb, u.A, u.h, base.e, cn.difference_second(v2, v1).bilinear)
    out["difference"] = resid(lhs, rhs)
    out["semiholonomy"] = max(a1.semiholonomy_defect(), a2.semiholonomy_defect()) / max(
        1.0, np.abs(a1.first.slope).max())

    hol = rg.random_j2g(rng, ctx.group, n, holonomous=True)
    hbase = rg.random_je(rng, fb, n, x=hol.first.x_src)
    w = rg.random_j2e(rng, fb, n, first=hbase)
    wh = rg.random_j2e(rng, fb, n, first=hbase, holonomous=True)
    aw = gp.act_J2G_on_J2E(hol, w, fb)
    awh = gp.act_J2G_on_J2E(hol, wh, fb)
    lhs = cn.alternator(aw).values
    rhs = gp.bilinear_frame_action(fb, hol.first.A, hol.first.h, hbase.e, cn.alternator(w).values)
    # any holonomous anchor gives the same alternator
    anchored = cn.alternator(aw, anchor=awh).values
    out["alternator"] = max(resid(lhs, rhs), resid(anchored, rhs))
    out["holonomy"] = awh.holonomy_defect() / max(1.0, np.abs(awh.curl).max())

    beta = rg.random_bisection(rng, ctx.group, n, ctx.scenario.degrees.bisection)
    phi = rg.random_section(rng, fb, n, ctx.scenario.degrees.section)
    x = rg.random_base_point(rng, n)
    got = gp.act_J2G_on_J2E(gp.jet_of_bisection(beta, x, 2), gp.jet_of_section(phi, x, 2), fb)
    ref = gp.transformed_section_jet(beta, phi, fb, x)
    out["characterization"] = resid_many((got.first.e, ref.first.e), (got.first.slope, ref.first.slope),
                                         (got.slope2, ref.slope2), (got.curl, ref.curl))
    return out


def closed_form_D(c, u: gp.JetOfSection, fiber: FiberSpace, sign: int) -> np.ndarray:
    corr = np.stack([fundamental_vf_Q(c[mu], u.e, fiber) for mu in range(c.shape[0])], axis=1)
    return u.slope - sign * corr


def suite_thm41(ctx: Context, rng) -> dict:
    n, fb, G = ctx.n, ctx.fiber, ctx.group
    deg = ctx.scenario.degrees
    x = rg.random_base_point(rng, n)
    beta = rg.random_bisection(rng, G, n, deg.bisection)
    form = cn.ConnectionForm(n, G.m, rg.random_connection(rng, G, n, deg.connection))
    phi = rg.random_section(rng, fb, n, deg.section)
    u_g = gp.jet_of_bisection(beta, x, 1)
    u = gp.jet_of_section(phi, x)
    c = form(x)
    D = cn.minimal_coupling(form, phi, x, fb).values
    lhs = cn.covariant_derivative_jet(cn.act_JG_on_CP(u_g, c),
                                      gp.act_JG_on_JE(u_g, u, fb), fb).values
    rhs = cn.act_frame_on_one_form(fb, u_g.A, u_g.h, u.e, D)
    out = {"diagram": resid(lhs, rhs)}
    g0 = random_element(G, rng)
    out["representative"] = max(resid(cn.minimal_coupling_lifted(c, u, fb, g0), D),
                                resid(cn.act_JG_on_CP(u_g, c, g0), cn.act_JG_on_CP(u_g, c)))
    if ctx.conventions is not None:
        out["closed_form"] = resid(D, closed_form_D(c, u, fb, ctx.conventions.covariant_derivative_sign))
    return out


def suite_thm42(ctx: Context, rng) -> dict:
    n, G = ctx.n, ctx.group
    deg = ctx.scenario.degrees
    x = rg.random_base_point(rng, n)
    u2g = gp.jet_of_bisection(rg.random_bisection(rng, G, n, deg.bisection), x, 2)
    form = cn.ConnectionForm(n, G.m, rg.random_connection(rng, G, n, deg.connection))
    cj = cn.connection_jet(form, x)
    # a generic J(CP) element too: DA need not come from a form
    cj_free = cn.ConnectionJet(x, cj.A, cj.DA + np.stack(
        [rg.random_algebra_stack(rng, G, n) for _ in range(n)]))
    out = {}
    worst = 0.0
    for j in (cj, cj_free):
        lhs = cn.curvature_of_jet(cn.act_J2G_on_JCP(u2g, j)).F
        rhs = cn.act_frame_on_curvature(u2g.first.A, u2g.first.h, cn.curvature_of_jet(j).F)
        worst = max(worst, resid(lhs, rhs))
    out["diagram"] = worst
    back = cn.act_J2G_on_JCP(u2g, cj)
    out["projection"] = resid(back.A, cn.act_JG_on_CP(u2g.first, cj.A))
    if ctx.conventions is not None:
        out["closed_form"] = resid(cn.curvature_of_jet(cj).F,
                                   classical_curvature_jet(cj, ctx.conventions.curvature_sign))
    return out


def classical_curvature_jet(cj: cn.ConnectionJet, sign: int, bracket_sign: int = 1) -> np.ndarray:
    A, dA = cj.A, cj.DA
    br = np.einsum("vab,wbc->vwac", A, A) - np.einsum("wab,vbc->vwac", A, A)
    return sign * (dA - dA.transpose(1, 0, 2, 3) + bracket_sign * br)


def pure_gauge_jet(u2g: gp.SecondJetGroupoidElement) -> cn.ConnectionJet:
    """Jet of A = g^-1 dg from the second jet of the gauge map g."""
    Xi = u2g.first.Xi
    br = np.einsum("vab,wbc->vwac", Xi, Xi) - np.einsum("wab,vbc->vwac", Xi, Xi)
    return cn.ConnectionJet(u2g.first.x_src, Xi, u2g.DXi - 0.5 * br)


def _gauge_map(rng, ctx):
    beta = rg.random_bisection(rng, ctx.group, ctx.n, ctx.scenario.degrees.bisection)
    return gp.Bisection(lambda X: X, beta.hmap)


def suite_curvature_oracle(ctx: Context, rng) -> dict:
    n, G = ctx.n, ctx.group
    s = ctx.conventions.curvature_sign
    x = rg.random_base_point(rng, n)
    out = {}
    form = cn.ConnectionForm(n, G.m, rg.random_connection(rng, G, n, ctx.scenario.degrees.connection))
    cj = cn.connection_jet(form, x)
    out["random"] = resid(cn.curvature_of_jet(cj).F, classical_curvature_jet(cj, s))
    A0 = rg.random_algebra_stack(rng, G, n)
    const = cn.ConnectionForm(n, G.m, lambda X: A0 + 0.0 * X[0])
    br = np.einsum("vab,wbc->vwac", A0, A0) - np.einsum("wab,vbc->vwac", A0, A0)
    out["constant"] = resid(cn.curvature(const, x).F, s * br)
    if n >= 2:
        X0 = G.basis[-1]

        def lin(X):
            zero = 0.0 * X[0]
            cols = [zero * X0 for _ in range(n)]
            cols[1] = X[0] * X0
            return _stack_forms(cols)

        F = cn.curvature(cn.ConnectionForm(n, G.m, lin), x).F
        expected = np.zeros_like(F)
        expected[0, 1], expected[1, 0] = s * X0, -s * X0
        out["linear_example"] = resid(F, expected)
    pg = pure_gauge_jet(gp.jet_of_bisection(_gauge_map(rng, ctx), x, 2))
    out["pure_gauge"] = resid(cn.curvature_of_jet(pg).F, 0.0)
    return out


def _stack_forms(cols):
    from ..taylor import stack

    return stack(cols)


def suite_appendix(ctx: Context, rng) -> dict:
    n, m, fb = ctx.n, ctx.group.m, ctx.fiber
    pp1, pp2, pp3 = _pp(rng, ctx), _pp(rng, ctx), _pp(rng, ctx)
    u = _jet_elem(rng, ctx)
    ui = pr.jetgroup_inv(u)
    out = {}
    j = pr.jggg_map(pp2, pp1)
    j_moved = pr.jggg_map(pr.right_action_P1(pp2, u), pr.right_action_P1(pp1, u))
    fj = _fiber_jet(rng, ctx)
    moved = pr.right_action_P1(pp1, u)
    t = pr.TangentValue(rng.standard_normal(n), fj.q, fj.U[:, 0])
    ta, tb = pr.iso_tangent(pp1, t, fb), pr.iso_tangent(moved, pr.act_tangent(ui, t, fb), fb)
    ja, jb = pr.iso_jet(pp1, fj, fb), pr.iso_jet(moved, pr.act_jet(ui, fj, fb), fb)
    la, lb = pr.iso_linjet(pp1, fj, fb), pr.iso_linjet(moved, pr.act_linjet(ui, fj, fb), fb)
    A0 = rg.random_algebra_stack(rng, ctx.group, n)
    out["invariance"] = max(
        _jg_close(j, j_moved),
        resid_many((ta[0].qhat, tb[0].qhat), (ta[1], tb[1]), (ta[2], tb[2]),
                   (ja.e, jb.e), (ja.slope, jb.slope), (la[1], lb[1]),
                   (pr.iso_cp(pp1, A0), pr.iso_cp(moved, pr.act_cp(ui, A0)))))

    # round trips in both directions, plus onto-ness of the quotient maps
    ug = rg.random_jg(rng, ctx.group, n)
    cls = pr.prolonged_class(pp2, pp1)
    ue = rg.random_je(rng, fb, n, x=pp1.x, q=fb.random_point(rng, 0.5))
    c = rg.random_algebra_stack(rng, ctx.group, n)
    out["roundtrip"] = max(
        _jg_close(pr.jggg_map_class(pr.jggg_inverse(ug)), ug),
        pr.prolonged_distance(pr.jggg_inverse(pr.jggg_map_class(cls)), cls),
        _jg_close(pr.jggg_map_class(cls), j),
        resid(pr.iso_jet(pp1, pr.jet_preimage(pp1, ue, fb), fb).slope, ue.slope),
        resid(pr.iso_cp(pp1, pr.cp_preimage(pp1, c)), c))

    c21, c32 = pr.prolonged_class(pp2, pp1), pr.prolonged_class(pp3, pp2)
    m1 = pr.jggg_map_class(pr.prolonged_compose(c32, c21))
    m2 = gp.compose_JG(pr.jggg_map_class(c32), pr.jggg_map_class(c21))
    inv1 = pr.jggg_map_class(pr.prolonged_invert(c21))
    inv2 = gp.invert_JG(pr.jggg_map_class(c21))
    u1, u2 = _chain_jg(rng, ctx, 2)
    back = pr.prolonged_compose(pr.jggg_inverse(u2), pr.jggg_inverse(u1))
    out["morphism"] = max(_jg_close(m1, m2), _jg_close(inv1, inv2),
                          pr.prolonged_distance(back, pr.jggg_inverse(gp.compose_JG(u2, u1))))
    return out


def suite_pin_conventions(ctx: Context, rng) -> dict:
    """Residual of every candidate sign; the runner picks the unique winner."""
    n, G, fb = ctx.n, ctx.group, ctx.fiber
    x = rg.random_base_point(rng, n)
    u2g = gp.jet_of_bisection(rg.random_bisection(rng, G, n), x, 2)
    u_g = u2g.first
    form = cn.ConnectionForm(n, G.m, rg.random_connection(rng, G, n))
    c = form(x)
    u = gp.jet_of_section(rg.random_section(rng, fb, n), x)
    c2, u2 = cn.act_JG_on_CP(u_g, c), gp.act_JG_on_JE(u_g, u, fb)
    out = {}
    for s in (1, -1):
        lhs = closed_form_D(c2, u2, fb, s)
        rhs = cn.act_frame_on_one_form(fb, u_g.A, u_g.h, u.e, closed_form_D(c, u, fb, s))
        out[f"covariant_derivative_sign={s:+d}"] = resid(lhs, rhs)
    cj = cn.connection_jet(form, x)
    cj2 = cn.act_J2G_on_JCP(u2g, cj)
    for k in (1, -1):
        lhs = classical_curvature_jet(cj2, 1, k)
        rhs = cn.act_frame_on_curvature(u_g.A, u_g.h, classical_curvature_jet(cj, 1, k))
        out[f"bracket_sign={k:+d}"] = resid(lhs, rhs)
    F = cn.curvature_of_jet(cj).F
    for s in (1, -1):
        out[f"curvature_sign={s:+d}"] = resid(F, classical_curvature_jet(cj, s))
    return out


SUITE_FUNCS = {
    "axioms": suite_axioms,
    "prop21": suite_prop21,
    "prop22": suite_prop22,
    "thm41": suite_thm41,
    "thm42": suite_thm42,
    "appendix": suite_appendix,
    "curvature_oracle": suite_curvature_oracle,
    "pin_conventions": suite_pin_conventions,
}
