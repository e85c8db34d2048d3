"""First-order jet group G0^(1), the prolonged bundle P^(1) and the
isomorphism between its gauge groupoid and the jet groupoid of G."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import taylor as tl
from .bundles import AssociatedPoint, FiberSpace, fundamental_vf_Q
from .connections import cp_project
from .errors import ComposabilityError, GroupMismatch
from .groupoids import (
    JetGroupoidElement,
    JetOfSection,
    PrincipalJet,
    _same_point,
    apply_lin,
    group_curve1,
    precompose,
)
from .lie import Ad


@dataclass(frozen=True, eq=False)
class JetGroupElement:
    """(a0, g0; xi0) with a0 in GL(n), g0 in G0 and xi0 in L(R^n, g0)."""

    a0: np.ndarray
    g0: np.ndarray
    xi0: np.ndarray  # (n, m, m)


@dataclass(frozen=True, eq=False)
class ProlongedPoint:
    """(a_x, u_p): a frame at x and a jet of a section of P through p."""

    a_x: np.ndarray
    u_p: PrincipalJet

    @property
    def x(self):
        return self.u_p.x


@dataclass(frozen=True, eq=False)
class ProlongedGaugeGroupoidElement:
    """Class [P2, P1] normalized so P1 = (I, (x_src, e, 0))."""

    target: ProlongedPoint
    x_src: np.ndarray


@dataclass(frozen=True, eq=False)
class TangentValue:
    """Point (v, v_q) of R^n x TQ with v_q based at q."""

    v: np.ndarray
    q: np.ndarray
    vq: np.ndarray


@dataclass(frozen=True, eq=False)
class FiberJetValue:
    """Linear map R^n -> T_q Q (a jet or a linearized jet of the fiber)."""

    q: np.ndarray
    U: np.ndarray  # (k, n)


def _check(u: JetGroupElement, w: JetGroupElement):
    if u.a0.shape != w.a0.shape or u.g0.shape != w.g0.shape:
        raise GroupMismatch("jet group elements have different shapes")


def jetgroup_unit(n: int, m: int) -> JetGroupElement:
    return JetGroupElement(np.eye(n), np.eye(m), np.zeros((n, m, m)))


def jetgroup_mul(u1: JetGroupElement, u2: JetGroupElement) -> JetGroupElement:
    _check(u1, u2)
    xi = u1.xi0 + Ad(u1.g0, precompose(u2.xi0, np.linalg.inv(u1.a0)))
    return JetGroupElement(u1.a0 @ u2.a0, u1.g0 @ u2.g0, xi)


def jetgroup_inv(u: JetGroupElement) -> JetGroupElement:
    return JetGroupElement(np.linalg.inv(u.a0), np.linalg.inv(u.g0),
                           -Ad(np.linalg.inv(u.g0), precompose(u.xi0, u.a0)))


def right_action_P1(pp: ProlongedPoint, u: JetGroupElement) -> ProlongedPoint:
    """(a_x, u_p).(a0, g0; xi0) = (a_x a0, R_g0∘(u_p + (xi0∘a_x^-1)_P(p)))."""
    w = pp.u_p
    Y = w.slope + precompose(u.xi0, np.linalg.inv(pp.a_x))
    return ProlongedPoint(pp.a_x @ u.a0,
                          PrincipalJet(w.x, w.g @ u.g0, Ad(np.linalg.inv(u.g0), Y)))


# ---------------------------------------------------------------------------
# left actions on typical fibers


def _fund_cols(Xi: np.ndarray, q, fiber: FiberSpace) -> np.ndarray:
    return np.stack([fundamental_vf_Q(X, q, fiber) for X in Xi], axis=1)


def act_tangent(u: JetGroupElement, t: TangentValue, fiber: FiberSpace) -> TangentValue:
    v = u.a0 @ t.v
    gq = fiber.act(u.g0, t.q)
    vq = fiber.tangent_map(u.g0, t.q) @ t.vq - fundamental_vf_Q(apply_lin(u.xi0, v), gq, fiber)
    return TangentValue(v, gq, vq)


def act_jet(u: JetGroupElement, j: FiberJetValue, fiber: FiberSpace) -> FiberJetValue:
    gq = fiber.act(u.g0, j.q)
    U = fiber.tangent_map(u.g0, j.q) @ j.U @ np.linalg.inv(u.a0) - _fund_cols(u.xi0, gq, fiber)
    return FiberJetValue(gq, U)


def act_linjet(u: JetGroupElement, j: FiberJetValue, fiber: FiberSpace) -> FiberJetValue:
    return FiberJetValue(fiber.act(u.g0, j.q),
                         fiber.tangent_map(u.g0, j.q) @ j.U @ np.linalg.inv(u.a0))


def act_cp(u: JetGroupElement, A0: np.ndarray) -> np.ndarray:
    return Ad(u.g0, precompose(A0, np.linalg.inv(u.a0))) + u.xi0


# ---------------------------------------------------------------------------
# quotient isomorphisms P^(1) x_{G0^(1)} F -> bundle


def iso_tangent(pp: ProlongedPoint, t: TangentValue, fiber: FiberSpace):
    """((a_x, u_p), (v, v_q)) -> T rho_Q (u_p(a_x v), v_q).

    Returns the image point, the base component and the fiber component.
    """
    w = pp.u_p
    base = pp.a_x @ t.v
    Y = apply_lin(w.slope, base)[None]
    G = fiber.program(group_curve1(w.g, Y, 1),
                      tl.TaylorArray(t.q, t.vq[:, None], np.zeros((t.q.size, 1, 1))))
    return AssociatedPoint(w.x, G.value), base, G.grad[:, 0]


def iso_jet(pp: ProlongedPoint, j: FiberJetValue, fiber: FiberSpace) -> JetOfSection:
    """((a_x, u_p), u_q) -> J rho_Q (u_p, u_q∘a_x^-1)."""
    w = pp.u_p
    n = w.slope.shape[0]
    U = j.U @ np.linalg.inv(pp.a_x)
    G = fiber.program(group_curve1(w.g, w.slope, n),
                      tl.TaylorArray(j.q, U, np.zeros(U.shape + (n,))))
    return JetOfSection(w.x, G.value, G.grad)


def iso_linjet(pp: ProlongedPoint, j: FiberJetValue, fiber: FiberSpace):
    """Linearized jets: the vertical part of J rho_Q (0, u_q∘a_x^-1)."""
    w = pp.u_p
    n = w.slope.shape[0]
    U = j.U @ np.linalg.inv(pp.a_x)
    G = fiber.program(tl.as_taylor(w.g, n), tl.TaylorArray(j.q, U, np.zeros(U.shape + (n,))))
    return AssociatedPoint(w.x, G.value), G.grad


def iso_cp(pp: ProlongedPoint, A0: np.ndarray) -> np.ndarray:
    """((a_x, u_p), A0) -> u_p + (A0∘a_x^-1)_P(p), reported as a CP point."""
    w = pp.u_p
    return cp_project(PrincipalJet(w.x, w.g, w.slope + precompose(A0, np.linalg.inv(pp.a_x))))


def jet_preimage(pp: ProlongedPoint, u: JetOfSection, fiber: FiberSpace) -> FiberJetValue:
    """A fiber jet mapped to u by :func:`iso_jet` at pp."""
    w = pp.u_p
    gi = np.linalg.inv(w.g)
    q = fiber.act(gi, u.e)
    n = w.slope.shape[0]
    drift = fiber.program(group_curve1(w.g, w.slope, n), tl.as_taylor(q, n)).grad
    U = fiber.tangent_map(gi, u.e) @ (u.slope - drift) @ pp.a_x
    return FiberJetValue(q, U)


def cp_preimage(pp: ProlongedPoint, c: np.ndarray) -> np.ndarray:
    """The A0 mapped to c by :func:`iso_cp` at pp."""
    w = pp.u_p
    return precompose(-Ad(np.linalg.inv(w.g), c) - w.slope, pp.a_x)


# ---------------------------------------------------------------------------
# gauge groupoid of P^(1) and the jet groupoid


def canonical_point(x, n: int, m: int) -> ProlongedPoint:
    return ProlongedPoint(np.eye(n), PrincipalJet(np.asarray(x, dtype=float), np.eye(m),
                                                  np.zeros((n, m, m))))


def normalizer(pp: ProlongedPoint) -> JetGroupElement:
    """The jet group element taking pp to the canonical point over pp.x."""
    w = pp.u_p
    return JetGroupElement(np.linalg.inv(pp.a_x), np.linalg.inv(w.g),
                           -precompose(w.slope, pp.a_x))


def prolonged_class(pp2: ProlongedPoint, pp1: ProlongedPoint) -> ProlongedGaugeGroupoidElement:
    return ProlongedGaugeGroupoidElement(right_action_P1(pp2, normalizer(pp1)), pp1.x)


def prolonged_compose(c32: ProlongedGaugeGroupoidElement,
                      c21: ProlongedGaugeGroupoidElement) -> ProlongedGaugeGroupoidElement:
    if not _same_point(c32.x_src, c21.target.x):
        raise ComposabilityError("source of the left factor differs from target of the right")
    u = jetgroup_inv(normalizer(c21.target))
    return ProlongedGaugeGroupoidElement(right_action_P1(c32.target, u), c21.x_src)


def prolonged_invert(c: ProlongedGaugeGroupoidElement) -> ProlongedGaugeGroupoidElement:
    n, m = c.target.a_x.shape[0], c.target.u_p.g.shape[0]
    return prolonged_class(canonical_point(c.x_src, n, m), c.target)


def jggg_map(pp2: ProlongedPoint, pp1: ProlongedPoint) -> JetGroupoidElement:
    """[P2, P1] -> T rho_P∘(u_p2∘a_x2∘a_x1^-1, u_p1)."""
    n = pp1.a_x.shape[0]
    A = pp2.a_x @ np.linalg.inv(pp1.a_x)
    G2 = group_curve1(pp2.u_p.g, precompose(pp2.u_p.slope, A), n)
    G1 = group_curve1(pp1.u_p.g, pp1.u_p.slope, n)
    H = G2 @ tl.inv(G1)
    h = H.value
    Xi = np.einsum("ij,jkn->nik", np.linalg.inv(h), H.grad)
    return JetGroupoidElement(np.asarray(pp1.x, dtype=float), np.asarray(pp2.x, dtype=float), h, A, Xi)


def jggg_map_class(c: ProlongedGaugeGroupoidElement) -> JetGroupoidElement:
    n, m = c.target.a_x.shape[0], c.target.u_p.g.shape[0]
    return jggg_map(c.target, canonical_point(c.x_src, n, m))


def jggg_inverse(u: JetGroupoidElement) -> ProlongedGaugeGroupoidElement:
    Ainv = np.linalg.inv(u.A)
    target = ProlongedPoint(u.A.copy(), PrincipalJet(u.x_tgt, u.h, precompose(u.Xi, Ainv)))
    return ProlongedGaugeGroupoidElement(target, u.x_src)


def prolonged_distance(c1: ProlongedGaugeGroupoidElement, c2: ProlongedGaugeGroupoidElement) -> float:
    t1, t2 = c1.target, c2.target
    parts = [c1.x_src - c2.x_src, t1.a_x - t2.a_x, t1.u_p.x - t2.u_p.x,
             t1.u_p.g - t2.u_p.g, t1.u_p.slope - t2.u_p.slope]
    return float(max(np.max(np.abs(p), initial=0.0) for p in parts))
