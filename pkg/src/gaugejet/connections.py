"""Connections as sections of the connection bundle CP, minimal coupling and curvature.

A point of CP over x is stored as ``c`` of shape (n, m, m), ``c[mu]`` the
algebra element paired with ``e_mu``. Its canonical representative is the
jet ``w`` at ``p = (x, e)`` whose body-frame group slope is ``-c``; with that
choice ``c`` is the usual local gauge potential, gauge transformations act
by ``c -> h c h^-1 - dh h^-1`` and the covariant derivative reads
``d phi + c.phi`` on a linear fiber.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import taylor as tl
from .bundles import AssociatedPoint, FiberSpace
from .errors import BasePointMismatch, FirstJetMismatch, NotSemiholonomous
from .groupoids import (
    JetGroupoidElement,
    JetOfSection,
    PrincipalJet,
    PrincipalJet2,
    SecondJetGroupoidElement,
    SecondJetOfSection,
    _same_point,
    act_J2G_on_J2P,
    act_JG_on_JP,
    bilinear_pull,
    group_curve1,
    jet_of_section,
    precompose,
)
from .lie import Ad

ALTERNATOR_FACTOR = 0.5


@dataclass(frozen=True, eq=False)
class ConnectionForm:
    """Local connection x -> c(x), a Taylor-capable program returning (n, m, m)."""

    n: int
    m: int
    Amap: Callable

    def __call__(self, x) -> np.ndarray:
        return tl.as_taylor(self.Amap(tl.seed_coordinates(x)), self.n).value


@dataclass(frozen=True, eq=False)
class ConnectionJet:
    """Element of J(CP): ``A[mu]`` and ``DA[v, w] = d_v A_w`` (not symmetric in general)."""

    x: np.ndarray
    A: np.ndarray
    DA: np.ndarray


@dataclass(frozen=True, eq=False)
class VerticalValuedOneForm:
    x: np.ndarray
    e: np.ndarray
    values: np.ndarray  # (k, n)


@dataclass(frozen=True, eq=False)
class VerticalValuedTwoForm:
    x: np.ndarray
    e: np.ndarray
    values: np.ndarray  # (k, n, n), antisymmetric in the last two slots


@dataclass(frozen=True, eq=False)
class SecondDifference:
    x: np.ndarray
    e: np.ndarray
    bilinear: np.ndarray
    sym: np.ndarray
    antisym: np.ndarray


@dataclass(frozen=True, eq=False)
class CurvatureValue:
    """Curvature components ``F[mu, nu]`` (algebra elements) in the basis dx^mu ^ dx^nu."""

    x: np.ndarray
    F: np.ndarray  # (n, n, m, m)


# ---------------------------------------------------------------------------
# difference maps


def difference_first(u1: JetOfSection, u2: JetOfSection, tol: float = 1e-12) -> VerticalValuedOneForm:
    """u1 - u2 in L(T_x M, V_e E) for jets over the same point."""
    if not (_same_point(u1.x, u2.x, tol) and _same_point(u1.e, u2.e, tol)):
        raise BasePointMismatch("jets sit over different points")
    return VerticalValuedOneForm(u1.x, u1.e, u1.slope - u2.slope)


def difference_second(u1: SecondJetOfSection, u2: SecondJetOfSection,
                      tol: float = 1e-12) -> SecondDifference:
    """u1 - u2 for semiholonomous second jets with the same first jet."""
    for u in (u1, u2):
        if not u.is_semiholonomous(tol):
            raise NotSemiholonomous("difference is defined on semiholonomous jets")
    f1, f2 = u1.first, u2.first
    if not (_same_point(f1.x, f2.x, tol) and _same_point(f1.e, f2.e, tol)
            and _same_point(f1.slope, f2.slope, tol)):
        raise FirstJetMismatch("second jets project to different first jets")
    B = u1.curl - u2.curl
    Bt = B.transpose(0, 2, 1)
    return SecondDifference(f1.x, f1.e, B, 0.5 * (B + Bt), 0.5 * (B - Bt))


def holonomous_anchor(u: SecondJetOfSection) -> SecondJetOfSection:
    """A holonomous jet over the same first jet (symmetric part of the curl)."""
    return SecondJetOfSection(u.first, u.first.slope.copy(), 0.5 * (u.curl + u.curl.transpose(0, 2, 1)))


def alternator(u: SecondJetOfSection, anchor: SecondJetOfSection | None = None,
               factor: float = ALTERNATOR_FACTOR) -> VerticalValuedTwoForm:
    """Antisymmetric part of u - anchor for any holonomous anchor."""
    anchor = holonomous_anchor(u) if anchor is None else anchor
    if not anchor.is_holonomous(1e-12):
        raise NotSemiholonomous("anchor must be holonomous")
    B = difference_second(u, anchor).bilinear
    return VerticalValuedTwoForm(u.first.x, u.first.e, factor * (B - B.transpose(0, 2, 1)))


# ---------------------------------------------------------------------------
# CP <-> JP and J(CP) <-> semiholonomous second jets of P


def cp_lift(x, c) -> PrincipalJet:
    """Canonical representative at (x, e) of the CP point c."""
    c = np.asarray(c, dtype=float)
    return PrincipalJet(np.asarray(x, dtype=float), np.eye(c.shape[1]), -c)


def cp_lift_at(x, c, g0) -> PrincipalJet:
    """Representative at (x, g0): the canonical one translated by g0."""
    return PrincipalJet(np.asarray(x, dtype=float), np.asarray(g0, dtype=float),
                        -Ad(np.linalg.inv(g0), np.asarray(c, dtype=float)))


def cp_project(w: PrincipalJet) -> np.ndarray:
    """JP -> CP."""
    return -Ad(w.g, w.slope)


def jcp_lift(cj: ConnectionJet) -> PrincipalJet2:
    """The semiholonomous second jet of P at the canonical point matching cj."""
    A = cj.A
    br = np.einsum("vab,wbc->vwac", A, A) - np.einsum("wab,vbc->vwac", A, A)
    curl = -cj.DA - 0.5 * br
    first = cp_lift(cj.x, A)
    return PrincipalJet2(first, first.slope.copy(), curl)


def jcp_project(w2: PrincipalJet2) -> ConnectionJet:
    g, Y, Y2 = w2.first.g, w2.first.slope, w2.slope2
    br = np.einsum("vab,wbc->vwac", Y2, Y) - np.einsum("wab,vbc->vwac", Y, Y2)
    return ConnectionJet(w2.first.x, -Ad(g, Y), -Ad(g, w2.curl + 0.5 * br))


def connection_jet(form: ConnectionForm, x) -> ConnectionJet:
    x = np.asarray(x, dtype=float)
    T = tl.as_taylor(form.Amap(tl.seed_coordinates(x)), x.size)
    return ConnectionJet(x, T.value, np.moveaxis(T.grad, -1, 0))


# ---------------------------------------------------------------------------
# actions on CP and J(CP)


def act_JG_on_CP(u_g: JetGroupoidElement, c, g0=None) -> np.ndarray:
    """u_g . c through any representative (default the canonical one)."""
    w = cp_lift(u_g.x_src, c) if g0 is None else cp_lift_at(u_g.x_src, c, g0)
    return cp_project(act_JG_on_JP(u_g, w))


def act_J2G_on_JCP(u2g: SecondJetGroupoidElement, cj: ConnectionJet) -> ConnectionJet:
    return jcp_project(act_J2G_on_J2P(u2g, jcp_lift(cj)))


# ---------------------------------------------------------------------------
# associated connection and minimal coupling


def associated_connection(c, e: AssociatedPoint, fiber: FiberSpace) -> JetOfSection:
    """Horizontal jet of E at e induced by c: J rho_Q applied to (w_p, 0)."""
    w = cp_lift(e.x, c)
    n = w.slope.shape[0]
    G = fiber.program(group_curve1(w.g, w.slope, n), tl.as_taylor(fiber.check_point(e.qhat), n))
    return JetOfSection(np.asarray(e.x, dtype=float), G.value, G.grad)


def minimal_coupling(form: ConnectionForm, phi: Callable, x, fiber: FiberSpace) -> VerticalValuedOneForm:
    """D phi = j phi - Gamma(phi) at x."""
    u = jet_of_section(phi, x)
    gamma = associated_connection(form(x), AssociatedPoint(u.x, u.e), fiber)
    return difference_first(u, gamma)


def covariant_derivative_jet(c, u: JetOfSection, fiber: FiberSpace) -> VerticalValuedOneForm:
    """Minimal coupling evaluated on a bare jet and CP point."""
    return difference_first(u, associated_connection(c, AssociatedPoint(u.x, u.e), fiber))


def minimal_coupling_lifted(c, u: JetOfSection, fiber: FiberSpace, g0) -> np.ndarray:
    """(u_p - w_p, u_q) pushed through the vertical jet map at p = (x, g0).

    The section is lifted as x -> ((x, g0), g0^-1 . phi(x)); the result must
    not depend on g0.
    """
    g0 = np.asarray(g0, dtype=float)
    g0i = np.linalg.inv(g0)
    q = fiber.act(g0i, u.e)
    u_q = fiber.tangent_map(g0i, u.e) @ u.slope
    w = cp_lift_at(u.x, c, g0)
    Y = -w.slope  # u_p has zero group slope
    n = Y.shape[0]
    G = fiber.program(group_curve1(g0, Y, n),
                      tl.TaylorArray(q, u_q, np.zeros(u_q.shape + (n,))))
    return G.grad


def covariant_derivative_closed_form(form: ConnectionForm, phi: Callable, x, fiber: FiberSpace,
                                     sign: int) -> np.ndarray:
    """d phi - sign * (A_mu)_Q(phi), the textbook formula with a candidate sign."""
    from .bundles import fundamental_vf_Q

    u = jet_of_section(phi, x)
    A = form(x)
    corr = np.stack([fundamental_vf_Q(A[mu], u.e, fiber) for mu in range(A.shape[0])], axis=1)
    return u.slope - sign * corr


# ---------------------------------------------------------------------------
# curvature


def curvature_of_jet(cj: ConnectionJet, factor: float = ALTERNATOR_FACTOR) -> CurvatureValue:
    """Alternator of the second jet of P matching cj, pushed to the algebra.

    ``Alt`` is ``factor * (B - B^T)`` as a bilinear map; components in the
    dx^mu ^ dx^nu basis built with the same factor are ``Alt / factor``.
    """
    w2 = jcp_lift(cj)
    C = w2.curl
    alt = factor * (C - C.transpose(1, 0, 2, 3))
    return CurvatureValue(cj.x, Ad(w2.first.g, alt) / factor)


def curvature(form: ConnectionForm, x, factor: float = ALTERNATOR_FACTOR) -> CurvatureValue:
    return curvature_of_jet(connection_jet(form, x), factor)


def classical_curvature(form: ConnectionForm, x, sign: int = 1) -> np.ndarray:
    """sign * (d_mu A_nu - d_nu A_mu + [A_mu, A_nu]) straight from the Taylor data."""
    cj = connection_jet(form, x)
    A, dA = cj.A, cj.DA
    br = np.einsum("vab,wbc->vwac", A, A) - np.einsum("wab,vbc->vwac", A, A)
    return sign * (dA - dA.transpose(1, 0, 2, 3) + br)


def act_frame_on_curvature(A_fr, h, F: np.ndarray) -> np.ndarray:
    """(a, g) . F = Ad(g) F(a^-1 ., a^-1 .)."""
    return Ad(h, bilinear_pull(F, np.linalg.inv(A_fr)))


def act_frame_on_one_form(fiber: FiberSpace, A_fr, h, q, D: np.ndarray) -> np.ndarray:
    return fiber.tangent_map(h, q) @ D @ np.linalg.inv(A_fr)

