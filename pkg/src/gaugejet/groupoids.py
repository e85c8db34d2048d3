"""Gauge groupoid, its first and second jet groupoids, and their actions.

Conventions used throughout:

* An element of the gauge groupoid is stored canonically as
  ``(x_tgt, h, x_src)``, the class of ``[(x_tgt, h), (x_src, e)]``.
* A first jet of a bisection at ``x_src`` is ``(A, Xi)`` with ``A`` the base
  Jacobian and ``Xi[j] = h^-1 dh(e_j)`` the body-frame derivative of the
  group part.
* Second-order group data use exponential coordinates: the group part near
  the source looks like ``h exp(Xi y + DXi(y, y)/2)``. In these coordinates
  a holonomous jet has symmetric ``DXi``.
* Bilinear blocks are indexed ``[..., v, w]`` with ``v`` the outer
  (second) derivative direction, so ``DA[i, v, w] = d_v (A w)_i``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import taylor as tl
from .bundles import AssociatedPoint, FiberSpace, PrincipalPoint
from .errors import (
    BasePointMismatch,
    ComposabilityError,
    DegenerateBisection,
    DimensionMismatch,
    NotSemiholonomous,
)
from .lie import Ad

TOL_POINT = 1e-12


def _same_point(a, b, tol=TOL_POINT) -> bool:
    a, b = np.asarray(a, dtype=float), np.asarray(b, dtype=float)
    return a.shape == b.shape and np.max(np.abs(a - b), initial=0.0) <= tol * max(1.0, np.abs(a).max(initial=0.0))


def apply_lin(Xi: np.ndarray, v) -> np.ndarray:
    """Evaluate a stacked linear map (columns along axis 0) on a vector."""
    return np.tensordot(np.asarray(v, dtype=float), Xi, axes=(0, 0))


def precompose(Xi: np.ndarray, a: np.ndarray) -> np.ndarray:
    """Columns of Xi∘a for a stacked linear map Xi and a matrix a."""
    return np.tensordot(a, Xi, axes=(0, 0))


def bilinear_pull(B: np.ndarray, a: np.ndarray) -> np.ndarray:
    """B(a., a.) for a bilinear block indexed [v, w, ...]."""
    return np.tensordot(a.T, np.tensordot(a.T, B, axes=(1, 1)), axes=(1, 1))


# ---------------------------------------------------------------------------
# gauge groupoid


@dataclass(frozen=True, eq=False)
class GaugeGroupoidElement:
    x_tgt: np.ndarray
    h: np.ndarray
    x_src: np.ndarray

    @classmethod
    def from_pair(cls, p2: PrincipalPoint, p1: PrincipalPoint) -> "GaugeGroupoidElement":
        """The class [p2, p1]."""
        return cls(np.asarray(p2.x, dtype=float), p2.g @ np.linalg.inv(p1.g),
                   np.asarray(p1.x, dtype=float))


def compose(a: GaugeGroupoidElement, b: GaugeGroupoidElement) -> GaugeGroupoidElement:
    if not _same_point(a.x_src, b.x_tgt):
        raise ComposabilityError("source of the left factor differs from target of the right")
    return GaugeGroupoidElement(a.x_tgt, a.h @ b.h, b.x_src)


def unit(x, m: int) -> GaugeGroupoidElement:
    x = np.asarray(x, dtype=float)
    return GaugeGroupoidElement(x, np.eye(m), x)


def invert(a: GaugeGroupoidElement) -> GaugeGroupoidElement:
    return GaugeGroupoidElement(a.x_src, np.linalg.inv(a.h), a.x_tgt)


def act_on_P(a: GaugeGroupoidElement, p: PrincipalPoint) -> PrincipalPoint:
    if not _same_point(a.x_src, p.x):
        raise ComposabilityError("point does not lie over the source")
    return PrincipalPoint(a.x_tgt, a.h @ p.g)


def act_on_assoc(a: GaugeGroupoidElement, e: AssociatedPoint, fiber: FiberSpace) -> AssociatedPoint:
    if not _same_point(a.x_src, e.x):
        raise ComposabilityError("point does not lie over the source")
    return AssociatedPoint(a.x_tgt, fiber.act(a.h, e.qhat))


def isotropy_embed(p: PrincipalPoint, g0) -> GaugeGroupoidElement:
    """[p, g0] -> [p, p.g0], an element of the isotropy group at p.x."""
    return GaugeGroupoidElement.from_pair(PrincipalPoint(p.x, p.g @ g0), p)


# ---------------------------------------------------------------------------
# bisections and their jets


@dataclass(frozen=True, eq=False)
class Bisection:
    """Local bisection x -> (psi(x), hmap(x), x) given by Taylor-capable programs."""

    psi: Callable
    hmap: Callable
    eps_det: float = 1e-10

    def at(self, x) -> GaugeGroupoidElement:
        X = tl.seed_coordinates(x)
        return GaugeGroupoidElement(self.psi(X).value, self.hmap(X).value, np.asarray(x, dtype=float))


@dataclass(frozen=True, eq=False)
class JetGroupoidElement:
    x_src: np.ndarray
    x_tgt: np.ndarray
    h: np.ndarray
    A: np.ndarray
    Xi: np.ndarray  # (n, m, m)

    @property
    def n(self) -> int:
        return self.A.shape[0]

    @property
    def base(self) -> GaugeGroupoidElement:
        return GaugeGroupoidElement(self.x_tgt, self.h, self.x_src)


@dataclass(frozen=True, eq=False)
class SecondJetGroupoidElement:
    """Element of J(JG) over ``first``.

    ``outer_A``/``outer_Xi`` are the derivatives of the base point and group
    part along the outer direction; they equal the first-order data exactly
    when the element is semiholonomous.
    """

    first: JetGroupoidElement
    DA: np.ndarray   # (n, n, n) indexed [i, v, w]
    DXi: np.ndarray  # (n, n, m, m)
    outer_A: np.ndarray | None = None
    outer_Xi: np.ndarray | None = None

    def _outer(self):
        oA = self.first.A if self.outer_A is None else self.outer_A
        oX = self.first.Xi if self.outer_Xi is None else self.outer_Xi
        return oA, oX

    def semiholonomy_defect(self) -> float:
        oA, oX = self._outer()
        return float(max(np.max(np.abs(oA - self.first.A)), np.max(np.abs(oX - self.first.Xi), initial=0.0)))

    def holonomy_defect(self) -> float:
        sym_A = np.max(np.abs(self.DA - self.DA.transpose(0, 2, 1)), initial=0.0)
        sym_X = np.max(np.abs(self.DXi - self.DXi.transpose(1, 0, 2, 3)), initial=0.0)
        return float(max(self.semiholonomy_defect(), sym_A, sym_X))

    def is_semiholonomous(self, tol: float = 1e-12) -> bool:
        return self.semiholonomy_defect() <= tol

    def is_holonomous(self, tol: float = 1e-12) -> bool:
        return self.holonomy_defect() <= tol


def jet_of_bisection(beta: Bisection, x, order: int = 1):
    """First or second jet of a bisection at x, by Taylor evaluation."""
    if order not in (1, 2):
        raise ValueError("order must be 1 or 2")
    x = np.asarray(x, dtype=float)
    X = tl.seed_coordinates(x)
    Psi = tl.as_taylor(beta.psi(X), x.size)
    H = tl.as_taylor(beta.hmap(X), x.size)
    A = Psi.grad
    if abs(np.linalg.det(A)) < beta.eps_det:
        raise DegenerateBisection("base map of the bisection is not a local diffeomorphism")
    h = H.value
    hinv = np.linalg.inv(h)
    Xi = np.einsum("ij,jkn->nik", hinv, H.grad)
    first = JetGroupoidElement(x, Psi.value, h, A, Xi)
    if order == 1:
        return first
    D2 = np.einsum("ij,jkvw->vwik", hinv, H.hess)
    sym = np.einsum("vij,wjk->vwik", Xi, Xi)
    DXi = D2 - 0.5 * (sym + sym.transpose(1, 0, 2, 3))
    return SecondJetGroupoidElement(first, Psi.hess.copy(), DXi)


def pi_fr(u: JetGroupoidElement) -> np.ndarray:
    return u.A


def _affine_bisection(u: JetGroupoidElement) -> Bisection:
    """A bisection whose first jet at u.x_src is u."""
    n, m = u.n, u.h.shape[0]

    def psi(Z):
        return u.x_tgt + u.A @ (Z - u.x_src)

    def hmap(Z):
        D = Z - u.x_src
        lin = tl.TaylorArray(np.einsum("j,jab->ab", D.value, u.Xi),
                             np.einsum("jp,jab->abp", D.grad, u.Xi),
                             np.einsum("jpq,jab->abpq", D.hess, u.Xi))
        return u.h @ tl.expm(lin)

    return Bisection(psi, hmap)


def compose_JG(u2: JetGroupoidElement, u1: JetGroupoidElement) -> JetGroupoidElement:
    """Product of jets, taken as the jet of the product of local bisections."""
    if not _same_point(u2.x_src, u1.x_tgt):
        raise ComposabilityError("source of the left jet differs from target of the right")
    b2, b1 = _affine_bisection(u2), _affine_bisection(u1)

    def psi(X):
        return b2.psi(b1.psi(X))

    def hmap(X):
        return b2.hmap(b1.psi(X)) @ b1.hmap(X)

    return jet_of_bisection(Bisection(psi, hmap), u1.x_src, order=1)


def unit_JG(x, n: int, m: int) -> JetGroupoidElement:
    x = np.asarray(x, dtype=float)
    return JetGroupoidElement(x, x, np.eye(m), np.eye(n), np.zeros((n, m, m)))


def invert_JG(u: JetGroupoidElement) -> JetGroupoidElement:
    Ainv = np.linalg.inv(u.A)
    Xi = -Ad(u.h, precompose(u.Xi, Ainv))
    return JetGroupoidElement(u.x_tgt, u.x_src, np.linalg.inv(u.h), Ainv, Xi)


# ---------------------------------------------------------------------------
# jets of sections of an associated bundle (chart coordinates on the fiber)


@dataclass(frozen=True, eq=False)
class JetOfSection:
    x: np.ndarray
    e: np.ndarray      # fiber point qhat
    slope: np.ndarray  # (k, n)


@dataclass(frozen=True, eq=False)
class SecondJetOfSection:
    """Element of J(JE): ``slope2`` is the outer derivative of the point and
    ``curl[:, v, w] = d_v (slope w)``."""

    first: JetOfSection
    slope2: np.ndarray
    curl: np.ndarray

    def semiholonomy_defect(self) -> float:
        return float(np.max(np.abs(self.slope2 - self.first.slope), initial=0.0))

    def holonomy_defect(self) -> float:
        asym = np.max(np.abs(self.curl - self.curl.transpose(0, 2, 1)), initial=0.0)
        return float(max(self.semiholonomy_defect(), asym))

    def is_semiholonomous(self, tol: float = 1e-12) -> bool:
        return self.semiholonomy_defect() <= tol

    def is_holonomous(self, tol: float = 1e-12) -> bool:
        return self.holonomy_defect() <= tol


def jet_of_section(phi: Callable, x, order: int = 1):
    x = np.asarray(x, dtype=float)
    F = tl.as_taylor(phi(tl.seed_coordinates(x)), x.size).reshape(-1)
    first = JetOfSection(x, F.value, F.grad)
    if order == 1:
        return first
    return SecondJetOfSection(first, F.grad.copy(), F.hess.copy())


def _lin_taylor(X: np.ndarray, nvars: int, offset: int) -> tl.TaylorArray:
    """Taylor array of sum_j s_j X[j], s = variables offset..offset+n-1."""
    n = X.shape[0]
    shape = X.shape[1:]
    grad = np.zeros(shape + (nvars,))
    grad[..., offset:offset + n] = np.moveaxis(X, 0, -1)
    return tl.TaylorArray(np.zeros(shape), grad, np.zeros(shape + (nvars, nvars)))


def _bilin_taylor(B: np.ndarray, n: int) -> tl.TaylorArray:
    """Taylor array of sum_{v,w} y_v z_w B[v, w] in variables (y, z)."""
    shape = B.shape[2:]
    N = 2 * n
    hess = np.zeros(shape + (N, N))
    blk = np.moveaxis(np.moveaxis(B, 0, -1), 0, -1)  # shape + (v, w)
    hess[..., :n, n:] = blk
    hess[..., n:, :n] = np.swapaxes(blk, -1, -2)
    return tl.TaylorArray(np.zeros(shape), np.zeros(shape + (N,)), hess)


def group_curve1(g, Y, n: int) -> tl.TaylorArray:
    """z -> g exp(Y z) as a jet in n variables."""
    return tl.as_taylor(g, n) @ tl.expm(_lin_taylor(Y, n, 0))


def group_curve2(g, Y2, Y, C) -> tl.TaylorArray:
    """(y, z) -> g exp(Y2 y) exp(Y z + C(y, z) - [Y2 y, Y z]/2), in 2n variables.

    Only the constant, linear and mixed y-z terms are meaningful.
    """
    n = Y.shape[0]
    br = np.einsum("vab,wbc->vwac", Y2, Y)
    br = br - np.einsum("wab,vbc->vwac", Y, Y2)
    outer = tl.expm(_lin_taylor(Y2, 2 * n, 0))
    inner = tl.expm(_lin_taylor(Y, 2 * n, n) + _bilin_taylor(C - 0.5 * br, n))
    return tl.as_taylor(g, 2 * n) @ outer @ inner


def read_group_curve2(G: tl.TaylorArray, n: int):
    """Inverse of :func:`group_curve2`: returns (g, Y2, Y, C)."""
    g = G.value
    gi = np.linalg.inv(g)
    Y2 = np.einsum("ij,jkv->vik", gi, G.grad[..., :n])
    Y = np.einsum("ij,jkw->wik", gi, G.grad[..., n:])
    M = np.einsum("ij,jkvw->vwik", gi, G.hess[..., :n, n:])
    sym = np.einsum("vij,wjk->vwik", Y2, Y) + np.einsum("wij,vjk->vwik", Y, Y2)
    return g, Y2, Y, M - 0.5 * sym


def _section_curve2(u: SecondJetOfSection) -> tl.TaylorArray:
    n = u.first.slope.shape[1]
    k = u.first.e.size
    grad = np.concatenate([u.slope2, u.first.slope], axis=1)
    hess = np.zeros((k, 2 * n, 2 * n))
    hess[:, :n, n:] = u.curl
    hess[:, n:, :n] = u.curl.transpose(0, 2, 1)
    return tl.TaylorArray(u.first.e, grad, hess)


def act_JG_on_JE(u_g: JetGroupoidElement, u_e: JetOfSection, fiber: FiberSpace) -> JetOfSection:
    """u_g.u_e = TPhi_E∘(u_g, u_e)∘pi_fr(u_g)^-1, by the chain rule through the action."""
    if not _same_point(u_g.x_src, u_e.x):
        raise ComposabilityError("jet does not sit over the source of the groupoid jet")
    n = u_g.n
    H = group_curve1(u_g.h, u_g.Xi, n)
    Q = tl.TaylorArray(u_e.e, u_e.slope, np.zeros(u_e.slope.shape + (n,)))
    G = fiber.program(H, Q)
    return JetOfSection(u_g.x_tgt, G.value, G.grad @ np.linalg.inv(u_g.A))


def _frame_change_2(Gyz, slope_src, A, DA):
    """Curl in target coordinates from source-coordinate mixed derivatives."""
    Ainv = np.linalg.inv(A)
    slope_tgt = np.tensordot(slope_src, Ainv, axes=(1, 0))
    T = np.einsum("ivw,va,wb->iab", DA, Ainv, Ainv)
    mixed = np.einsum("...vw,va,wb->...ab", Gyz, Ainv, Ainv)
    return slope_tgt, mixed - np.einsum("...i,iab->...ab", slope_tgt, T)


def act_J2G_on_J2E(u2g: SecondJetGroupoidElement, u2e: SecondJetOfSection,
                   fiber: FiberSpace, tol: float = 1e-12) -> SecondJetOfSection:
    """Action of semiholonomous second jets of G on semiholonomous second jets of E."""
    if not u2g.is_semiholonomous(tol):
        raise NotSemiholonomous("groupoid jet is not semiholonomous")
    if not u2e.is_semiholonomous(tol):
        raise NotSemiholonomous("section jet is not semiholonomous")
    u = u2g.first
    if not _same_point(u.x_src, u2e.first.x):
        raise ComposabilityError("jet does not sit over the source of the groupoid jet")
    n = u.n
    H = group_curve2(u.h, u.Xi, u.Xi, u2g.DXi)
    G = fiber.program(H, _section_curve2(u2e))
    Ainv = np.linalg.inv(u.A)
    slope = G.grad[:, n:] @ Ainv
    slope2 = G.grad[:, :n] @ Ainv
    _, curl = _frame_change_2(G.hess[:, :n, n:], G.grad[:, n:], u.A, u2g.DA)
    return SecondJetOfSection(JetOfSection(u.x_tgt, G.value, slope), slope2, curl)


def linear_frame_action(fiber: FiberSpace, A, h, q, U: np.ndarray) -> np.ndarray:
    """(a, g).U = T L_g ∘ U ∘ a^-1 for U in L(R^n, T_q Q)."""
    return fiber.tangent_map(h, q) @ U @ np.linalg.inv(A)


def bilinear_frame_action(fiber: FiberSpace, A, h, q, B: np.ndarray) -> np.ndarray:
    """(a, g).B = T L_g ∘ B(a^-1 ., a^-1 .) for B[:, v, w]."""
    Ainv = np.linalg.inv(A)
    return np.einsum("ij,jvw,va,wb->iab", fiber.tangent_map(h, q), B, Ainv, Ainv)


def transformed_section_jet(beta: Bisection, phi: Callable, fiber: FiberSpace, x, order: int = 2):
    """Jet at psi(x) of the section Phi_E∘(beta, phi)∘psi^-1.

    Computed by composing the jet of x -> h(x).phi(x) with the inverse jet of
    psi; this path avoids the groupoid-jet action entirely.
    """
    x = np.asarray(x, dtype=float)

    def F(X):
        return fiber.program(tl.as_taylor(beta.hmap(X), x.size), tl.as_taylor(phi(X), x.size))

    jF = tl.Jet2.of(F, x)
    jpsi = tl.Jet2.of(beta.psi, x)
    jinv = tl.inverse_jet2(tl.Jet2(x, jpsi.first, jpsi.second))
    out = tl.compose_jet2(jF, jinv)
    first = JetOfSection(jpsi.value, out.value, out.first)
    if order == 1:
        return first
    return SecondJetOfSection(first, out.first.copy(), out.second)


# ---------------------------------------------------------------------------
# jets of sections of P itself (body-frame slopes, exponential coordinates)


@dataclass(frozen=True, eq=False)
class PrincipalJet:
    """Jet of a section of P at x through (x, g): v -> (v, g slope(v))."""

    x: np.ndarray
    g: np.ndarray
    slope: np.ndarray  # (n, m, m)


@dataclass(frozen=True, eq=False)
class PrincipalJet2:
    """Element of J(JP) in exponential coordinates (see module docstring)."""

    first: PrincipalJet
    slope2: np.ndarray
    curl: np.ndarray  # (n, n, m, m)

    def semiholonomy_defect(self) -> float:
        return float(np.max(np.abs(self.slope2 - self.first.slope), initial=0.0))

    def holonomy_defect(self) -> float:
        asym = np.max(np.abs(self.curl - self.curl.transpose(1, 0, 2, 3)), initial=0.0)
        return float(max(self.semiholonomy_defect(), asym))


def act_JG_on_JP(u_g: JetGroupoidElement, w: PrincipalJet) -> PrincipalJet:
    if not _same_point(u_g.x_src, w.x):
        raise ComposabilityError("jet does not sit over the source of the groupoid jet")
    n = u_g.n
    G = group_curve1(u_g.h, u_g.Xi, n) @ group_curve1(w.g, w.slope, n)
    g = G.value
    Y = np.einsum("ij,jkw->wik", np.linalg.inv(g), G.grad)
    return PrincipalJet(u_g.x_tgt, g, precompose(Y, np.linalg.inv(u_g.A)))


def act_J2G_on_J2P(u2g: SecondJetGroupoidElement, w2: PrincipalJet2, tol: float = 1e-12) -> PrincipalJet2:
    if not u2g.is_semiholonomous(tol):
        raise NotSemiholonomous("groupoid jet is not semiholonomous")
    if w2.semiholonomy_defect() > tol:
        raise NotSemiholonomous("principal jet is not semiholonomous")
    u = u2g.first
    if not _same_point(u.x_src, w2.first.x):
        raise ComposabilityError("jet does not sit over the source of the groupoid jet")
    n = u.n
    H = group_curve2(u.h, u.Xi, u.Xi, u2g.DXi)
    Pc = group_curve2(w2.first.g, w2.slope2, w2.first.slope, w2.curl)
    g, Y2, Y, C = read_group_curve2(H @ Pc, n)
    Ainv = np.linalg.inv(u.A)
    Yt = precompose(Y, Ainv)
    T = np.einsum("ivw,va,wb->iab", u2g.DA, Ainv, Ainv)
    curl = bilinear_pull(C, Ainv) - np.einsum("iab,ikl->abkl", T, Yt)
    return PrincipalJet2(PrincipalJet(u.x_tgt, g, Yt), precompose(Y2, Ainv), curl)


def check_dims(u: JetGroupoidElement, n: int, m: int):
    if u.A.shape != (n, n) or u.Xi.shape != (n, m, m):
        raise DimensionMismatch("jet has the wrong shape")


__all__ = [name for name in dir() if not name.startswith("_")]
