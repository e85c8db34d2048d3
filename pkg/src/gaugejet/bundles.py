"""Trivial principal bundle P = U x G0 and its associated bundles.

Points of P are pairs ``(x, g)``; G0 acts on the right by ``(x, g).g0 = (x, g g0)``.
Tangent vectors to the group factor are stored in body frame: ``g X`` is
represented by ``X``. A point ``[p, q]`` of the associated bundle
``E = P x_G0 Q`` is stored canonically as ``(x, g.q)``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import taylor as tl
from .errors import DimensionMismatch, FiberMismatch
from .lie import MatrixGroup, random_algebra, random_element

FIBER_KINDS = ("linear", "adjoint", "conjugation", "callback")


@dataclass(frozen=True)
class BaseChart:
    n: int
    lo: float = -1.0
    hi: float = 1.0

    def contains(self, x) -> bool:
        x = np.asarray(x, dtype=float)
        return x.shape == (self.n,) and bool(np.all((x > self.lo) & (x < self.hi)))


@dataclass(frozen=True, eq=False)
class PrincipalPoint:
    x: np.ndarray
    g: np.ndarray


@dataclass(frozen=True, eq=False)
class AssociatedPoint:
    x: np.ndarray
    qhat: np.ndarray


@dataclass(frozen=True, eq=False)
class VerticalVector:
    """Vertical tangent vector at p, stored as its body-frame algebra element."""

    p: PrincipalPoint
    X: np.ndarray

    @property
    def matrix(self) -> np.ndarray:
        return self.p.g @ self.X


def _sphere_act(H, Q):
    """Action on S^{m-1} through the stereographic chart from the south pole."""
    nv = H.nvars
    Q = tl.as_taylor(Q, nv)
    r2 = (Q * Q).sum()
    denom = r2 + 1.0
    top = tl.stack([Q[i] * 2.0 / denom for i in range(Q.shape[0])]
                   + [(1.0 - r2) / denom])
    Y = H @ top
    Y = Y / tl.sqrt((Y * Y).sum())
    k = Q.shape[0]
    return tl.stack([Y[i] / (Y[k] + 1.0) for i in range(k)])


@dataclass(frozen=True, eq=False)
class FiberSpace:
    """Left G0-space Q with a global chart R^k.

    ``program(H, Q)`` must accept TaylorArrays (H an m x m matrix, Q a
    k-vector) and return the k-vector H.Q.
    """

    kind: str
    group: MatrixGroup
    dim: int
    program: Callable = field(repr=False)

    def _nv(self, h, q):
        for a in (h, q):
            if isinstance(a, tl.TaylorArray):
                return a.nvars
        return 0

    def act(self, h, q):
        """h.q for plain arrays (returns ndarray) or TaylorArrays."""
        nv = self._nv(h, q)
        out = self.program(tl.as_taylor(h, nv), tl.as_taylor(q, nv))
        if isinstance(h, tl.TaylorArray) or isinstance(q, tl.TaylorArray):
            return out
        return out.value

    def check_point(self, q):
        q = np.asarray(q, dtype=float)
        if q.shape != (self.dim,):
            raise FiberMismatch(f"fiber point has shape {q.shape}, expected ({self.dim},)")
        return q

    def tangent_map(self, h, q) -> np.ndarray:
        """Derivative of q -> h.q, as a k x k matrix."""
        out = self.program(tl.TaylorArray.constant(h, self.dim), tl.seed_coordinates(q))
        return out.grad

    def group_derivative(self, h, q) -> np.ndarray:
        """Matrix M with M[:, a] = d/dt (h exp(t B_a)).q, B_a the algebra basis."""
        cols = [self.program(_curve(h, B), tl.as_taylor(q, 1)).grad[:, 0]
                for B in self.group.basis]
        return np.stack(cols, axis=1)

    def random_point(self, seed, scale: float = 1.0) -> np.ndarray:
        rng = np.random.default_rng(seed) if not isinstance(seed, np.random.Generator) else seed
        m = self.group.m
        if self.kind == "linear":
            return scale * rng.standard_normal(m)
        if self.kind == "adjoint":
            return random_algebra(self.group, rng, scale).reshape(-1)
        if self.kind == "conjugation":
            return random_element(self.group, rng, scale).reshape(-1)
        return 0.3 * scale * rng.standard_normal(self.dim)


def _curve(h, X):
    """One-variable jet of t -> h exp(tX) at t = 0."""
    m = X.shape[0]
    Z = tl.TaylorArray(np.zeros((m, m)), X[..., None], np.zeros((m, m, 1, 1)))
    return tl.as_taylor(h, 1) @ tl.expm(Z)


def make_fiber(kind: str, group: MatrixGroup, program: Callable | None = None,
               dim: int | None = None) -> FiberSpace:
    """Build a fiber of the given kind.

    "callback" uses ``program`` if given, otherwise the sphere S^{m-1} in a
    stereographic chart (a fiber with a genuinely nonlinear action).
    """
    m = group.m
    if kind == "linear":
        return FiberSpace(kind, group, m, lambda H, Q: H @ Q)
    if kind in ("adjoint", "conjugation"):
        def prog(H, Q):
            return (H @ Q.reshape(m, m) @ tl.inv(H)).reshape(-1)
        return FiberSpace(kind, group, m * m, prog)
    if kind == "callback":
        if program is None:
            return FiberSpace(kind, group, m - 1, _sphere_act)
        if dim is None:
            raise DimensionMismatch("callback fibers need an explicit dim")
        return FiberSpace(kind, group, dim, program)
    raise FiberMismatch(f"unknown fiber kind {kind!r}")


def rho_Q(p: PrincipalPoint, q, fiber: FiberSpace) -> AssociatedPoint:
    """Projection P x Q -> E, (p, q) -> [p, q]."""
    q = fiber.check_point(q)
    return AssociatedPoint(np.asarray(p.x, dtype=float), fiber.act(p.g, q))


def right_action_P(p: PrincipalPoint, g0) -> PrincipalPoint:
    return PrincipalPoint(p.x, p.g @ np.asarray(g0, dtype=float))


def delta_P(p: PrincipalPoint, p2: PrincipalPoint, tol: float = 1e-12) -> np.ndarray:
    """The unique g0 with p.g0 = p2."""
    if np.max(np.abs(np.asarray(p.x) - np.asarray(p2.x))) > tol:
        raise FiberMismatch("points lie in different fibers")
    return np.linalg.solve(p.g, p2.g)


def fundamental_vf_P(X, p: PrincipalPoint) -> VerticalVector:
    """d/dt p.exp(tX) at t = 0, returned in body frame."""
    tangent = _curve(p.g, np.asarray(X, dtype=float)).grad[..., 0]
    return VerticalVector(p, np.linalg.solve(p.g, tangent))


def fundamental_vf_Q(X, q, fiber: FiberSpace) -> np.ndarray:
    """d/dt exp(-tX).q at t = 0."""
    X = np.asarray(X, dtype=float)
    H = _curve(np.eye(fiber.group.m), -X)
    return fiber.program(H, tl.as_taylor(fiber.check_point(q), 1)).grad[:, 0]


def vertical_iso(v: VerticalVector):
    """VP -> P x g0."""
    return v.p, np.asarray(v.X)


def vertical_from_pair(p: PrincipalPoint, X) -> VerticalVector:
    return VerticalVector(p, np.asarray(X, dtype=float))
