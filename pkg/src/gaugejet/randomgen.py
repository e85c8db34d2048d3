"""Seeded random generators for polynomial programs, bisections and jets."""
from __future__ import annotations

from dataclasses import dataclass
from itertools import product

import numpy as np

from . import taylor as tl
from .bundles import FiberSpace
from .groupoids import (
    Bisection,
    JetGroupoidElement,
    JetOfSection,
    SecondJetGroupoidElement,
    SecondJetOfSection,
)
from .lie import MatrixGroup, random_algebra, random_element


def rng_for(*keys) -> np.random.Generator:
    """Deterministic generator for a tuple of non-negative integer keys."""
    return np.random.default_rng(np.random.SeedSequence([int(k) for k in keys]))


def _monomials(n: int, degree: int):
    return [a for a in product(range(degree + 1), repeat=n) if sum(a) <= degree]


@dataclass(frozen=True, eq=False)
class Polynomial:
    """Array-valued polynomial sum_a c_a (x - center)^a."""

    center: np.ndarray
    exponents: tuple
    coeffs: np.ndarray  # (len(exponents),) + out_shape

    def __call__(self, X):
        D = X - self.center
        out = None
        for alpha, c in zip(self.exponents, self.coeffs):
            term = None
            for i, a in enumerate(alpha):
                if a:
                    f = D[i] ** a
                    term = f if term is None else term * f
            if term is None:
                val = c
            elif isinstance(term, tl.TaylorArray):
                val = _scale(term, c)
            else:
                val = term * c
            out = val if out is None else out + val
        return out


def _scale(s: tl.TaylorArray, c: np.ndarray) -> tl.TaylorArray:
    """Scalar jet times constant array."""
    c = np.asarray(c, dtype=float)
    return tl.TaylorArray(s.value * c, c[..., None] * s.grad, c[..., None, None] * s.hess)


def random_polynomial(rng, n: int, degree: int, out_shape=(), scale: float = 1.0,
                      center=None) -> Polynomial:
    exps = _monomials(n, degree)
    coeffs = scale * rng.standard_normal((len(exps),) + tuple(out_shape))
    center = np.zeros(n) if center is None else np.asarray(center, dtype=float)
    return Polynomial(center, tuple(exps), coeffs)


def random_base_point(rng, n: int, radius: float = 0.5) -> np.ndarray:
    return rng.uniform(-radius, radius, n)


def random_bisection(rng, group: MatrixGroup, n: int, degree: int = 2,
                     shift: float = 0.3, wobble: float = 0.2, gscale: float = 0.6) -> Bisection:
    """psi(x) = x + c + small polynomial, h(x) = exp(polynomial in the algebra)."""
    c = shift * rng.standard_normal(n)
    p = random_polynomial(rng, n, degree, (n,), wobble / max(1, n))
    q = random_polynomial(rng, n, degree, (group.dim,), gscale / np.sqrt(group.dim))
    basis = np.stack(group.basis)

    def psi(X):
        return X + c + p(X)

    def hmap(X):
        return tl.expm(contract_basis(q(X), basis))

    return Bisection(psi, hmap)


def contract_basis(c, basis: np.ndarray):
    """sum_a c[..., a] B_a for a coefficient jet c and stacked basis B."""
    if not isinstance(c, tl.TaylorArray):
        return np.tensordot(c, basis, axes=(-1, 0))
    return tl.TaylorArray(np.tensordot(c.value, basis, axes=(-1, 0)),
                          np.einsum("...ap,aij->...ijp", c.grad, basis),
                          np.einsum("...apq,aij->...ijpq", c.hess, basis))


def algebra_valued(poly: Polynomial, group: MatrixGroup):
    """Compose a coefficient polynomial with the algebra basis."""
    basis = np.stack(group.basis)
    return lambda X: contract_basis(poly(X), basis)


def random_section(rng, fiber: FiberSpace, n: int, degree: int = 2, scale: float = 0.5):
    """Polynomial section x -> Q in the fiber chart, valued in the right subset."""
    group = fiber.group
    m = group.m
    if fiber.kind == "linear":
        return random_polynomial(rng, n, degree, (m,), scale)
    if fiber.kind == "callback":
        return random_polynomial(rng, n, degree, (fiber.dim,), 0.3 * scale)
    f = algebra_valued(random_polynomial(rng, n, degree, (group.dim,), scale), group)
    if fiber.kind == "adjoint":
        return lambda X: f(X).reshape(-1)
    return lambda X: tl.expm(f(X)).reshape(-1)


def random_connection(rng, group: MatrixGroup, n: int, degree: int = 2, scale: float = 0.5):
    """Connection form x -> (A_1, ..., A_n), each A_mu in the algebra."""
    return algebra_valued(random_polynomial(rng, n, degree, (n, group.dim), scale), group)


def random_frame(rng, n: int, scale: float = 0.3) -> np.ndarray:
    from scipy.linalg import expm

    return expm(scale * rng.standard_normal((n, n)))


def random_algebra_stack(rng, group: MatrixGroup, count: int, scale: float = 0.5) -> np.ndarray:
    return np.stack([random_algebra(group, rng, scale) for _ in range(count)]) if count else \
        np.zeros((0, group.m, group.m))


def random_jg(rng, group: MatrixGroup, n: int, x_src=None, scale: float = 0.5) -> JetGroupoidElement:
    x_src = random_base_point(rng, n) if x_src is None else np.asarray(x_src, dtype=float)
    return JetGroupoidElement(x_src, random_base_point(rng, n), random_element(group, rng, scale),
                              random_frame(rng, n), random_algebra_stack(rng, group, n, scale))


def random_j2g(rng, group: MatrixGroup, n: int, holonomous: bool = False, x_src=None,
               scale: float = 0.5) -> SecondJetGroupoidElement:
    first = random_jg(rng, group, n, x_src, scale)
    DA = 0.3 * rng.standard_normal((n, n, n))
    DXi = np.stack([random_algebra_stack(rng, group, n, scale) for _ in range(n)])
    if holonomous:
        DA = 0.5 * (DA + DA.transpose(0, 2, 1))
        DXi = 0.5 * (DXi + DXi.transpose(1, 0, 2, 3))
    return SecondJetGroupoidElement(first, DA, DXi)


def random_je(rng, fiber: FiberSpace, n: int, x=None, q=None, scale: float = 0.5) -> JetOfSection:
    x = random_base_point(rng, n) if x is None else np.asarray(x, dtype=float)
    q = fiber.random_point(rng, scale) if q is None else q
    if fiber.kind == "adjoint":
        cols = [random_algebra(fiber.group, rng, scale).reshape(-1) for _ in range(n)]
        slope = np.stack(cols, axis=1)
    elif fiber.kind == "conjugation":
        g = q.reshape(fiber.group.m, fiber.group.m)
        slope = np.stack([(g @ random_algebra(fiber.group, rng, scale)).reshape(-1)
                          for _ in range(n)], axis=1)
    else:
        slope = scale * rng.standard_normal((fiber.dim, n))
    return JetOfSection(x, np.asarray(q, dtype=float), slope)


def random_curl(rng, fiber: FiberSpace, n: int, q, scale: float = 0.5) -> np.ndarray:
    """A curl block tangent to the fiber (random, not symmetric)."""
    k = fiber.dim
    if fiber.kind == "adjoint":
        out = np.stack([[random_algebra(fiber.group, rng, scale).reshape(-1) for _ in range(n)]
                        for _ in range(n)])
        return out.transpose(2, 0, 1)
    if fiber.kind == "conjugation":
        g = np.asarray(q).reshape(fiber.group.m, fiber.group.m)
        out = np.stack([[(g @ random_algebra(fiber.group, rng, scale)).reshape(-1)
                         for _ in range(n)] for _ in range(n)])
        return out.transpose(2, 0, 1)
    return scale * rng.standard_normal((k, n, n))


def random_j2e(rng, fiber: FiberSpace, n: int, first: JetOfSection | None = None,
               holonomous: bool = False, scale: float = 0.5) -> SecondJetOfSection:
    first = random_je(rng, fiber, n, scale=scale) if first is None else first
    curl = random_curl(rng, fiber, n, first.e, scale)
    if holonomous:
        curl = 0.5 * (curl + curl.transpose(0, 2, 1))
    return SecondJetOfSection(first, first.slope.copy(), curl)
