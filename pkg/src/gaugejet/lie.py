"""Matrix Lie groups: GL(m), SO(m), U(1) as SO(2), SU(2) as real 4x4 matrices."""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

import numpy as np
from scipy.linalg import expm

from . import taylor as tl
from .errors import GroupMismatch, SingularMatrix

GROUP_NAMES = ("GL", "SO3", "U1", "SU2")

_J4 = np.array([[0.0, -1, 0, 0], [1, 0, 0, 0], [0, 0, 0, -1], [0, 0, 1, 0]])


def realify(z: np.ndarray) -> np.ndarray:
    """Real 2m x 2m matrix of a complex m x m matrix (a+ib -> [[a,-b],[b,a]] blocks)."""
    z = np.asarray(z, dtype=complex)
    m = z.shape[0]
    out = np.zeros((2 * m, 2 * m))
    for i in range(m):
        for j in range(m):
            a, b = z[i, j].real, z[i, j].imag
            out[2 * i:2 * i + 2, 2 * j:2 * j + 2] = [[a, -b], [b, a]]
    return out


def complexify(r: np.ndarray) -> np.ndarray:
    m = r.shape[0] // 2
    return r[0::2, 0::2] + 1j * r[1::2, 0::2]


def _so_basis(m: int):
    out = []
    for i, j in combinations(range(m), 2):
        E = np.zeros((m, m))
        E[j, i], E[i, j] = 1.0, -1.0
        out.append(E)
    return out


def _so3_basis():
    # e_x, e_y, e_z with [e_x, e_y] = e_z
    ex = np.array([[0.0, 0, 0], [0, 0, -1], [0, 1, 0]])
    ey = np.array([[0.0, 0, 1], [0, 0, 0], [-1, 0, 0]])
    ez = np.array([[0.0, -1, 0], [1, 0, 0], [0, 0, 0]])
    return [ex, ey, ez]


def _su2_basis():
    # -i/2 sigma_k realified; [b1, b2] = b3
    s1 = np.array([[0, 1], [1, 0]], dtype=complex)
    s2 = np.array([[0, -1j], [1j, 0]])
    s3 = np.array([[1, 0], [0, -1]], dtype=complex)
    return [realify(-0.5j * s) for s in (s1, s2, s3)]


@dataclass(frozen=True, eq=False)
class MatrixGroup:
    """A closed subgroup of GL(m, R) with a basis of its Lie algebra."""

    name: str
    m: int
    basis: tuple = field(repr=False)
    eps_grp: float = 1e-10

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def abelian(self) -> bool:
        return all(np.allclose(bracket(a, b), 0) for a, b in combinations(self.basis, 2))

    def identity(self) -> np.ndarray:
        return np.eye(self.m)

    def __eq__(self, other):
        return isinstance(other, MatrixGroup) and (self.name, self.m) == (other.name, other.m)

    def __hash__(self):
        return hash((self.name, self.m))

    # -- membership ---------------------------------------------------
    def contains(self, g: np.ndarray, tol: float | None = None) -> bool:
        tol = self.eps_grp if tol is None else tol
        g = np.asarray(g, dtype=float)
        if g.shape != (self.m, self.m):
            return False
        if self.name == "GL":
            return abs(np.linalg.det(g)) > tol
        orth = np.max(np.abs(g.T @ g - np.eye(self.m))) <= tol
        if self.name in ("SO", "SO3", "U1"):
            return orth and abs(np.linalg.det(g) - 1) <= tol
        if self.name == "SU2":
            commutes = np.max(np.abs(g @ _J4 - _J4 @ g)) <= tol
            return orth and commutes and abs(np.linalg.det(complexify(g)) - 1) <= tol
        raise GroupMismatch(f"unknown group {self.name}")

    def in_algebra(self, X: np.ndarray, tol: float = 1e-9) -> bool:
        c = self.coords(X)
        return np.max(np.abs(self.from_coords(c) - X), initial=0.0) <= tol * max(1.0, np.abs(X).max())

    def coords(self, X: np.ndarray) -> np.ndarray:
        B = np.stack([b.reshape(-1) for b in self.basis], axis=1)
        return np.linalg.lstsq(B, np.asarray(X).reshape(-1), rcond=None)[0]

    def from_coords(self, c) -> np.ndarray:
        return np.tensordot(np.asarray(c, dtype=float), np.stack(self.basis), axes=(0, 0))


def make_group(name: str, m: int | None = None, eps_grp: float = 1e-10) -> MatrixGroup:
    """Build a group from its config name ("GL", "SO3", "U1", "SU2", or "SO" with m)."""
    if name == "GL":
        m = 2 if m is None else m
        basis = []
        for i in range(m):
            for j in range(m):
                E = np.zeros((m, m))
                E[i, j] = 1.0
                basis.append(E)
        return MatrixGroup("GL", m, tuple(basis), eps_grp)
    if name == "SO3":
        return MatrixGroup("SO3", 3, tuple(_so3_basis()), eps_grp)
    if name == "SO":
        if m is None or m < 2:
            raise GroupMismatch("SO needs m >= 2")
        return MatrixGroup("SO", m, tuple(_so_basis(m)), eps_grp)
    if name == "U1":
        return MatrixGroup("U1", 2, tuple(_so_basis(2)), eps_grp)
    if name == "SU2":
        return MatrixGroup("SU2", 4, tuple(_su2_basis()), eps_grp)
    raise GroupMismatch(f"unknown group kind {name!r}")


@dataclass(frozen=True, eq=False)
class GroupElement:
    group: MatrixGroup
    matrix: np.ndarray

    def __matmul__(self, other: "GroupElement") -> "GroupElement":
        return mul(self, other)


@dataclass(frozen=True, eq=False)
class AlgebraElement:
    group: MatrixGroup
    matrix: np.ndarray


def element(group: MatrixGroup, g, check: bool = True) -> GroupElement:
    g = np.asarray(g, dtype=float)
    if check and not group.contains(g):
        raise GroupMismatch(f"matrix is not in {group.name}")
    return GroupElement(group, g)


def mul(a: GroupElement, b: GroupElement) -> GroupElement:
    if a.group != b.group:
        raise GroupMismatch(f"cannot multiply {a.group.name} by {b.group.name}")
    return GroupElement(a.group, a.matrix @ b.matrix)


def inv(a):
    """Inverse of a group element, plain matrix or Taylor matrix."""
    if isinstance(a, GroupElement):
        return GroupElement(a.group, inv(a.matrix))
    if isinstance(a, tl.TaylorArray):
        return tl.inv(a)
    a = np.asarray(a, dtype=float)
    if abs(np.linalg.det(a)) < 1e-14 or np.linalg.cond(a) > 1e14:
        raise SingularMatrix("matrix is singular")
    return np.linalg.inv(a)


def exp(X):
    """Group exponential; accepts AlgebraElement, matrix or Taylor matrix."""
    if isinstance(X, AlgebraElement):
        return GroupElement(X.group, expm(X.matrix))
    if isinstance(X, tl.TaylorArray):
        return tl.expm(X)
    return expm(np.asarray(X, dtype=float))


def bracket(X, Y):
    return X @ Y - Y @ X


def Ad(g, X):
    """Adjoint action g X g^-1 (works for stacks of algebra elements too)."""
    g = g.matrix if isinstance(g, GroupElement) else g
    X = X.matrix if isinstance(X, AlgebraElement) else X
    if isinstance(g, tl.TaylorArray) or isinstance(X, tl.TaylorArray):
        return g @ X @ inv(g)
    X = np.asarray(X, dtype=float)
    gi = np.linalg.inv(g)
    if X.ndim == 2:
        return g @ X @ gi
    return np.einsum("ij,...jk,kl->...il", g, X, gi)


def _rng(seed):
    return seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)


def random_algebra(group: MatrixGroup, seed, scale: float = 1.0) -> np.ndarray:
    rng = _rng(seed)
    return group.from_coords(scale * rng.standard_normal(group.dim))


def random_element(group: MatrixGroup, seed, scale: float = 1.0) -> np.ndarray:
    return expm(random_algebra(group, seed, scale))


def rotation2(theta: float) -> np.ndarray:
    c, s = np.cos(theta), np.sin(theta)
    return np.array([[c, -s], [s, c]])


def rotation_z(theta: float) -> np.ndarray:
    R = np.eye(3)
    R[:2, :2] = rotation2(theta)
    return R
