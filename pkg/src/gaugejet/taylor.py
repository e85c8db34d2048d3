"""Second-order forward-mode Taylor arithmetic.

A :class:`TaylorArray` carries, for every entry of an array-valued quantity,
its value, gradient and (symmetric) hessian with respect to ``nvars`` seed
variables. Programs written against the numpy-like interface below evaluate
to their exact order-2 jets at the seed point.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .errors import DimensionMismatch, DivisionNearZero

EPS_DIV = 1e-12


class TaylorArray:
    """Array of order-2 jets in ``nvars`` variables.

    ``value`` has shape ``S``, ``grad`` has shape ``S + (N,)`` and ``hess``
    has shape ``S + (N, N)``.
    """

    __array_ufunc__ = None  # make numpy defer to our reflected operators

    __slots__ = ("value", "grad", "hess")

    def __init__(self, value, grad, hess):
        self.value = np.asarray(value, dtype=float)
        self.grad = np.asarray(grad, dtype=float)
        self.hess = np.asarray(hess, dtype=float)

    # -- construction -------------------------------------------------
    @classmethod
    def constant(cls, value, nvars: int) -> "TaylorArray":
        v = np.asarray(value, dtype=float)
        return cls(v, np.zeros(v.shape + (nvars,)), np.zeros(v.shape + (nvars, nvars)))

    @property
    def nvars(self) -> int:
        return self.grad.shape[-1]

    @property
    def shape(self):
        return self.value.shape

    @property
    def ndim(self) -> int:
        return self.value.ndim

    def __len__(self):
        return len(self.value)

    def __repr__(self):
        return f"TaylorArray(value={self.value!r}, nvars={self.nvars})"

    def _lift(self, other) -> "TaylorArray":
        if isinstance(other, TaylorArray):
            if other.nvars != self.nvars:
                raise DimensionMismatch(
                    f"jets in {self.nvars} and {other.nvars} variables cannot be combined")
            return other
        return TaylorArray.constant(other, self.nvars)

    # -- structure ----------------------------------------------------
    def __getitem__(self, key):
        return TaylorArray(self.value[key], self.grad[key], self.hess[key])

    def reshape(self, *shape):
        if len(shape) == 1 and isinstance(shape[0], (tuple, list)):
            shape = tuple(shape[0])
        n = self.nvars
        v = self.value.reshape(shape)
        return TaylorArray(v, self.grad.reshape(v.shape + (n,)),
                           self.hess.reshape(v.shape + (n, n)))

    def transpose(self):
        if self.ndim != 2:
            raise DimensionMismatch("transpose expects a matrix")
        return TaylorArray(self.value.T, self.grad.transpose(1, 0, 2),
                           self.hess.transpose(1, 0, 2, 3))

    @property
    def T(self):
        return self.transpose()

    def sum(self, axis=None):
        if axis is None:
            axes = tuple(range(self.ndim))
        else:
            axes = (axis,) if isinstance(axis, int) else tuple(axis)
            axes = tuple(a % self.ndim for a in axes)
        return TaylorArray(self.value.sum(axis=axes), self.grad.sum(axis=axes),
                           self.hess.sum(axis=axes))

    # -- arithmetic ---------------------------------------------------
    def __add__(self, other):
        o = self._lift(other)
        return TaylorArray(self.value + o.value, self.grad + o.grad, self.hess + o.hess)

    __radd__ = __add__

    def __neg__(self):
        return TaylorArray(-self.value, -self.grad, -self.hess)

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        if not isinstance(other, TaylorArray):
            c = np.asarray(other, dtype=float)
            return TaylorArray(self.value * c, self.grad * c[..., None],
                               self.hess * c[..., None, None])
        o = self._lift(other)
        a, b = self, o
        value = a.value * b.value
        grad = a.grad * b.value[..., None] + a.value[..., None] * b.grad
        outer = a.grad[..., :, None] * b.grad[..., None, :]
        hess = (a.hess * b.value[..., None, None] + a.value[..., None, None] * b.hess
                + outer + np.swapaxes(outer, -1, -2))
        return TaylorArray(value, grad, hess)

    __rmul__ = __mul__

    def reciprocal(self, eps: float = EPS_DIV) -> "TaylorArray":
        if np.any(np.abs(self.value) < eps):
            raise DivisionNearZero("denominator value within eps_div of zero")
        v = self.value
        return _univariate(self, 1.0 / v, -1.0 / v**2, 2.0 / v**3)

    def __truediv__(self, other):
        if not isinstance(other, TaylorArray):
            c = np.asarray(other, dtype=float)
            if np.any(np.abs(c) < EPS_DIV):
                raise DivisionNearZero("denominator value within eps_div of zero")
            return self * (1.0 / c)
        return self * self._lift(other).reciprocal()

    def __rtruediv__(self, other):
        return self._lift(other) * self.reciprocal()

    def __pow__(self, p):
        if isinstance(p, (int, np.integer)) and p >= 0:
            if p == 0:
                return TaylorArray.constant(np.ones(self.shape), self.nvars)
            if p == 1:
                return self
            v = self.value
            return _univariate(self, v**p, p * v ** (p - 1), p * (p - 1) * v ** (p - 2))
        v = self.value
        if np.any(v <= 0):
            raise DivisionNearZero("non-integer power needs a positive base")
        return _univariate(self, v**p, p * v ** (p - 1), p * (p - 1) * v ** (p - 2))

    def __matmul__(self, other):
        return matmul(self, other)

    def __rmatmul__(self, other):
        return matmul(other, self)


def _univariate(x: TaylorArray, f0, f1, f2) -> TaylorArray:
    grad = f1[..., None] * x.grad
    hess = (f1[..., None, None] * x.hess
            + f2[..., None, None] * x.grad[..., :, None] * x.grad[..., None, :])
    return TaylorArray(f0, grad, hess)


# Aliases: a scalar is a 0-d array, a matrix a 2-d one.
TaylorScalar = TaylorArray
TaylorMatrix = TaylorArray


def as_taylor(x, nvars: int) -> TaylorArray:
    return x if isinstance(x, TaylorArray) else TaylorArray.constant(x, nvars)


def seed_coordinates(x: Sequence[float]) -> TaylorArray:
    """Jet of the identity map at ``x``: value x, gradient I, hessian 0."""
    x = np.asarray(x, dtype=float).reshape(-1)
    n = x.size
    return TaylorArray(x.copy(), np.eye(n), np.zeros((n, n, n)))


def from_jet(value, first, second=None) -> TaylorArray:
    """Build a TaylorArray whose derivatives are the given jet data."""
    value = np.asarray(value, dtype=float)
    first = np.asarray(first, dtype=float)
    n = first.shape[-1]
    if second is None:
        second = np.zeros(first.shape + (n,))
    return TaylorArray(value, first, np.asarray(second, dtype=float))


def exp(x):
    if not isinstance(x, TaylorArray):
        return np.exp(x)
    e = np.exp(x.value)
    return _univariate(x, e, e, e)


def sin(x):
    if not isinstance(x, TaylorArray):
        return np.sin(x)
    s, c = np.sin(x.value), np.cos(x.value)
    return _univariate(x, s, c, -s)


def cos(x):
    if not isinstance(x, TaylorArray):
        return np.cos(x)
    s, c = np.sin(x.value), np.cos(x.value)
    return _univariate(x, c, -s, -c)


def log(x):
    if not isinstance(x, TaylorArray):
        return np.log(x)
    v = x.value
    if np.any(v <= EPS_DIV):
        raise DivisionNearZero("log of a non-positive value")
    return _univariate(x, np.log(v), 1.0 / v, -1.0 / v**2)


def sqrt(x):
    if not isinstance(x, TaylorArray):
        return np.sqrt(x)
    v = x.value
    if np.any(v <= EPS_DIV):
        raise DivisionNearZero("sqrt derivative undefined at zero")
    r = np.sqrt(v)
    return _univariate(x, r, 0.5 / r, -0.25 / (r * v))


def matmul(a, b):
    """Matrix product for matrix@matrix and matrix@vector operands."""
    if not isinstance(a, TaylorArray) and not isinstance(b, TaylorArray):
        return np.asarray(a) @ np.asarray(b)
    n = a.nvars if isinstance(a, TaylorArray) else b.nvars
    A, B = as_taylor(a, n), as_taylor(b, n)
    if A.nvars != B.nvars:
        raise DimensionMismatch("operands carry different numbers of variables")
    if A.ndim != 2 or B.ndim not in (1, 2):
        raise DimensionMismatch("matmul supports matrix@matrix and matrix@vector")
    if B.ndim == 1:
        return matmul(A, B.reshape(-1, 1)).reshape(-1)
    Av, Bv = A.value, B.value
    Ag, Bg = A.grad.transpose(2, 0, 1), B.grad.transpose(2, 0, 1)  # (N, i, k)
    Ah, Bh = A.hess.transpose(2, 3, 0, 1), B.hess.transpose(2, 3, 0, 1)
    value = Av @ Bv
    grad = Ag @ Bv + Av @ Bg
    cross = Ag[:, None] @ Bg[None, :]
    hess = Ah @ Bv + Av @ Bh + cross + cross.transpose(1, 0, 2, 3)
    return TaylorArray(value, grad.transpose(1, 2, 0), hess.transpose(2, 3, 0, 1))


def inv(M):
    """Matrix inverse with exact first and second derivatives."""
    if not isinstance(M, TaylorArray):
        return np.linalg.inv(M)
    from .errors import SingularMatrix

    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise DimensionMismatch("inv expects a square matrix")
    try:
        W = np.linalg.inv(M.value)
    except np.linalg.LinAlgError as exc:
        raise SingularMatrix(str(exc)) from exc
    if not np.all(np.isfinite(W)) or np.linalg.cond(M.value) > 1e14:
        raise SingularMatrix("matrix is numerically singular")
    G = np.einsum("ik,kln,lj->ijn", W, M.grad, W)
    # d_p d_q W = W (dp M W dq M + dq M W dp M - dpq M) W
    WdM = np.einsum("ik,kjn->ijn", W, M.grad)  # W dM
    t = np.einsum("ikp,kjq->ijpq", WdM, WdM)
    H = (np.einsum("ijpq,jl->ilpq", t + t.transpose(0, 1, 3, 2), W)
         - np.einsum("ik,klpq,lj->ijpq", W, M.hess, W))
    return TaylorArray(W, -G, H)


def eye(m: int, nvars: int) -> TaylorArray:
    return TaylorArray.constant(np.eye(m), nvars)


def expm(Z):
    """Matrix exponential of a Taylor matrix by scaling and squaring."""
    if not isinstance(Z, TaylorArray):
        from scipy.linalg import expm as _expm

        return _expm(Z)
    m = Z.shape[0]
    I = eye(m, Z.nvars)
    if not np.any(Z.value):
        # no constant part: the order-2 truncation of the series is exact
        return I + Z + matmul(Z, Z) * 0.5
    norm = np.linalg.norm(Z.value, 1)
    s = int(max(0, np.ceil(np.log2(norm / 0.25))))
    X = Z * (0.5**s)
    # Horner form of sum_{k<=13} X^k / k!; the tail is below 1e-17 for |X| <= 1/4
    acc = I
    for k in range(13, 0, -1):
        acc = I + matmul(X, acc) * (1.0 / k)
    for _ in range(s):
        acc = matmul(acc, acc)
    return acc


def stack(items: Sequence, axis: int = 0) -> TaylorArray:
    nv = next((i.nvars for i in items if isinstance(i, TaylorArray)), None)
    if nv is None:
        return np.stack([np.asarray(i, dtype=float) for i in items], axis=axis)
    items = [as_taylor(i, nv) for i in items]
    ax = axis % (items[0].ndim + 1)
    return TaylorArray(np.stack([i.value for i in items], axis=ax),
                       np.stack([i.grad for i in items], axis=ax),
                       np.stack([i.hess for i in items], axis=ax))


def value_of(x):
    return x.value if isinstance(x, TaylorArray) else np.asarray(x, dtype=float)


# ---------------------------------------------------------------------------
# jets of maps R^n -> R^k and their composition


@dataclass(frozen=True)
class Jet2:
    """Order-2 jet of a map R^n -> R^k at a point.

    ``first[i, a] = d f_i / dx_a`` and ``second[i, a, b]`` is the symmetric
    second derivative.
    """

    value: np.ndarray
    first: np.ndarray
    second: np.ndarray

    @classmethod
    def of(cls, fn: Callable, x) -> "Jet2":
        out = fn(seed_coordinates(x))
        out = as_taylor(out, len(np.atleast_1d(x))).reshape(-1)
        return cls(out.value, out.grad, out.hess)


def compose_jet2(outer: Jet2, inner: Jet2) -> Jet2:
    """Jet of g∘f from the jet of g at f(x) and the jet of f at x."""
    Dg, D2g = np.asarray(outer.first), np.asarray(outer.second)
    Df, D2f = np.asarray(inner.first), np.asarray(inner.second)
    if Dg.shape[1] != Df.shape[0]:
        raise DimensionMismatch(
            f"outer jet expects {Dg.shape[1]} inputs, inner jet has {Df.shape[0]} outputs")
    first = Dg @ Df
    second = (np.einsum("lk,kab->lab", Dg, D2f)
              + np.einsum("lkj,ka,jb->lab", D2g, Df, Df))
    return Jet2(np.asarray(outer.value), first, second)


def finite_difference_check(fn: Callable, x, h: float = 1e-4) -> float:
    """Largest gap between Taylor derivatives and central differences.

    ``fn`` must accept both plain arrays and TaylorArrays.
    """
    x = np.asarray(x, dtype=float).reshape(-1)
    n = x.size
    jet = Jet2.of(fn, x)

    def f(y):
        return np.asarray(value_of(fn(y)), dtype=float).reshape(-1)

    grad_fd = np.empty_like(jet.first)
    hess_fd = np.empty_like(jet.second)
    E = np.eye(n) * h
    f0 = f(x)
    for a in range(n):
        grad_fd[:, a] = (f(x + E[a]) - f(x - E[a])) / (2 * h)
        hess_fd[:, a, a] = (f(x + E[a]) - 2 * f0 + f(x - E[a])) / h**2
        for b in range(a + 1, n):
            d = (f(x + E[a] + E[b]) - f(x + E[a] - E[b])
                 - f(x - E[a] + E[b]) + f(x - E[a] - E[b])) / (4 * h**2)
            hess_fd[:, a, b] = hess_fd[:, b, a] = d
    return float(max(np.max(np.abs(grad_fd - jet.first), initial=0.0),
                     np.max(np.abs(hess_fd - jet.second), initial=0.0)))


def inverse_jet2(jet: Jet2) -> Jet2:
    """Jet of f^-1 at f(x) from the jet of a local diffeomorphism f at x.

    ``jet.value`` must hold f(x); the returned jet has value x only if the
    caller supplies it, so the value slot carries f(x) unchanged.
    """
    A = np.asarray(jet.first)
    W = np.linalg.inv(A)
    second = -np.einsum("ij,jab,ap,bq->ipq", W, np.asarray(jet.second), W, W)
    return Jet2(np.asarray(jet.value), W, second)
