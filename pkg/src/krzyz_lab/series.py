"""Truncated complex power series about the origin.

A :class:`TruncatedSeries` of order ``N`` stores the Taylor coefficients
``c_0, ..., c_N`` of a holomorphic function. Coefficients beyond ``N`` are
unknown, not zero, so every binary operation returns a result at the smaller
of the two operand orders.

    >>> z = TruncatedSeries.identity(3)
    >>> exp(div(z - 1, z + 1)).coeffs.round(6)       # doctest: +SKIP
    array([ 0.367879+0.j,  0.735759+0.j,  0.      +0.j, -0.245253+0.j])

Composition ``f(g)`` is only defined for ``g(0) == 0``. Maps like
``exp((g - 1)/(g + 1))`` with ``g(0) != 0`` must be assembled from
:func:`div`, :func:`exp` and :func:`log`, which have clean truncation
behaviour.
"""

from __future__ import annotations

import json
from typing import Iterable, Sequence

import numpy as np
from numpy.polynomial import polynomial as P
from functools import lru_cache

from scipy.linalg import get_lapack_funcs, solve_triangular, toeplitz

from .defaults import EPS_DIV
from .errors import NearZeroConstantTerm, NonzeroInnerConstant

# triangular Toeplitz solves allocate (N+1)^2 entries; above this use a loop
_DENSE_LIMIT = 1024
_ZTRTRS = get_lapack_funcs("trtrs", dtype=complex)


@lru_cache(maxsize=16)
def _toeplitz_index(n: int) -> np.ndarray:
    # A[i, k] = col[i - k] below the diagonal, col[n] (a zero pad) above
    d = np.subtract.outer(np.arange(n), np.arange(n))
    return np.where(d >= 0, d, n)


class TruncatedSeries:
    """Immutable truncated power series with complex coefficients.

    Parameters
    ----------
    coeffs : sequence of complex
        ``c_0, ..., c_N``. The order is ``len(coeffs) - 1``.
    order : int, optional
        Pad with zeros or cut ``coeffs`` to this order.
    """

    __slots__ = ("_c",)
    # make numpy scalars defer to the reflected operators below
    __array_ufunc__ = None

    def __init__(self, coeffs: Iterable[complex], order: int | None = None):
        c = np.array(coeffs, dtype=complex).ravel()
        if order is not None:
            if order < 0:
                raise ValueError("order must be >= 0")
            c = np.concatenate([c[: order + 1], np.zeros(max(0, order + 1 - c.size), complex)])
        if c.size == 0:
            raise ValueError("a series needs at least one coefficient")
        if not np.all(np.isfinite(c)):
            raise ValueError("series coefficients must be finite")
        c.flags.writeable = False
        self._c = c

    # construction helpers
    @classmethod
    def constant(cls, value: complex, order: int) -> TruncatedSeries:
        return cls([value], order=order)

    @classmethod
    def identity(cls, order: int) -> TruncatedSeries:
        return cls([0.0, 1.0], order=order)

    @classmethod
    def monomial(cls, degree: int, order: int, coeff: complex = 1.0) -> TruncatedSeries:
        c = np.zeros(order + 1, complex)
        if degree <= order:
            c[degree] = coeff
        return cls(c)

    @property
    def coeffs(self) -> np.ndarray:
        return self._c

    @property
    def order(self) -> int:
        return self._c.size - 1

    def __len__(self) -> int:
        return self._c.size

    def __getitem__(self, k):
        return self._c[k]

    def __repr__(self) -> str:
        return f"TruncatedSeries(order={self.order}, coeffs={np.array2string(self._c, precision=6)})"

    def __eq__(self, other) -> bool:
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        return self.order == other.order and bool(np.array_equal(self._c, other._c))

    def __hash__(self) -> int:
        return hash((self.order, self._c.tobytes()))

    def truncate(self, order: int) -> TruncatedSeries:
        return TruncatedSeries(self._c, order=order)

    def allclose(self, other: TruncatedSeries, atol: float = 1e-12) -> bool:
        n = min(self.order, other.order)
        return bool(np.allclose(self._c[: n + 1], other._c[: n + 1], rtol=0.0, atol=atol))

    # arithmetic sugar; scalars are promoted to constant series
    def _coerce(self, other) -> TruncatedSeries:
        if isinstance(other, TruncatedSeries):
            return other
        return TruncatedSeries.constant(complex(other), self.order)

    def __add__(self, other):
        return add(self, self._coerce(other))

    __radd__ = __add__

    def __neg__(self):
        return TruncatedSeries(-self._c)

    def __sub__(self, other):
        return add(self, -self._coerce(other))

    def __rsub__(self, other):
        return add(self._coerce(other), -self)

    def __mul__(self, other):
        if isinstance(other, TruncatedSeries):
            return mul(self, other)
        return TruncatedSeries(self._c * complex(other))

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, TruncatedSeries):
            return div(self, other)
        return TruncatedSeries(self._c / complex(other))

    def __rtruediv__(self, other):
        return div(self._coerce(other), self)

    def __call__(self, z):
        return evaluate(self, z)

    # serialization: JSON array of [re, im] pairs, index = degree
    def to_pairs(self) -> list[list[float]]:
        return [[float(c.real), float(c.imag)] for c in self._c]

    @classmethod
    def from_pairs(cls, pairs: Sequence[Sequence[float]]) -> TruncatedSeries:
        return cls([complex(re, im) for re, im in pairs])

    def to_json(self) -> str:
        return json.dumps(self.to_pairs())

    @classmethod
    def from_json(cls, text: str) -> TruncatedSeries:
        return cls.from_pairs(json.loads(text))


def _common(f: TruncatedSeries, g: TruncatedSeries) -> tuple[np.ndarray, np.ndarray, int]:
    n = min(f.order, g.order)
    return f.coeffs[: n + 1], g.coeffs[: n + 1], n


def add(f: TruncatedSeries, g: TruncatedSeries) -> TruncatedSeries:
    a, b, _ = _common(f, g)
    return TruncatedSeries(a + b)


def mul(f: TruncatedSeries, g: TruncatedSeries) -> TruncatedSeries:
    """Cauchy product truncated to the smaller order."""
    a, b, n = _common(f, g)
    return TruncatedSeries(np.convolve(a, b)[: n + 1])


def _check_constant(c0: complex) -> None:
    if abs(c0) <= EPS_DIV:
        raise NearZeroConstantTerm(f"constant term {c0!r} is below {EPS_DIV:g}")


def _solve_lower_toeplitz(col: np.ndarray, rhs: np.ndarray) -> np.ndarray:
    """Solve ``T x = rhs`` for the lower-triangular Toeplitz ``T`` with first column ``col``."""
    n = col.size
    if n <= _DENSE_LIMIT:
        T = toeplitz(col, np.zeros(n, complex))
        return solve_triangular(T, rhs, lower=True, check_finite=False)
    x = np.zeros(n, complex)
    for k in range(n):
        x[k] = (rhs[k] - np.dot(col[k:0:-1], x[:k])) / col[0]
    return x


def div(f: TruncatedSeries, g: TruncatedSeries) -> TruncatedSeries:
    """Quotient ``f/g``; requires ``|g(0)| > EPS_DIV``."""
    a, b, _ = _common(f, g)
    _check_constant(b[0])
    return TruncatedSeries(_solve_lower_toeplitz(b, a))


def reciprocal(g: TruncatedSeries) -> TruncatedSeries:
    return div(TruncatedSeries.constant(1.0, g.order), g)


def _exp_coeffs(p: np.ndarray) -> np.ndarray:
    # a' = p' a  <=>  k a_k = sum_{j=1}^{k} j p_j a_{k-j}
    n = p.size
    a0 = np.exp(p[0])
    if n == 1:
        return np.array([a0])
    q = np.arange(n) * p
    if n <= _DENSE_LIMIT:
        # the optimizer calls this in its inner loop: cached index, raw LAPACK
        col = np.zeros(n + 1, complex)
        col[1:n] = -q[1:]
        M = col[_toeplitz_index(n)]
        M[np.diag_indices(n)] = np.arange(n)
        M[0, 0] = 1.0
        rhs = np.zeros(n, complex)
        rhs[0] = a0
        # C-ordered M is the Fortran-ordered transpose: solve M^T^T x = rhs
        x, info = _ZTRTRS(M.T, rhs, lower=0, trans=1)
        return x
    a = np.zeros(n, complex)
    a[0] = a0
    for k in range(1, n):
        a[k] = np.dot(q[1 : k + 1], a[k - 1 :: -1]) / k
    return a


def exp(f: TruncatedSeries) -> TruncatedSeries:
    """Series of ``e^{f(z)}``; the constant term is ``e^{c_0}``."""
    return TruncatedSeries(_exp_coeffs(f.coeffs))


def derivative(f: TruncatedSeries) -> TruncatedSeries:
    """Termwise derivative. The order drops by one (a constant stays order 0)."""
    if f.order == 0:
        return TruncatedSeries([0.0])
    return TruncatedSeries(f.coeffs[1:] * np.arange(1, f.order + 1))


def integral(f: TruncatedSeries, constant: complex = 0.0) -> TruncatedSeries:
    """Termwise antiderivative; the order rises by one."""
    c = np.concatenate([[constant], f.coeffs / np.arange(1, f.order + 2)])
    return TruncatedSeries(c)


def log(f: TruncatedSeries) -> TruncatedSeries:
    """Principal-branch logarithm, ``log c_0 + integral of f'/f``."""
    c0 = f.coeffs[0]
    _check_constant(c0)
    if f.order == 0:
        return TruncatedSeries([np.log(c0)])
    ratio = div(derivative(f), f.truncate(f.order - 1))
    return integral(ratio, np.log(c0))


def power(f: TruncatedSeries, s: complex) -> TruncatedSeries:
    """Principal branch of ``f**s`` via ``exp(s log f)``."""
    return exp(log(f) * s)


def compose(f: TruncatedSeries, g: TruncatedSeries) -> TruncatedSeries:
    """Taylor coefficients of ``f(g(z))`` for ``g(0) == 0``.

    Raises
    ------
    NonzeroInnerConstant
        if ``g(0) != 0``; such compositions have to be reduced algebraically.
    """
    if g.coeffs[0] != 0:
        raise NonzeroInnerConstant(f"inner series has g(0) = {g.coeffs[0]!r}")
    n = min(f.order, g.order)
    gc = g.coeffs[: n + 1]
    fc = f.coeffs[: n + 1]
    # Horner in g; because g(0) = 0 only the first n+1 coefficients of f matter
    h = np.zeros(n + 1, complex)
    for k in range(n, -1, -1):
        h = np.convolve(h, gc)[: n + 1]
        h[0] += fc[k]
    return TruncatedSeries(h)


def substitute_power(f: TruncatedSeries, m: int, order: int | None = None) -> TruncatedSeries:
    """Coefficients of ``f(z**m)``, exact up to ``order`` (default ``m * f.order``)."""
    if m < 1:
        raise ValueError("m must be >= 1")
    if order is None:
        order = m * f.order
    c = np.zeros(order + 1, complex)
    k = np.arange(0, order // m + 1)
    k = k[k <= f.order]
    c[k * m] = f.coeffs[k]
    return TruncatedSeries(c)


def scale_argument(f: TruncatedSeries, a: complex) -> TruncatedSeries:
    """Coefficients of ``f(a z)``."""
    return TruncatedSeries(f.coeffs * complex(a) ** np.arange(f.order + 1))


def evaluate(f: TruncatedSeries, z):
    """Horner evaluation of the truncated polynomial at ``z`` (scalar or array)."""
    out = P.polyval(np.asarray(z, dtype=complex), f.coeffs)
    return complex(out) if np.ndim(out) == 0 else out


def sup_norm_coeffs(f: TruncatedSeries) -> float:
    return float(np.max(np.abs(f.coeffs)))
