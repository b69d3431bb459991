"""Exchange between the disk class S and the exterior class Sigma, and covering radii.

For ``w(z) = e^{i theta} z + a_2 z^2 + ...`` put ``F(z) = 1/w(1/z)``, so
``F(z) = e^{-i theta} z + b_0 + b_1 z^{-1} + ...``. Writing
``w(z) = e^{i theta} z u(z)`` with ``u(0) = 1`` gives
``F(z) = e^{-i theta} z v(1/z)`` where ``v = 1/u``, hence

    b_j = e^{-i theta} v_{j+1},        a_{k+1} = e^{i theta} u_k.

The coefficient relations come from ``u v = 1``::

    b_0 + e^{-2 i theta} a_2 = 0
    b_m + e^{-i theta} sum_{j=1}^{m} a_{j+1} b_{m-j} + e^{-2 i theta} a_{m+2} = 0

so the exponent table is ``-1`` for every mixed term and ``-2`` for the
pure ``a`` term.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np
from scipy.optimize import minimize_scalar

from . import series as S
from .defaults import KOEBE_RADII
from .series import TruncatedSeries

# exponent of e^{i theta} multiplying b_{m-j} a_{j+1} (j >= 1) and a_{m+2}
MIXED_EXPONENT = -1
PURE_EXPONENT = -2


@dataclass(frozen=True)
class SNormalizedMap:
    series: TruncatedSeries
    theta: float

    def __post_init__(self):
        c = self.series.coeffs
        if abs(c[0]) > 1e-12:
            raise ValueError("S-normalised maps need w(0) = 0")
        if self.series.order < 1 or abs(c[1] - np.exp(1j * self.theta)) > 1e-12:
            raise ValueError("S-normalised maps need w'(0) = e^{i theta}")

    @classmethod
    def from_coeffs(cls, a: Sequence[complex], theta: float = 0.0) -> SNormalizedMap:
        """Build from ``a_2, a_3, ...``; the linear term is ``e^{i theta}``."""
        c = np.concatenate([[0.0, np.exp(1j * theta)], np.asarray(a, complex)])
        return cls(TruncatedSeries(c), float(theta))

    def a(self, k: int) -> complex:
        return complex(self.series.coeffs[k])

    def __call__(self, z):
        return S.evaluate(self.series, z)


@dataclass(frozen=True)
class SigmaNormalizedMap:
    b_coeffs: tuple[complex, ...]
    theta: float

    def __post_init__(self):
        b = tuple(complex(x) for x in self.b_coeffs)
        if not all(np.isfinite(x) for x in b):
            raise ValueError("Sigma coefficients must be finite")
        object.__setattr__(self, "b_coeffs", b)

    @property
    def M(self) -> int:
        return len(self.b_coeffs) - 1

    def __call__(self, z):
        """Laurent evaluation ``e^{-i theta} z + sum_j b_j z^{-j}`` for ``|z| > 1``."""
        z = np.asarray(z, dtype=complex)
        out = np.exp(-1j * self.theta) * z + np.polynomial.polynomial.polyval(1.0 / z, np.asarray(self.b_coeffs))
        return complex(out) if out.ndim == 0 else out


def s_to_sigma(w: SNormalizedMap, M: int) -> SigmaNormalizedMap:
    """Coefficients ``b_0 .. b_M`` of ``1/w(1/z)``."""
    if M < 0 or M + 2 > w.series.order:
        raise ValueError("s_to_sigma needs 0 <= M and M + 2 <= order of w")
    e = np.exp(-1j * w.theta)
    u = e * w.series.coeffs[1: M + 3]              # u_0 .. u_{M+1}
    v = S.reciprocal(TruncatedSeries(u)).coeffs
    return SigmaNormalizedMap(tuple(e * v[1:]), w.theta)


def sigma_to_s(F: SigmaNormalizedMap, M: int | None = None) -> SNormalizedMap:
    """Inverse of :func:`s_to_sigma`; returns ``w`` up to ``z^{M+2}``."""
    if M is None:
        M = F.M
    if M < 0 or M > F.M:
        raise ValueError("sigma_to_s needs 0 <= M <= number of b coefficients - 1")
    e = np.exp(1j * F.theta)
    v = np.concatenate([[1.0], e * np.asarray(F.b_coeffs[: M + 1])])
    u = S.reciprocal(TruncatedSeries(v)).coeffs
    c = np.concatenate([[0.0], e * u])
    c[1] = e                                       # exact, u_0 = 1
    return SNormalizedMap(TruncatedSeries(c), F.theta)


def recursion_residuals(w: SNormalizedMap, F: SigmaNormalizedMap) -> np.ndarray:
    """Residuals of the coefficient relations for ``m = 0 .. M``."""
    M = min(F.M, w.series.order - 2)
    a = w.series.coeffs
    b = np.asarray(F.b_coeffs)
    e1 = np.exp(1j * MIXED_EXPONENT * w.theta)
    e2 = np.exp(1j * PURE_EXPONENT * w.theta)
    res = np.empty(M + 1, complex)
    for m in range(M + 1):
        mixed = sum(a[j + 1] * b[m - j] for j in range(1, m + 1))
        res[m] = b[m] + e1 * mixed + e2 * a[m + 2]
    return res


def leading_terms(b0: complex, b1: complex, theta: float, n: int) -> complex:
    """First two terms of ``a_n`` as a polynomial in ``b_0``.

    ``(-1)^{n-1} e^{i n theta} b_0^{n-1} - (-1)^{n-1} (n-2) e^{i(n-1) theta} b_1 b_0^{n-3}``;
    exact for ``n <= 3`` when ``b_j = 0`` for ``j >= 2``.
    """
    if n < 2:
        raise ValueError("leading terms are defined for n >= 2")
    s = (-1) ** (n - 1)
    lead = s * np.exp(1j * n * theta) * b0 ** (n - 1)
    if n == 2:
        return complex(lead)
    return complex(lead - s * (n - 2) * np.exp(1j * (n - 1) * theta) * b1 * b0 ** (n - 3))


# --------------------------------------------------------------------------- covering radii

def koebe(alpha: float = 0.0, t: float = 1.0) -> Callable:
    """Closed form of ``e^{-i alpha} k(e^{i alpha} t z)/t``, ``k(z) = z/(1 - z)^2``."""
    if not 0.0 < t <= 1.0:
        raise ValueError("dilation t must lie in (0, 1]")
    e = np.exp(1j * alpha)

    def w(z):
        u = e * t * np.asarray(z, dtype=complex)
        return u / (1.0 - u) ** 2 / (e * t)

    return w


def _as_callable(w) -> Callable:
    if isinstance(w, SNormalizedMap):
        return w.__call__
    if isinstance(w, TruncatedSeries):
        return lambda z: S.evaluate(w, z)
    return w


def _min_on_circle(fn: Callable, r: float, nodes: int = 4096) -> tuple[float, float]:
    th = 2 * np.pi * np.arange(nodes) / nodes
    vals = np.abs(fn(r * np.exp(1j * th)))
    k = int(np.argmin(vals))
    h = 2 * np.pi / nodes
    res = minimize_scalar(lambda t: float(np.abs(fn(r * np.exp(1j * t)))),
                          bounds=(th[k] - h, th[k] + h), method="bounded",
                          options={"xatol": 1e-12})
    if res.fun < vals[k]:
        return float(res.fun), float(res.x)
    return float(vals[k]), float(th[k])


def _extrapolate(h: np.ndarray, y: np.ndarray) -> complex:
    # polynomial through the samples, evaluated at h = 0 (Richardson)
    deg = min(len(h) - 1, 2)
    re = np.polyfit(h, np.real(y), deg)[-1]
    im = np.polyfit(h, np.imag(y), deg)[-1] if np.iscomplexobj(y) else 0.0
    return complex(re, im)


@dataclass(frozen=True)
class CoverEstimate:
    radius: float
    boundary_point: complex
    samples: tuple[float, ...]


def cover_estimate(w, radii: Sequence[float] = KOEBE_RADII) -> CoverEstimate:
    """Distance from 0 to ``w(boundary)``, extrapolated from circles ``|z| = r``."""
    fn = _as_callable(w)
    d, pts = [], []
    for r in radii:
        m, t = _min_on_circle(fn, r)
        d.append(m)
        pts.append(complex(fn(r * np.exp(1j * t))))
    h = 1.0 - np.asarray(radii, float)
    radius = _extrapolate(h, np.asarray(d)).real
    point = _extrapolate(h, np.asarray(pts))
    return CoverEstimate(float(radius), point, tuple(d))


def covered_radius(w, a2_sup: float | None = None, radii: Sequence[float] = KOEBE_RADII) -> float:
    """Radius of the largest disk about 0 covered by ``w(D)``.

    ``a2_sup`` declares the family; for series input its ``|a_2|`` must not
    exceed it. Members of the family should satisfy
    ``covered_radius >= 1/(2 a2_sup)``.
    """
    if a2_sup is not None:
        if a2_sup <= 0:
            raise ValueError("a2_sup must be positive")
        if isinstance(w, SNormalizedMap) and w.series.order >= 2 and abs(w.a(2)) > a2_sup + 1e-12:
            raise ValueError(f"|a_2| = {abs(w.a(2)):.6g} exceeds the family bound {a2_sup}")
    return cover_estimate(w, radii).radius


def sigma_boundary(F: SigmaNormalizedMap, nodes: int = 2048,
                   deltas: Sequence[float] = (1e-2, 5e-3, 1e-3)) -> np.ndarray:
    """Boundary image ``F(e^{i phi}(1 + delta))`` extrapolated to ``delta = 0``."""
    phi = 2 * np.pi * np.arange(nodes) / nodes
    z = np.exp(1j * phi)
    samples = np.stack([F(z * (1.0 + d)) for d in deltas])
    h = np.asarray(deltas)
    V = np.vander(h, min(len(h), 3))
    coef = np.linalg.lstsq(V, samples, rcond=None)[0]
    return coef[-1]


def sigma_boundary_check(F: SigmaNormalizedMap, a2_sup: float, tol: float = 1e-6) -> bool:
    """True iff the boundary image of ``F`` lies in ``|W - b_0| <= a2_sup``.

    The disk is centred at ``F``'s own constant term; for the Koebe image
    ``b_0 = -a2_sup`` and this is the disk ``|W + a2_sup| <= a2_sup``.
    """
    if a2_sup <= 0:
        raise ValueError("a2_sup must be positive")
    W = sigma_boundary(F)
    b0 = F.b_coeffs[0] if F.b_coeffs else 0.0
    return bool(np.max(np.abs(W - b0)) <= a2_sup + tol)
