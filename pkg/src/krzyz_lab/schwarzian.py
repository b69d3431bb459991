"""Schwarzian derivatives, hyperbolic B-norms and the Ahlfors-Weill field.

The B-norm of a holomorphic ``phi`` on the unit disk is
``sup (1 - |z|^2)^2 |phi(z)|``. It cannot be computed exactly from samples,
so :func:`b_norm` returns a lower bound from a nested polar grid (plus a
local polish of the best grid point) and reports whether refinement has
settled.

Ahlfors-Weill convention: the Schwarzian ``S_w`` is a series on the disk.
The extension field is evaluated for ``zeta`` in the disk, with the exterior
point ``1/conj(zeta)`` carried back into the disk by inversion ``z -> 1/z``,
i.e. ``S_w`` is sampled at ``conj(zeta)``::

    nu(zeta) = -1/2 (|zeta|^2 - 1)^2 (zeta^2 / conj(zeta)^2) S_w(conj(zeta))

so that ``|nu(zeta)| = 1/2 (1 - |zeta|^2)^2 |S_w(conj(zeta))| <= ||S_w||_B / 2``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize

from . import series as S
from .defaults import BNORM_ANGLES, BNORM_MAX_REFINE, BNORM_RADII, BNORM_RTOL, EPS_DIV
from .errors import NearZeroConstantTerm, NormTooLarge
from .series import TruncatedSeries


def schwarzian(w: TruncatedSeries) -> TruncatedSeries:
    """Series of ``(w''/w')' - 1/2 (w''/w')^2``, of order ``N - 3``."""
    if w.order < 3:
        raise ValueError("schwarzian needs a series of order >= 3")
    d1 = S.derivative(w)
    if abs(d1.coeffs[0]) <= EPS_DIV:
        raise NearZeroConstantTerm("w'(0) vanishes; w is not locally univalent at 0")
    d2 = S.derivative(d1)
    pre = S.div(d2, d1.truncate(d2.order))          # w''/w', order N-2
    return S.derivative(pre) - 0.5 * S.mul(pre, pre).truncate(w.order - 3)


def mobius(f: TruncatedSeries, a: complex, b: complex, c: complex, d: complex) -> TruncatedSeries:
    """Series of ``(a f + b)/(c f + d)``; needs ``c f(0) + d != 0``."""
    return S.div(a * f + b, c * f + d)


@dataclass(frozen=True)
class BNormEstimate:
    value: float
    grid: tuple[int, int]
    witness: complex
    converged: bool = True


def _weighted(phi: TruncatedSeries, z):
    return (1.0 - np.abs(z) ** 2) ** 2 * np.abs(S.evaluate(phi, z))


def _grid(n_rad: int, n_ang: int):
    # r = 1 - 10^(-s): geometric accumulation at the boundary, r = 0 included
    s = np.linspace(0.0, 4.0, n_rad)
    r = 1.0 - 10.0 ** (-s)
    theta = 2.0 * np.pi * np.arange(n_ang) / n_ang
    return r, (r[:, None] * np.exp(1j * theta)[None, :]).ravel()


def _grid_weighted(phi: TruncatedSeries, r: np.ndarray, n_ang: int) -> np.ndarray:
    # on each circle the values are a DFT of c_j r^j; folding the coefficients
    # mod n_ang keeps this exact when the degree exceeds the node count
    c = phi.coeffs[None, :] * r[:, None] ** np.arange(phi.order + 1)[None, :]
    pad = -c.shape[1] % n_ang
    folded = np.pad(c, ((0, 0), (0, pad))).reshape(r.size, -1, n_ang).sum(axis=1)
    vals = np.fft.ifft(folded, axis=1) * n_ang
    return ((1.0 - r[:, None] ** 2) ** 2 * np.abs(vals)).ravel()


def _polish(phi: TruncatedSeries, z0: complex) -> tuple[float, complex]:
    c, j = phi.coeffs, np.arange(phi.order + 1)

    def neg(x):
        # scalar power sum; polyval's per-call overhead dominates here
        z = complex(x[0], x[1])
        a = abs(z)
        if a >= 1.0:
            return 0.0
        return -(1.0 - a * a) ** 2 * abs(c @ z ** j)

    res = minimize(neg, [z0.real, z0.imag], method="Nelder-Mead",
                   options={"xatol": 1e-12, "fatol": 1e-15, "maxiter": 2000})
    z = complex(res.x[0], res.x[1])
    if abs(z) < 1.0:
        return float(_weighted(phi, z)), z
    return float(_weighted(phi, z0)), z0


def b_norm(phi: TruncatedSeries, n_rad: int = BNORM_RADII, n_ang: int = BNORM_ANGLES,
           rtol: float = BNORM_RTOL, max_refine: int = BNORM_MAX_REFINE) -> BNormEstimate:
    """Lower bound for ``sup_D (1 - |z|^2)^2 |phi(z)|``.

    The polar grid is refined by bisection in both directions (each grid
    contains the previous one) until two successive estimates differ by less
    than ``rtol`` relative; estimates never decrease along the refinement.
    """
    best, witness = -1.0, 0j
    prev = None
    converged = False
    for level in range(max_refine + 1):
        R = (n_rad - 1) * 2 ** level + 1
        A = n_ang * 2 ** level
        r, z = _grid(R, A)
        vals = _grid_weighted(phi, r, A)
        k = int(np.argmax(vals))
        cand, cz = float(vals[k]), complex(z[k])
        if cand > 0.0:
            cand, cz = _polish(phi, cz)
        if cand > best:
            best, witness = cand, cz
        if prev is not None and abs(best - prev) <= rtol * max(abs(best), 1e-300):
            converged = True
            break
        prev = best
    # recompute at the witness so that the invariant holds to rounding
    value = float(_weighted(phi, witness))
    return BNormEstimate(value, (R, A), witness, converged)


@dataclass(frozen=True)
class BeltramiSample:
    point: complex
    value: complex


def aw_beltrami_field(S_w: TruncatedSeries, zeta) -> np.ndarray:
    """Vectorised Ahlfors-Weill Beltrami coefficient (no norm check)."""
    zeta = np.asarray(zeta, dtype=complex)
    zc = np.conj(zeta)
    with np.errstate(divide="ignore", invalid="ignore"):
        phase = np.where(zeta == 0, 1.0 + 0j, zeta ** 2 / np.where(zc == 0, 1, zc) ** 2)
    return -0.5 * (np.abs(zeta) ** 2 - 1.0) ** 2 * phase * S.evaluate(S_w, zc)


def aw_beltrami(S_w: TruncatedSeries, zeta: complex, norm: float | None = None) -> BeltramiSample:
    """Ahlfors-Weill Beltrami coefficient at ``zeta`` (``|zeta| < 1``).

    Raises
    ------
    NormTooLarge
        when the B-norm estimate of ``S_w`` is not below 2.
    """
    if norm is None:
        norm = b_norm(S_w).value
    if norm >= 2.0:
        raise NormTooLarge(f"B-norm estimate {norm:.6g} >= 2")
    zeta = complex(zeta)
    if abs(zeta) >= 1.0:
        raise ValueError("zeta must lie in the unit disk")
    return BeltramiSample(zeta, complex(aw_beltrami_field(S_w, zeta)))


def partial_sum(f: TruncatedSeries, m: int) -> TruncatedSeries:
    """``s_m = c_0 + ... + c_{m-1} z^{m-1}`` kept at the order of ``f``."""
    c = np.array(f.coeffs)
    c[m:] = 0.0
    return TruncatedSeries(c)


def truncation_gap(f: TruncatedSeries, m: int) -> float:
    """B-norm estimate of ``s_m - f`` for a series with all ``|c_n| < 1/2``."""
    if np.any(np.abs(f.coeffs) >= 0.5):
        raise ValueError("truncation_gap expects all |c_n| < 1/2")
    if m > f.order:
        return 0.0
    return b_norm(f - partial_sum(f, m)).value


def geometric_rate(m: int) -> float:
    """The geometric rate ``2^-(m-1)`` claimed for :func:`truncation_gap`."""
    return 2.0 ** (-(m - 1))


def tail_majorant(m: int) -> float:
    """``1/2 sup_{0<r<1} (1 - r)(1 + r)^2 r^m``.

    This is what the coefficient bound ``|c_n| < 1/2`` gives for the B-norm of
    the tail ``sum_{n>=m} c_n z^n``; it decays like ``2/(e m)``, not
    geometrically.
    """
    # stationary point of (1-r)(1+r)^2 r^m solves (m+3) r^2 - r - m = 0
    r = (1.0 + np.sqrt(1.0 + 4.0 * m * (m + 3))) / (2.0 * (m + 3))
    return 0.5 * (1 - r) * (1 + r) ** 2 * r ** m
