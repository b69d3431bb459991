"""Hardy-space version of the coefficient problem.

For ``1 < p < inf`` the candidate extremal function is

    f_n = ((1 + z^n)^2 / 2)^{1/p} * exp((z^n - 1)/(z^n + 1))^{1 - 1/p},

assembled as ``exp((1/p) log((1 + z^n)^2 / 2) + (1 - 1/p)(z^n - 1)/(z^n + 1))``.
On the circle ``|f_n|^p = |1 + z^n|^2 / 2`` so ``||f_n||_p = 1`` and
``|c_n(f_n)| = (2/e)^{1 - 1/p}``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize

from . import series as S
from .defaults import HP_NODES, HP_RADII, ORDER, SEED
from .series import TruncatedSeries

TWO_OVER_E = 2.0 / math.e


@dataclass(frozen=True)
class HpSpec:
    p: float
    n: int = 1

    def __post_init__(self):
        if not (self.p > 1.0 and math.isfinite(self.p)):
            raise ValueError("HpSpec needs 1 < p < inf")
        if self.n < 1:
            raise ValueError("HpSpec needs n >= 1")

    @property
    def bound(self) -> float:
        return TWO_OVER_E ** (1.0 - 1.0 / self.p)


def hsz_candidate(spec: HpSpec, order: int = ORDER, inv_p: float | None = None) -> TruncatedSeries:
    """Series of the candidate ``f_n``.

    ``inv_p`` overrides ``1/p``; ``inv_p = 0`` gives ``kappa_0(z^n)``.
    """
    n = spec.n
    if order < n:
        raise ValueError("order must be >= n")
    q = 1.0 / spec.p if inv_p is None else float(inv_p)
    # everything is a function of u = z^n: build in u, then substitute
    m = order // n
    u = TruncatedSeries.identity(m)
    log_sq = 2.0 * S.log(1.0 + u) - math.log(2.0)
    mob = S.div(u - 1.0, u + 1.0)
    g = S.exp(q * log_sq + (1.0 - q) * mob)
    return S.substitute_power(g, n, order)


def _circle_values(f: TruncatedSeries, r: float, nodes: int) -> np.ndarray:
    if nodes < f.order + 1:
        raise ValueError("need at least order + 1 quadrature nodes")
    c = f.coeffs * r ** np.arange(f.order + 1)
    return np.fft.ifft(c, nodes) * nodes


def hp_mean(f: TruncatedSeries, p: float, r: float = 1.0, nodes: int = HP_NODES) -> float:
    """``((1/2 pi) int |f(r e^{it})|^p dt)^{1/p}`` by the trapezoidal rule."""
    if p < 1:
        raise ValueError("p must be >= 1")
    a = np.abs(_circle_values(f, r, nodes))
    return float(np.mean(a ** p) ** (1.0 / p))


def hp_means(f: TruncatedSeries, p: float, radii=HP_RADII, nodes: int = HP_NODES) -> tuple[float, ...]:
    """Integral means at the diagnostic radii (nondecreasing in ``r``)."""
    return tuple(hp_mean(f, p, r, nodes) for r in radii)


def hp_norm(f: TruncatedSeries, p: float, nodes: int = HP_NODES) -> float:
    """H^p norm of the polynomial ``f``, evaluated on the unit circle itself.

    A truncated series is a polynomial, so its boundary values are exact and
    no radial extrapolation is needed; :func:`hp_means` gives the interior
    means used for monotonicity diagnostics.
    """
    return hp_mean(f, p, 1.0, nodes)


@dataclass(frozen=True)
class BoundCheck:
    coeff: float
    bound: float
    slack: float


def hsz_bound_check(spec: HpSpec, order: int = 4 * ORDER) -> BoundCheck:
    f = hsz_candidate(spec, order)
    coeff = float(abs(f.coeffs[spec.n]))
    return BoundCheck(coeff, spec.bound, spec.bound - coeff)


# --------------------------------------------------------------------------- n = 1 sanity sweep

def unit_hp_member(a: complex, lam, theta, p: float, order: int = ORDER) -> TruncatedSeries:
    """A nonvanishing function of unit H^p norm.

    ``(1 + |a|^2)^{-1/p} (1 + a z)^{2/p} exp(-(1 - 1/p) q)`` with ``|a| <= 1`` and
    ``q`` a Herglotz function (``Re q = 0`` a.e. on the circle for atoms). On
    the circle ``|f|^p = |1 + a z|^2 / (1 + |a|^2) * exp(-(p - 1) Re q)`` and
    ``Re q`` vanishes off the atoms, so the mean of ``|f|^p`` is 1.
    """
    if abs(a) > 1.0:
        raise ValueError("|a| must be <= 1")
    lam = np.asarray(lam, float)
    theta = np.asarray(theta, float)
    j = np.arange(order + 1)
    qc = 2.0 * (np.exp(-1j * np.outer(j, theta)) @ lam) if lam.size else np.zeros(order + 1, complex)
    qc[0] = lam.sum()
    z = TruncatedSeries.identity(order)
    lin = S.log(1.0 + a * z) * (2.0 / p)
    expo = lin - (1.0 - 1.0 / p) * TruncatedSeries(qc) - math.log1p(abs(a) ** 2) / p
    return S.exp(expo)


@dataclass(frozen=True)
class SweepResult:
    p: float
    best: float
    bound: float
    norm_at_best: float


def n1_sweep(p: float, starts: int = 16, atoms: int = 2, seed: int = SEED, order: int = ORDER) -> SweepResult:
    """Maximise ``|c_1|`` over :func:`unit_hp_member` and report against the bound."""
    bound = TWO_OVER_E ** (1.0 - 1.0 / p)

    def unpack(x):
        a = complex(x[0], x[1])
        if abs(a) > 1.0:
            a = a / abs(a)
        return a, x[2:2 + atoms] ** 2, x[2 + atoms:]

    def neg(x):
        a, lam, th = unpack(x)
        c = _c1_fast(a, lam, th, p)
        return -c

    best, bx = -1.0, None
    for s in range(starts):
        rng = np.random.default_rng([seed, s])
        x0 = np.concatenate([rng.uniform(-0.7, 0.7, 2), rng.uniform(0.1, 1.0, atoms),
                             rng.uniform(-np.pi, np.pi, atoms)])
        res = minimize(neg, x0, method="Nelder-Mead", options={"xatol": 1e-10, "fatol": 1e-13, "maxfev": 4000})
        if -res.fun > best:
            best, bx = -res.fun, res.x
    a, lam, th = unpack(bx)
    f = unit_hp_member(a, lam, th, p, order)
    return SweepResult(p, float(abs(f.coeffs[1])), bound, hp_norm(f, p))


def _c1_fast(a: complex, lam: np.ndarray, theta: np.ndarray, p: float) -> float:
    # c_1 of exp(h) is h_1 e^{h_0}
    h0 = -(1.0 - 1.0 / p) * lam.sum() - math.log1p(abs(a) ** 2) / p
    h1 = (2.0 / p) * a - (1.0 - 1.0 / p) * 2.0 * np.sum(lam * np.exp(-1j * theta))
    return float(abs(h1) * math.exp(h0))
