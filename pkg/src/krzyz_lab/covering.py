"""Universal covering maps of the punctured disk and of round annuli.

For ``0 < rho < 1`` the annulus ``A_rho = {rho < |w| < 1}`` is covered by the
strip ``{0 < Im zeta < pi}`` through ``w = exp(i a zeta)`` with
``a = log(1/rho) / pi``; the strip is reached from the disk by
``zeta = log((1 + z)/(1 - z)) + i pi/2``. The hyperbolic density of the
annulus (curvature -4) at radius ``r`` is therefore::

    lambda(r) = 1 / (2 a r sin(log(1/r) / a))

and ``max |f'(0)|`` over holomorphic ``f: D -> A_rho`` equals
``max_r 1/lambda(r)``, attained where ``tan(t) = 1/a`` with
``t = log(1/r)/a``. The base point is *not* the core circle ``|w| = sqrt(rho)``
unless ``rho -> 1``; as ``rho -> 0`` it tends to ``1/e`` and the maximal
derivative tends to ``2/e``, the value for the punctured disk covered by
``kappa_0(z) = exp((z - 1)/(z + 1))``.

The normalised representative used everywhere has ``kappa(0) > 0`` and
``kappa'(0) > 0``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, NamedTuple

import numpy as np

from . import series as S
from .defaults import (
    CERT_RADII,
    CONTOUR_NODES,
    EPS_ZERO,
    ORDER,
    SELFMAP_ANGLES,
    SELFMAP_MARGIN,
)
from .errors import InvalidModulus, NotSelfMap, ZeroOnContour
from .series import TruncatedSeries

TWO_OVER_E = 2.0 / math.e


@dataclass(frozen=True)
class AnnulusSpec:
    """Inner radius of ``A_rho``; ``rho = 0`` is the punctured disk."""

    rho: float = 0.0

    def __post_init__(self):
        if not (0.0 <= self.rho < 1.0) or not math.isfinite(self.rho):
            raise InvalidModulus(f"rho must lie in [0, 1), got {self.rho!r}")


@dataclass(frozen=True)
class CoveringMap:
    spec: AnnulusSpec
    series: TruncatedSeries
    deriv0: float


class StripParameters(NamedTuple):
    a: float          # w = exp(i a zeta)
    t: float          # Im zeta of the base point, tan(t) = 1/a
    base: float       # kappa(0) = exp(-a t)
    z0: complex       # preimage of the base point under the disk -> strip map


def _as_spec(spec) -> AnnulusSpec:
    return spec if isinstance(spec, AnnulusSpec) else AnnulusSpec(float(spec))


def strip_parameters(rho: float) -> StripParameters:
    if not 0.0 < rho < 1.0:
        raise InvalidModulus(f"strip model needs 0 < rho < 1, got {rho!r}")
    a = math.log(1.0 / rho) / math.pi
    t = math.atan2(1.0, a)
    phi = t - math.pi / 2
    return StripParameters(a, t, math.exp(-a * t), 1j * math.tan(phi / 2))


def annulus_density(rho: float, r):
    """Hyperbolic density of ``A_rho`` at modulus ``r`` (strip model)."""
    a = math.log(1.0 / rho) / math.pi
    r = np.asarray(r, dtype=float)
    return 1.0 / (2.0 * a * r * np.sin(np.log(1.0 / r) / a))


def alpha(spec) -> float:
    """``max |f'(0)|`` over holomorphic maps of the disk into ``A_rho``."""
    spec = _as_spec(spec)
    if spec.rho == 0.0:
        return TWO_OVER_E
    a, t, base, _ = strip_parameters(spec.rho)
    return 2.0 * a * base * math.sin(t)


def alpha_by_density(spec) -> float:
    """Independent route to :func:`alpha`: maximise ``1/lambda`` over the radius numerically."""
    from scipy.optimize import minimize_scalar

    rho = _as_spec(spec).rho
    if rho == 0.0:
        # punctured disk: 1/lambda(r) = 2 r log(1/r), maximal at r = 1/e
        res = minimize_scalar(lambda r: -2 * r * math.log(1 / r), bounds=(1e-12, 1 - 1e-12),
                              method="bounded", options={"xatol": 1e-14})
        return float(-res.fun)
    # parametrise by s = log(1/r) in (0, log(1/rho)) to stay well inside the annulus
    L = math.log(1.0 / rho)
    res = minimize_scalar(lambda s: float(annulus_density(rho, math.exp(-s))),
                          bounds=(L * 1e-9, L * (1 - 1e-9)), method="bounded",
                          options={"xatol": 1e-13 * L})
    return float(1.0 / res.fun)


def alpha_threshold(rhos=None) -> float:
    """Largest sampled ``rho`` with ``alpha(rho) < 1``."""
    if rhos is None:
        rhos = np.linspace(0.0, 0.999, 1000)
    ok = [r for r in rhos if alpha(r) < 1.0]
    return float(max(ok)) if ok else float("nan")


# closed-form routes from a disk-valued series u to kappa(u); all go through
# div/log/exp so the inner constant term may be nonzero.
def _kappa_of(u: TruncatedSeries, spec: AnnulusSpec) -> TruncatedSeries:
    if spec.rho == 0.0:
        return S.exp(S.div(u - 1.0, u + 1.0))
    a, _, _, z0 = strip_parameters(spec.rho)
    v = -1j * u  # pre-rotation making kappa'(0) > 0
    m = S.div(v + z0, 1.0 + np.conj(z0) * v)
    zeta = S.log(S.div(1.0 + m, 1.0 - m)) + 0.5j * math.pi
    return S.exp(1j * a * zeta)


def covering_function(spec) -> tuple[Callable, Callable]:
    """Closed-form ``kappa`` and its logarithmic derivative ``kappa'/kappa``."""
    spec = _as_spec(spec)
    if spec.rho == 0.0:
        def kappa(w):
            w = np.asarray(w, complex)
            return np.exp((w - 1) / (w + 1))

        def dlog(w):
            w = np.asarray(w, complex)
            return 2.0 / (w + 1) ** 2

        return kappa, dlog
    a, _, _, z0 = strip_parameters(spec.rho)
    zc = np.conj(z0)

    def _m(w):
        v = -1j * np.asarray(w, complex)
        return (v + z0) / (1 + zc * v), -1j * (1 - abs(z0) ** 2) / (1 + zc * v) ** 2

    def kappa(w):
        m, _ = _m(w)
        return np.exp(1j * a * (np.log((1 + m) / (1 - m)) + 0.5j * math.pi))

    def dlog(w):
        m, dm = _m(w)
        return 1j * a * 2.0 / (1 - m * m) * dm

    return kappa, dlog


def kappa0(order: int = ORDER) -> CoveringMap:
    """Series of ``exp((z - 1)/(z + 1))``, the covering of the punctured disk."""
    if order < 1:
        raise ValueError("order must be >= 1")
    ser = _kappa_of(TruncatedSeries.identity(order), AnnulusSpec(0.0))
    return CoveringMap(AnnulusSpec(0.0), ser, abs(ser.coeffs[1]))


def kappa_rho(spec, order: int = ORDER) -> CoveringMap:
    """Normalised covering map of ``A_rho`` realising ``alpha(rho)`` at the origin."""
    spec = _as_spec(spec)
    if spec.rho == 0.0:
        raise InvalidModulus("kappa_rho needs 0 < rho < 1; use kappa0 for the punctured disk")
    if order < 1:
        raise ValueError("order must be >= 1")
    ser = _kappa_of(TruncatedSeries.identity(order), spec)
    return CoveringMap(spec, ser, abs(ser.coeffs[1]))


def covering(spec, order: int = ORDER) -> CoveringMap:
    spec = _as_spec(spec)
    return kappa0(order) if spec.rho == 0.0 else kappa_rho(spec, order)


class SelfMapCertificate(NamedTuple):
    ok: bool
    margin: float


def is_selfmap(fhat: TruncatedSeries, samples: int = SELFMAP_ANGLES,
               margin_min: float = SELFMAP_MARGIN) -> SelfMapCertificate:
    """Certify ``|fhat| < 1`` on the disk of radius ``1 - 1/(4N)``.

    By the maximum principle only the circle ``|z| = r_max`` is sampled. The
    returned margin is ``1 - max |fhat|`` there.
    """
    if samples < 64:
        raise ValueError("samples must be >= 64")
    r_max = 1.0 - 1.0 / (4.0 * max(fhat.order, 1))
    theta = 2.0 * np.pi * np.arange(samples) / samples
    peak = float(np.max(np.abs(S.evaluate(fhat, r_max * np.exp(1j * theta)))))
    margin = 1.0 - peak
    return SelfMapCertificate(margin >= margin_min, margin)


def subordinate(fhat: TruncatedSeries, spec=0.0, certify: bool = True) -> TruncatedSeries:
    """Series of ``kappa_rho(fhat(z))`` for a certified disk self-map ``fhat``."""
    spec = _as_spec(spec)
    if certify:
        cert = is_selfmap(fhat)
        if not cert.ok:
            raise NotSelfMap(f"self-map margin {cert.margin:.3g} below {SELFMAP_MARGIN:g}")
    return _kappa_of(fhat, spec)


def count_zeros(f, radius: float, nodes: int = CONTOUR_NODES, df=None,
                eps_zero: float = EPS_ZERO, max_nodes: int = 1 << 16) -> int:
    """Number of zeros of ``f`` in ``|z| < radius`` by the argument principle.

    ``f`` is a :class:`TruncatedSeries` or a callable. For a callable, ``df``
    must return the logarithmic derivative ``f'/f``; the contour guard is then
    finiteness of ``f'/f`` rather than ``|f| > eps_zero``, since closed forms
    such as ``exp((z - 1)/(z + 1))`` underflow near the boundary without
    vanishing. The contour integral of
    ``f'/f`` is a trapezoidal sum, doubled in resolution until two successive
    resolutions round to the same integer within 0.05.
    """
    if isinstance(f, TruncatedSeries):
        fs, dfs = f, S.derivative(f)
        value = lambda z: S.evaluate(fs, z)
        dlog = lambda z, v: S.evaluate(dfs, z) / v
    else:
        if df is None:
            raise ValueError("callable f needs its logarithmic derivative df")
        value = f
        dlog = lambda z, v: df(z)
    def winding(n):
        z = radius * np.exp(2j * np.pi * np.arange(n) / n)
        v = np.asarray(value(z), complex)
        if df is None and np.min(np.abs(v)) <= eps_zero:
            raise ZeroOnContour(f"min |f| = {np.min(np.abs(v)):.3g} on |z| = {radius}")
        d = np.asarray(dlog(z, v), complex)
        if not np.all(np.isfinite(d)):
            raise ZeroOnContour(f"f'/f not finite on |z| = {radius}")
        # (1/2 pi i) \oint f'/f dz = mean of z f'(z)/f(z) over equispaced nodes
        return float(np.mean(z * d).real)

    # a coarse rule can alias onto a wrong integer, so two successive
    # resolutions must agree
    n = nodes
    prev = winding(n)
    while True:
        n *= 2
        w = winding(n)
        k = round(w)
        if abs(w - k) < 0.05 and abs(prev - k) < 0.05:
            return int(k)
        if n >= max_nodes:
            raise ZeroOnContour(f"winding number {w:.4f} unresolved with {n} nodes")
        prev = w


class Certificate(NamedTuple):
    ok: bool
    reason: str
    min_modulus: float
    max_modulus: float


def certify_unit_ball_member(f: TruncatedSeries, radii=CERT_RADII, bound: float = 1.0) -> Certificate:
    """Certify that the function behind the partial sum ``f`` is zero-free on ``|z| <= max(radii)``.

    For a function bounded by ``bound`` every Taylor coefficient is at most
    ``bound``, so on ``|z| = r`` the discarded tail is below
    ``tail = bound r^(N+1)/(1-r)``. If the partial sum has no zeros inside
    and ``min |s_N| > tail`` on the circle, Rouche's theorem transfers the
    zero count to the full function. The modulus check ``max |s_N| <= bound + tail``
    guards the parametrisation.

    ``reason`` is ``"ok"``, ``"inconclusive"`` (tail too large to decide) or
    ``"violation"`` (zeros or modulus excess detected).
    """
    N = f.order
    lo, hi = np.inf, 0.0
    for r in radii:
        tail = bound * r ** (N + 1) / (1.0 - r)
        z = r * np.exp(2j * np.pi * np.arange(CONTOUR_NODES) / CONTOUR_NODES)
        v = np.abs(S.evaluate(f, z))
        lo, hi = min(lo, float(v.min())), max(hi, float(v.max()))
        if v.max() > bound + tail + 1e-12:
            return Certificate(False, "violation", lo, hi)
        if v.min() <= tail + EPS_ZERO:
            return Certificate(False, "inconclusive", lo, hi)
        try:
            k = count_zeros(f, r)
        except ZeroOnContour:
            return Certificate(False, "inconclusive", lo, hi)
        if k != 0:
            return Certificate(False, "violation", lo, hi)
    return Certificate(True, "ok", lo, hi)


def disk_automorphism(a: complex, order: int) -> TruncatedSeries:
    """Series of ``(z + a)/(1 + conj(a) z)``."""
    z = TruncatedSeries.identity(order)
    return S.div(z + a, 1.0 + np.conj(a) * z)
