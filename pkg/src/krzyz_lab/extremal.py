"""Coefficient functionals on nonvanishing unit-ball functions and their maximisation.

Candidates come from two families.

``Herglotz(K)``
    ``f = exp(-p)`` with ``p(z) = sum_k lam_k (e^{i t_k} + z)/(e^{i t_k} - z) + i beta``
    and ``lam_k >= 0``. Then ``Re p >= 0``, so ``f`` is zero-free with
    ``|f| <= 1``. ``kappa_0(z^n)`` is the member with ``n`` atoms of weight
    ``1/n`` at the ``n``-th roots of ``-1``.

``Subordination(rho, degree)``
    ``f = kappa_rho(fhat)`` with ``fhat`` a polynomial rescaled into the disk.

:func:`maximize` runs seeded multi-start Nelder-Mead searches and returns an
:class:`OptimizationReport` whose JSON form is byte-reproducible from
``(seed, config)``.
"""

from __future__ import annotations

import json
import math
import os
from dataclasses import asdict, dataclass, field
from typing import Sequence

import numpy as np
from scipy.optimize import minimize

from . import series as S
from .covering import AnnulusSpec, _kappa_of, kappa0
from .defaults import BUDGET, CERT_RADII, CONTOUR_NODES, EPS_ZERO, ORDER, SEED, STARTS, TAU_SAMPLES, THREADS_ENV
from .errors import IndexBeyondOrder
from .series import TruncatedSeries

TWO_OVER_E = 2.0 / math.e


# --------------------------------------------------------------------------- parameters

@dataclass(frozen=True)
class HerglotzParams:
    weights: tuple[float, ...]
    angles: tuple[float, ...]
    beta: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "weights", tuple(float(w) for w in self.weights))
        object.__setattr__(self, "angles", tuple(float(a) for a in self.angles))
        if len(self.weights) != len(self.angles):
            raise ValueError("weights and angles must have equal length")
        if any(w < 0 for w in self.weights):
            raise ValueError("Herglotz weights must be nonnegative")

    @property
    def count(self) -> int:
        return len(self.weights)

    def to_dict(self) -> dict:
        return {"kind": "herglotz", "weights": list(self.weights),
                "angles": list(self.angles), "beta": self.beta}


@dataclass(frozen=True)
class SubordinationParams:
    rho: float
    fhat_coeffs: tuple[complex, ...]

    def to_dict(self) -> dict:
        return {"kind": "subordination", "rho": self.rho,
                "fhat": [[c.real, c.imag] for c in self.fhat_coeffs]}


def build_herglotz(params: HerglotzParams, order: int = ORDER) -> TruncatedSeries:
    """Series of ``exp(-p)`` for the Herglotz data ``params``."""
    return TruncatedSeries(_herglotz_coeffs(np.asarray(params.weights), np.asarray(params.angles),
                                            params.beta, order))


def _herglotz_coeffs(lam: np.ndarray, theta: np.ndarray, beta: float, order: int) -> np.ndarray:
    # (e^{it} + z)/(e^{it} - z) = 1 + 2 sum_j e^{-ijt} z^j
    j = np.arange(order + 1.0)
    p = 2.0 * (np.exp(-1j * np.outer(j, theta)) @ lam) if lam.size else np.zeros(order + 1, complex)
    p[0] = lam.sum() + 1j * beta
    return S._exp_coeffs(-p)


def kappa0_power(n: int, order: int = ORDER) -> TruncatedSeries:
    """``kappa_0(z^n)``."""
    return S.substitute_power(kappa0(max(order // n, 1)).series, n, order)


def kappa0_power_params(n: int) -> HerglotzParams:
    """Herglotz data of ``kappa_0(z^n)``: weight ``1/n`` at the roots of ``z^n = -1``."""
    k = np.arange(n)
    angles = (np.pi + 2 * np.pi * k) / n
    angles = (angles + np.pi) % (2 * np.pi) - np.pi
    return HerglotzParams(tuple([1.0 / n] * n), tuple(angles), 0.0)


# --------------------------------------------------------------------------- functionals

def functional_cn(f: TruncatedSeries, n: int) -> float:
    if not 0 <= n <= f.order:
        raise IndexBeyondOrder(f"c_{n} requested from a series of order {f.order}")
    return float(abs(f.coeffs[n]))


def functional_In(f: TruncatedSeries, n: int) -> float:
    """``max(|c_n(f)|, |c_n(f(z^n))|)``; the second term is ``|c_1(f)|``."""
    if not 1 <= n <= f.order:
        raise IndexBeyondOrder(f"I_{n} requested from a series of order {f.order}")
    fn = S.substitute_power(f, n, f.order)
    return max(abs(f.coeffs[n]), abs(fn.coeffs[n]))


@dataclass(frozen=True)
class Functional:
    kind: str  # "c" or "I"
    n: int

    def __post_init__(self):
        if self.kind not in ("c", "I"):
            raise ValueError("functional kind must be 'c' or 'I'")
        if self.n < 1:
            raise ValueError("functional index must be >= 1")

    @property
    def name(self) -> str:
        return f"{self.kind}_{self.n}"

    def __call__(self, f: TruncatedSeries) -> float:
        return functional_cn(f, self.n) if self.kind == "c" else functional_In(f, self.n)

    def from_coeffs(self, c: np.ndarray) -> float:
        if self.kind == "c":
            return float(abs(c[self.n]))
        return float(max(abs(c[self.n]), abs(c[1])))


def rotate(f: TruncatedSeries, eps1: complex = 1.0, eps2: complex = 1.0) -> TruncatedSeries:
    """Series of ``eps2 * f(eps1 * z)`` for unimodular ``eps1``, ``eps2``."""
    for e in (eps1, eps2):
        if abs(abs(e) - 1.0) > 1e-12:
            raise ValueError("rotation factors must be unimodular")
    return S.scale_argument(f, eps1) * complex(eps2)


def canonical_rotation(f: TruncatedSeries, n: int, tol: float = 1e-9) -> tuple[TruncatedSeries, complex, complex]:
    """Representative of the rotation orbit of ``f`` with ``c_0 > 0`` and ``c_n > 0``.

    The remaining ambiguity (``eps1`` an ``n``-th root of unity) is fixed by
    making the lowest-index coefficient not divisible by ``n`` that exceeds
    ``tol`` in modulus as close to the positive real axis as possible.
    """
    c = f.coeffs
    eps2 = np.exp(-1j * np.angle(c[0])) if abs(c[0]) > tol else 1.0
    eps1 = np.exp(-1j * np.angle(c[n] * eps2) / n) if abs(c[n]) > tol else 1.0
    g = rotate(f, eps1, eps2)
    ks = [k for k in range(1, g.order + 1) if k % n and abs(g.coeffs[k]) > tol]
    if ks:
        k = ks[0]
        roots = np.exp(2j * np.pi * np.arange(n) / n)
        args = np.abs(np.angle(g.coeffs[k] * roots ** k))
        # tie-break on the root index keeps the choice deterministic
        r = roots[int(np.argmin(np.round(args, 12)))]
        g = rotate(g, r, 1.0)
        eps1 = eps1 * r
    return g, complex(eps1), complex(eps2)


@dataclass(frozen=True)
class ParsevalSplit:
    sum: float
    head: float
    tail: float


def parseval_check(f: TruncatedSeries) -> ParsevalSplit:
    """``sum |c_n|^2`` over all stored coefficients, with ``|c_1|^2`` and the ``n >= 2`` part."""
    a = np.abs(f.coeffs) ** 2
    head = float(a[1]) if a.size > 1 else 0.0
    return ParsevalSplit(float(a.sum()), head, float(a[2:].sum()))


# --------------------------------------------------------------------------- families

@dataclass(frozen=True)
class Herglotz:
    K: int

    def __post_init__(self):
        if not 0 <= self.K <= 16:
            raise ValueError("Herglotz family needs 0 <= K <= 16")

    @property
    def dim(self) -> int:
        return 2 * self.K + 1

    def describe(self) -> dict:
        return {"name": "herglotz", "K": self.K}

    def params(self, x: np.ndarray) -> HerglotzParams:
        K = self.K
        ang = (x[K:2 * K] + np.pi) % (2 * np.pi) - np.pi
        return HerglotzParams(tuple(x[:K] ** 2), tuple(ang), float(x[2 * K]))

    def coeffs(self, x: np.ndarray, order: int) -> np.ndarray:
        K = self.K
        return _herglotz_coeffs(x[:K] ** 2, x[K:2 * K], float(x[2 * K]), order)

    def sample(self, rng: np.random.Generator) -> np.ndarray:
        K = self.K
        total = rng.uniform(0.3, 2.0)
        lam = total * rng.dirichlet(np.ones(K)) if K else np.zeros(0)
        return np.concatenate([np.sqrt(lam), rng.uniform(-np.pi, np.pi, K), [rng.uniform(-np.pi, np.pi)]])

    def embed(self, params: HerglotzParams) -> np.ndarray:
        """Vector for ``params``, padded with zero-weight atoms up to ``K``."""
        if params.count > self.K:
            raise ValueError("cannot embed more atoms than the family holds")
        pad = self.K - params.count
        w = np.concatenate([np.sqrt(params.weights), np.zeros(pad)])
        a = np.concatenate([params.angles, np.zeros(pad)])
        return np.concatenate([w, a, [params.beta]])


@dataclass(frozen=True)
class Subordination:
    rho: float = 0.0
    degree: int = 4

    @property
    def dim(self) -> int:
        return 2 * (self.degree + 1)

    def describe(self) -> dict:
        return {"name": "subordination", "rho": self.rho, "degree": self.degree}

    def fhat(self, x: np.ndarray) -> np.ndarray:
        d = self.degree
        c = x[: d + 1] + 1j * x[d + 1:]
        # rescale so that the sampled boundary maximum is at most 1 - 1e-3
        theta = 2 * np.pi * np.arange(1024) / 1024
        peak = float(np.max(np.abs(np.polynomial.polynomial.polyval(np.exp(1j * theta), c))))
        # sampled max underestimates the true max by at most peak * (pi d / 1024)^2 / 2
        peak *= 1.0 + 0.5 * (np.pi * d / 1024) ** 2
        if peak > 1.0 - 1e-3:
            c = c * (1.0 - 1e-3) / peak
        return c

    def params(self, x: np.ndarray) -> SubordinationParams:
        return SubordinationParams(self.rho, tuple(complex(v) for v in self.fhat(x)))

    def coeffs(self, x: np.ndarray, order: int) -> np.ndarray:
        fh = TruncatedSeries(self.fhat(x), order=order)
        return _kappa_of(fh, AnnulusSpec(self.rho)).coeffs

    def sample(self, rng: np.random.Generator) -> np.ndarray:
        d = self.degree
        return rng.normal(0.0, 1.0 / np.sqrt(d + 1), 2 * (d + 1))

    def embed(self, params: SubordinationParams) -> np.ndarray:
        c = np.zeros(self.degree + 1, complex)
        src = np.asarray(params.fhat_coeffs, complex)[: self.degree + 1]
        c[: src.size] = src
        return np.concatenate([c.real, c.imag])


# --------------------------------------------------------------------------- certification

class _Certifier:
    """Vectorised Rouche certificate for partial sums of unit-ball functions.

    See :func:`krzyz_lab.covering.certify_unit_ball_member`; this is the
    same test with precomputed FFT scalings for the optimizer's inner loop.
    """

    def __init__(self, order: int, radii=CERT_RADII, nodes: int = CONTOUR_NODES):
        self.order = order
        self.nodes = max(nodes, 2 * (order + 1))
        j = np.arange(order + 1)
        # only the outermost circle is needed: a zero-free partial sum there is
        # zero-free inside, and max/min modulus on inner circles follow from
        # the maximum principle for f and 1/f
        r = float(max(radii))
        sc = r ** j
        self.stack = np.stack([sc, j * sc])          # rows: f, z f'
        self.tail = r ** (order + 1) / (1.0 - r)

    def __call__(self, c: np.ndarray) -> str:
        n = self.nodes
        vals = np.fft.ifft(c * self.stack, n) * n
        v, zdv = vals[0], vals[1]
        a = np.abs(v)
        tail = self.tail
        if a.max() > 1.0 + tail + 1e-12:
            return "violation"
        if a.min() <= tail + EPS_ZERO:
            return "inconclusive"
        q = zdv / v
        w = q.real.sum() / n
        w_half = q[::2].real.sum() / (n // 2)   # coarser rule from the same nodes
        k = round(w)
        if abs(w - k) > 0.05 or abs(w_half - k) > 0.05:
            return "inconclusive"
        return "violation" if k != 0 else "ok"


# simplex stopping rule; beta and a common shift of the angles are exactly
# flat directions of |c_n|, so a tighter xatol only spends evaluations there
XATOL, FATOL = 1e-7, 1e-13

# rejected candidates score worse than any admissible one (values lie in [0, 1])
_PENALTY = 1.0


class CertificationViolation(RuntimeError):
    pass


# --------------------------------------------------------------------------- report

@dataclass
class StartResult:
    index: int
    value: float
    x: list
    evaluations: int
    certified: int
    rejected: int
    status: str                  # converged | budget_exhausted | aborted
    max_target: float            # largest certified target coefficient seen
    max_any: float               # largest certified |c_k|, 1 <= k <= N
    trace: list = field(default_factory=list)


@dataclass
class OptimizationReport:
    functional: str
    n: int
    family: dict
    best_value: float
    best_params: dict
    starts: int
    evaluations: int
    gap_to_bound: float
    truncation_order: int
    tau: float
    seed: int
    budget: int
    start_values: list
    start_status: list
    certified_evaluations: int
    rejected_evaluations: int
    max_certified_target: float
    max_certified_coeff: float
    exceeds_bound: bool
    budget_exhausted: bool
    best_coeffs: list
    distance_to_extremal: float
    cluster_diameter: float
    near_optimal_starts: int

    def to_dict(self) -> dict:
        return asdict(self)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2)


# --------------------------------------------------------------------------- optimisation

def _run_start(args) -> StartResult:
    functional, family, order, budget, seed, index, x0 = args
    rng = np.random.default_rng([seed, index])
    cert = _Certifier(order)
    if x0 is None:
        # draw until the starting point itself is certified
        for _ in range(100):
            x0 = family.sample(rng)
            if cert(family.coeffs(x0, order)) == "ok":
                break
    stats = {"evals": 0, "certified": 0, "rejected": 0, "max_target": 0.0, "max_any": 0.0, "best": -np.inf}
    trace: list[tuple[int, float]] = []

    def objective(x):
        stats["evals"] += 1
        c = family.coeffs(np.asarray(x), order)
        verdict = cert(c)
        if verdict == "violation":
            raise CertificationViolation(f"start {index}: membership check failed")
        if verdict != "ok":
            stats["rejected"] += 1
            return _PENALTY
        stats["certified"] += 1
        val = functional.from_coeffs(c)
        tgt = float(abs(c[functional.n]))
        stats["max_target"] = max(stats["max_target"], tgt)
        stats["max_any"] = max(stats["max_any"], float(np.max(np.abs(c[1:]))))
        stats["best"] = max(stats["best"], val)
        return -val

    it = [0]

    def callback(xk, *a):
        it[0] += 1
        trace.append((it[0], stats["best"]))

    status = "converged"
    x_best, f_best = np.asarray(x0, float), _PENALTY
    try:
        f_best = objective(x_best)
        # one restart from the terminal simplex vertex polishes the optimum
        for _ in range(2):
            left = budget - stats["evals"]
            if left <= 0:
                status = "budget_exhausted"
                break
            res = minimize(objective, x_best, method="Nelder-Mead", callback=callback,
                           options={"maxfev": left, "xatol": XATOL, "fatol": FATOL, "adaptive": True})
            if res.fun <= f_best:
                x_best, f_best = np.asarray(res.x), float(res.fun)
            if stats["evals"] >= budget:
                status = "budget_exhausted"
                break
    except CertificationViolation:
        status = "aborted"
    value = -f_best if f_best < _PENALTY else 0.0
    return StartResult(index, float(value), [float(v) for v in x_best], stats["evals"], stats["certified"],
                       stats["rejected"], status, stats["max_target"], stats["max_any"],
                       [list(t) for t in trace])


def estimate_tau(family, order: int = ORDER, samples: int = TAU_SAMPLES, seed: int = SEED) -> float:
    """Truncation slack ``tau(N)``.

    Maximal coefficient drift between orders ``N`` and ``2N`` over ``samples``
    random certified family members, plus a rounding floor ``N * eps``.
    """
    rng = np.random.default_rng([seed, 2 ** 31 - 1])
    cert = _Certifier(order)
    drift, got, tries = 0.0, 0, 0
    while got < samples and tries < 20 * samples:
        tries += 1
        x = family.sample(rng)
        lo = family.coeffs(x, order)
        if cert(lo) != "ok":
            continue
        hi = family.coeffs(x, 2 * order)[: order + 1]
        drift = max(drift, float(np.max(np.abs(lo - hi))))
        got += 1
    return drift + order * float(np.finfo(float).eps)


def _workers() -> int:
    try:
        return max(1, int(os.environ.get(THREADS_ENV, "1")))
    except ValueError:
        return 1


def maximize(functional: Functional, family, starts: int = STARTS, seed: int = SEED,
             budget: int = BUDGET, order: int = ORDER, warm_starts: Sequence = (),
             tau: float | None = None, keep_traces: bool = True) -> tuple[OptimizationReport, list[StartResult]]:
    """Multi-start Nelder-Mead maximisation of ``functional`` over ``family``.

    ``warm_starts`` are parameter objects embedded into the family and run
    as extra starts after the random ones. Returns the report and the
    per-start results (with iteration traces).
    """
    if starts < 1:
        raise ValueError("starts must be >= 1")
    if functional.n > order:
        raise IndexBeyondOrder(f"{functional.name} needs order >= {functional.n}")
    if tau is None:
        tau = estimate_tau(family, order, seed=seed)
    jobs = [(functional, family, order, budget, seed, i, None) for i in range(starts)]
    jobs += [(functional, family, order, budget, seed, starts + i, family.embed(p))
             for i, p in enumerate(warm_starts)]
    nw = min(_workers(), len(jobs))
    if nw > 1:
        from concurrent.futures import ProcessPoolExecutor
        with ProcessPoolExecutor(nw) as ex:
            results = list(ex.map(_run_start, jobs))
    else:
        results = [_run_start(j) for j in jobs]
    results.sort(key=lambda r: r.index)
    if not keep_traces:
        for r in results:
            r.trace = []
    return _summarise(functional, family, order, budget, seed, tau, results), results


def _summarise(functional, family, order, budget, seed, tau, results) -> OptimizationReport:
    ok = [r for r in results if r.status != "aborted"]
    # canonical tie-break: highest value, then lowest start index
    best = max(ok, key=lambda r: (r.value, -r.index)) if ok else results[0]
    x = np.asarray(best.x)
    f = TruncatedSeries(family.coeffs(x, order))
    canon, _, _ = canonical_rotation(f, functional.n)
    if functional.kind == "I" and abs(f.coeffs[1]) >= abs(f.coeffs[functional.n]):
        target = kappa0(order).series
        canon, _, _ = canonical_rotation(f, 1)
    else:
        target = kappa0_power(functional.n, order)
    dist = float(np.max(np.abs(canon.coeffs - target.coeffs)))
    near = [r for r in ok if r.value >= best.value - 1e-6]
    diam = 0.0
    vecs = []
    for r in near:
        g = TruncatedSeries(family.coeffs(np.asarray(r.x), order))
        k = 1 if (functional.kind == "I" and abs(g.coeffs[1]) >= abs(g.coeffs[functional.n])) else functional.n
        vecs.append(canonical_rotation(g, k)[0].coeffs)
    for i in range(len(vecs)):
        for j in range(i + 1, len(vecs)):
            diam = max(diam, float(np.max(np.abs(vecs[i] - vecs[j]))))
    max_t = max((r.max_target for r in results), default=0.0)
    max_any = max((r.max_any for r in results), default=0.0)
    return OptimizationReport(
        functional=functional.name,
        n=functional.n,
        family=family.describe(),
        best_value=best.value,
        best_params=family.params(x).to_dict(),
        starts=len(results),
        evaluations=sum(r.evaluations for r in results),
        gap_to_bound=TWO_OVER_E - best.value,
        truncation_order=order,
        tau=tau,
        seed=seed,
        budget=budget,
        start_values=[r.value for r in results],
        start_status=[r.status for r in results],
        certified_evaluations=sum(r.certified for r in results),
        rejected_evaluations=sum(r.rejected for r in results),
        max_certified_target=max_t,
        max_certified_coeff=max_any,
        exceeds_bound=bool(max(max_t, max_any, best.value) > TWO_OVER_E + tau),
        budget_exhausted=any(r.status == "budget_exhausted" for r in results),
        best_coeffs=canon.to_pairs(),
        distance_to_extremal=dist,
        cluster_diameter=diam,
        near_optimal_starts=len(near),
    )


def trace_csv(results: Sequence[StartResult]) -> str:
    lines = ["start,iter,value"]
    for r in results:
        for it, v in r.trace:
            lines.append(f"{r.index},{it},{v!r}")
    return "\n".join(lines) + "\n"
