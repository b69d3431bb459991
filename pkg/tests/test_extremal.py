from __future__ import annotations

import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from krzyz_lab.covering import certify_unit_ball_member, kappa0, subordinate
from krzyz_lab.errors import IndexBeyondOrder
from krzyz_lab.extremal import (
    Functional,
    Herglotz,
    HerglotzParams,
    Subordination,
    _Certifier,
    build_herglotz,
    canonical_rotation,
    estimate_tau,
    functional_cn,
    functional_In,
    kappa0_power,
    kappa0_power_params,
    maximize,
    parseval_check,
    rotate,
    trace_csv,
)
from krzyz_lab.series import TruncatedSeries

TWO_OVER_E = 2 / math.e
unit_angle = st.floats(-math.pi, math.pi)


def test_single_atom_is_kappa0():
    f = build_herglotz(HerglotzParams([1.0], [math.pi]), 64)
    assert f.allclose(kappa0(64).series, 1e-12)


def test_two_atoms_give_kappa0_of_z2():
    f = build_herglotz(HerglotzParams([0.5, 0.5], [math.pi / 2, -math.pi / 2]), 64)
    z = TruncatedSeries.identity(64)
    assert f.allclose(subordinate(z * z), 1e-12)


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
def test_root_of_unity_pattern(n):
    f = build_herglotz(kappa0_power_params(n), 64)
    assert f.allclose(kappa0_power(n, 64), 1e-12)


def test_zero_weights_give_constant_one():
    f = build_herglotz(HerglotzParams([0.0, 0.0], [0.3, 1.0]), 16)
    assert np.allclose(f.coeffs, [1] + [0] * 16)


def test_negative_weight_rejected():
    with pytest.raises(ValueError):
        HerglotzParams([-0.1], [0.0])


def test_functionals_golden():
    k = kappa0(64).series
    assert functional_cn(k, 1) == pytest.approx(TWO_OVER_E, abs=1e-15)
    assert functional_cn(k, 2) == pytest.approx(0.0, abs=1e-15)
    assert functional_cn(kappa0_power(2, 64), 2) == pytest.approx(TWO_OVER_E, abs=1e-15)
    assert functional_In(k, 2) == pytest.approx(TWO_OVER_E, abs=1e-15)
    assert functional_In(k, 3) == pytest.approx(TWO_OVER_E, abs=1e-15)
    assert functional_In(TruncatedSeries.constant(1 / math.e, 16), 3) == 0.0
    with pytest.raises(IndexBeyondOrder):
        functional_cn(k, 65)
    with pytest.raises(IndexBeyondOrder):
        functional_In(TruncatedSeries([1.0, 0.5]), 2)


def test_rotation_examples():
    k = kappa0(16).series
    assert rotate(k, 1, 1) == k
    assert rotate(k, -1, 1).coeffs[1] == pytest.approx(-TWO_OVER_E)
    with pytest.raises(ValueError):
        rotate(k, 2.0, 1.0)


@settings(max_examples=50, deadline=None)
@given(unit_angle, unit_angle, st.integers(1, 6), st.integers(0, 2 ** 32 - 1))
def test_functionals_rotation_invariant(a1, a2, n, seed):
    rng = np.random.default_rng(seed)
    x = Herglotz(3).sample(rng)
    f = TruncatedSeries(Herglotz(3).coeffs(x, 64))
    g = rotate(f, np.exp(1j * a1), np.exp(1j * a2))
    assert abs(functional_cn(g, n) - functional_cn(f, n)) < 1e-12
    assert abs(functional_In(g, n) - functional_In(f, n)) < 1e-12


@settings(max_examples=30, deadline=None)
@given(unit_angle, unit_angle, st.sampled_from([1, 2, 3]))
def test_canonical_rotation_collapses_orbit(a1, a2, n):
    f = kappa0_power(n, 64)
    g = rotate(f, np.exp(1j * a1), np.exp(1j * a2))
    canon, e1, e2 = canonical_rotation(g, n)
    assert np.max(np.abs(canon.coeffs - f.coeffs)) < 1e-9
    assert abs(abs(e1) - 1) < 1e-12 and abs(abs(e2) - 1) < 1e-12


def test_parseval_split():
    p = parseval_check(kappa0(200).series)
    assert p.head == pytest.approx(4 * math.exp(-2), abs=1e-12)
    assert p.head == pytest.approx(0.54134, abs=1e-4)
    assert p.tail < 0.5
    assert p.sum <= 1 + 1e-6
    assert p.sum == pytest.approx(p.head + p.tail + abs(kappa0(200).series.coeffs[0]) ** 2)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2 ** 32 - 1), st.integers(1, 5))
def test_herglotz_members_are_certified_unit_ball_functions(seed, K):
    fam = Herglotz(K)
    c = fam.coeffs(fam.sample(np.random.default_rng(seed)), 64)
    verdict = _Certifier(64)(c)
    assert verdict in ("ok", "inconclusive")
    # |c_1| <= 2/e for every member
    assert abs(c[1]) <= TWO_OVER_E + 1e-14
    slow = certify_unit_ball_member(TruncatedSeries(c))
    assert (verdict == "ok") == slow.ok or slow.reason == "inconclusive"


def test_certifier_agrees_on_known_cases():
    cert = _Certifier(64)
    assert cert(kappa0(64).series.coeffs) == "ok"
    z = TruncatedSeries.identity(64)
    assert cert((0.5 * (z - 0.2)).coeffs) == "violation"
    assert cert(TruncatedSeries.constant(1.2, 64).coeffs) == "violation"


def test_tau_is_small():
    tau = estimate_tau(Herglotz(2), 64, samples=20)
    assert 0 < tau <= 1e-6


def test_maximize_c1_one_atom():
    rep, res = maximize(Functional("c", 1), Herglotz(1), starts=4, seed=7)
    assert rep.best_value == pytest.approx(TWO_OVER_E, abs=1e-6)
    assert rep.best_value <= TWO_OVER_E + rep.tau
    assert rep.best_params["weights"][0] == pytest.approx(1.0, abs=1e-4)
    # the atom's angle is free: rotating z moves it without changing |c_1|
    assert rep.distance_to_extremal < 1e-3
    assert not rep.exceeds_bound
    assert len(rep.start_values) == 4


def test_maximize_c2_two_atoms():
    rep, _ = maximize(Functional("c", 2), Herglotz(2), starts=6, seed=7)
    assert rep.best_value == pytest.approx(TWO_OVER_E, abs=1e-4)
    w = sorted(rep.best_params["weights"])
    assert w == pytest.approx([0.5, 0.5], abs=1e-3)
    d = abs(rep.best_params["angles"][0] - rep.best_params["angles"][1])
    assert d == pytest.approx(math.pi, abs=1e-3)


def test_maximize_constants_only():
    rep, _ = maximize(Functional("c", 1), Herglotz(0), starts=2, seed=7)
    assert rep.best_value == 0.0


def test_maximize_is_deterministic():
    a, ra = maximize(Functional("c", 2), Herglotz(2), starts=3, seed=11)
    b, rb = maximize(Functional("c", 2), Herglotz(2), starts=3, seed=11)
    assert a.to_json() == b.to_json()
    assert trace_csv(ra) == trace_csv(rb)
    json.loads(a.to_json())


def test_monotone_in_K_with_warm_start():
    small, _ = maximize(Functional("c", 3), Herglotz(2), starts=4, seed=7, budget=3000)
    params = HerglotzParams(small.best_params["weights"], small.best_params["angles"], small.best_params["beta"])
    big, _ = maximize(Functional("c", 3), Herglotz(3), starts=4, seed=7, budget=3000, warm_starts=[params])
    assert big.best_value >= small.best_value - 1e-8


def test_budget_exhaustion_is_soft():
    rep, res = maximize(Functional("c", 3), Herglotz(4), starts=2, seed=7, budget=50)
    assert rep.budget_exhausted
    assert all(r.evaluations <= 50 + 1 for r in res)
    assert rep.best_value > 0


def test_In_functional_reaches_bound():
    rep, _ = maximize(Functional("I", 2), Herglotz(3), starts=4, seed=7)
    assert rep.best_value == pytest.approx(TWO_OVER_E, abs=1e-4)
    assert rep.distance_to_extremal < 1e-3


def test_subordination_family():
    fam = Subordination(0.0, 2)
    rep, _ = maximize(Functional("c", 1), fam, starts=4, seed=7, budget=4000)
    assert rep.best_value <= TWO_OVER_E + rep.tau
    assert rep.best_value == pytest.approx(TWO_OVER_E, abs=5e-3)
    x = np.zeros(fam.dim)
    x[1] = 5.0
    assert np.max(np.abs(np.polynomial.polynomial.polyval(np.exp(1j * np.linspace(0, 7, 50)), fam.fhat(x)))) < 1


def test_annulus_subordination_bounded_by_alpha():
    from krzyz_lab.covering import alpha

    rep, _ = maximize(Functional("c", 1), Subordination(0.25, 2), starts=3, seed=7, budget=3000)
    assert rep.best_value <= alpha(0.25) + 1e-9


def test_report_fields():
    rep, res = maximize(Functional("c", 1), Herglotz(2), starts=2, seed=7, budget=2000)
    d = rep.to_dict()
    for key in ("functional", "best_value", "best_params", "starts", "evaluations", "gap_to_bound",
                "truncation_order", "tau", "seed", "start_values"):
        assert key in d
    assert d["gap_to_bound"] == pytest.approx(TWO_OVER_E - d["best_value"])
    assert trace_csv(res).startswith("start,iter,value\n")


def test_worker_processes_do_not_change_results(monkeypatch):
    args = dict(starts=3, seed=11, budget=400)
    serial, _ = maximize(Functional("c", 2), Herglotz(3), **args)
    monkeypatch.setenv("KRZYZ_LAB_THREADS", "2")
    pooled, _ = maximize(Functional("c", 2), Herglotz(3), **args)
    assert pooled.to_json() == serial.to_json()
