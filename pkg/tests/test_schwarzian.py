from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from krzyz_lab import series as S
from krzyz_lab.covering import kappa0
from krzyz_lab.errors import NearZeroConstantTerm, NormTooLarge
from krzyz_lab.schwarzian import (
    aw_beltrami,
    aw_beltrami_field,
    b_norm,
    geometric_rate,
    mobius,
    partial_sum,
    schwarzian,
    tail_majorant,
    truncation_gap,
)
from krzyz_lab.series import TruncatedSeries

angle = st.floats(-math.pi, math.pi)


def koebe_series(order):
    return TruncatedSeries(np.arange(order + 1, dtype=float))


def koebe_schwarzian_oracle(order):
    # -6/(1 - z^2)^2 = -6 sum (k+1) z^{2k}
    c = np.zeros(order + 1)
    k = np.arange(order // 2 + 1)
    c[2 * k] = -6.0 * (k + 1)
    return c


def test_koebe_schwarzian_matches_oracle():
    s = schwarzian(koebe_series(40))
    assert s.order == 37
    assert np.allclose(s.coeffs[:21], koebe_schwarzian_oracle(20), atol=1e-9, rtol=0)


def test_schwarzian_of_mobius_vanishes():
    z = TruncatedSeries.identity(24)
    m = mobius(z, 2.0, 0.3, 0.5j, 1.0)
    assert np.max(np.abs(schwarzian(m).coeffs)) < 1e-10


def test_schwarzian_needs_nonzero_derivative():
    z = TruncatedSeries.identity(8)
    with pytest.raises(NearZeroConstantTerm):
        schwarzian(z * z)


@settings(max_examples=40, deadline=None)
@given(st.lists(st.builds(complex, st.floats(-0.3, 0.3), st.floats(-0.3, 0.3)), min_size=5, max_size=5),
       st.builds(complex, st.floats(-2, 2), st.floats(-2, 2)),
       st.builds(complex, st.floats(-0.2, 0.2), st.floats(-0.2, 0.2)))
def test_mobius_invariance(tail, b, c):
    w = TruncatedSeries([0.0, 1.0] + tail, order=24)
    m = mobius(w, 1.0, b, c, 1.0)
    assert schwarzian(m).allclose(schwarzian(w), 1e-10 * (1 + np.abs(schwarzian(w).coeffs).max()))


@settings(max_examples=40, deadline=None)
@given(st.lists(st.builds(complex, st.floats(-0.3, 0.3), st.floats(-0.3, 0.3)), min_size=5, max_size=5), angle)
def test_rotation_chain_rule(tail, t):
    # S_{w(e^{it} z)}(z) = e^{2it} S_w(e^{it} z)
    e = complex(np.exp(1j * t))
    w = TruncatedSeries([0.0, 1.0] + tail, order=24)
    lhs = schwarzian(S.scale_argument(w, e))
    rhs = S.scale_argument(schwarzian(w), e) * (e * e)
    assert lhs.allclose(rhs, 1e-10 * (1 + np.abs(rhs.coeffs).max()))


def test_b_norm_koebe_and_kappa0():
    est = b_norm(schwarzian(koebe_series(60)))
    assert est.value == pytest.approx(6.0, abs=1e-9)
    assert est.converged
    k = b_norm(kappa0(64).series)
    assert k.value == pytest.approx(0.48394, abs=1e-4)
    assert k.value < 1.0


def test_b_norm_of_constant_and_monotone_in_grid():
    assert b_norm(TruncatedSeries.constant(3.0, 8)).value == pytest.approx(3.0)
    phi = TruncatedSeries([0.1, 0.2j, -0.3, 0.5, 0.0, 1.0])
    coarse = b_norm(phi, n_rad=8, n_ang=16, max_refine=0).value
    fine = b_norm(phi, n_rad=8, n_ang=16, max_refine=3).value
    assert fine >= coarse


@settings(max_examples=30, deadline=None)
@given(st.floats(0.05, 0.95), angle)
def test_dilated_koebe_below_six(t, a):
    # Schwarzians of univalent maps have B-norm at most 6
    w = S.scale_argument(koebe_series(80), t * np.exp(1j * a))
    assert b_norm(schwarzian(w)).value <= 6.0 + 1e-9


def test_aw_field_bound_and_errors():
    rng = np.random.default_rng(3)
    phi = TruncatedSeries(0.2 * (rng.normal(size=10) + 1j * rng.normal(size=10)))
    est = b_norm(phi)
    assert est.value < 2
    z = 0.95 * np.sqrt(rng.uniform(size=400)) * np.exp(2j * np.pi * rng.uniform(size=400))
    assert np.max(np.abs(aw_beltrami_field(phi, z))) <= est.value / 2 + 1e-10
    s = aw_beltrami(phi, 0.3 + 0.1j, norm=est.value)
    assert s.point == 0.3 + 0.1j
    with pytest.raises(NormTooLarge):
        aw_beltrami(phi * 10, 0.1)
    with pytest.raises(ValueError):
        aw_beltrami(phi, 1.2, norm=est.value)


def test_tail_majorant_frozen():
    assert [round(tail_majorant(m), 4) for m in (4, 8, 16)] == [0.1351, 0.0777, 0.0421]
    r = np.linspace(0, 1, 200001)
    for m in (4, 8, 16):
        brute = 0.5 * np.max((1 - r) * (1 + r) ** 2 * r ** m)
        assert tail_majorant(m) == pytest.approx(brute, rel=1e-8)


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 2 ** 32 - 1), st.sampled_from([4, 8, 16]))
def test_truncation_gap_below_tail_majorant(seed, m):
    rng = np.random.default_rng(seed)
    c = 0.499 * np.sqrt(rng.uniform(size=65)) * np.exp(2j * np.pi * rng.uniform(size=65))
    f = TruncatedSeries(c)
    assert truncation_gap(f, m) <= tail_majorant(m) + 1e-12


def test_truncation_gap_tends_to_zero():
    c = 0.49 * np.ones(257)
    f = TruncatedSeries(c)
    gaps = [truncation_gap(f, m) for m in (4, 16, 64)]
    assert gaps[0] > gaps[1] > gaps[2]


def test_truncation_gap_preconditions():
    with pytest.raises(ValueError):
        truncation_gap(TruncatedSeries([0.6, 0.1]), 1)
    f = TruncatedSeries([0.1, 0.2])
    assert truncation_gap(f, 5) == 0.0
    assert np.all(partial_sum(f, 1).coeffs == [0.1, 0.0])
    assert geometric_rate(4) == 0.125


def test_trivial_norm_and_field():
    zero = TruncatedSeries.constant(0.0, 8)
    assert b_norm(zero).value == 0.0
    assert aw_beltrami(zero, 0.4j).value == 0.0
    c = 0.7 - 0.2j
    zeta = 0.5
    want = -0.5 * (abs(zeta) ** 2 - 1) ** 2 * c
    assert aw_beltrami(TruncatedSeries.constant(c, 4), zeta).value == pytest.approx(want, abs=1e-15)


def test_field_bound_at_unit_norm():
    phi = TruncatedSeries([0.0, 0.0, 1.0], order=6)
    phi = phi * (1.0 / b_norm(phi).value)
    zeta = 0.98 * np.sqrt(np.linspace(0, 1, 50))[:, None] * np.exp(1j * np.linspace(0, 6.3, 60))[None, :]
    assert np.max(np.abs(aw_beltrami_field(phi, zeta.ravel()))) <= 0.5 + 1e-10


def test_herglotz_members_have_small_b_norm():
    from krzyz_lab.extremal import Herglotz

    rng = np.random.default_rng(5)
    fam = Herglotz(3)
    for _ in range(10):
        f = TruncatedSeries(fam.coeffs(fam.sample(rng), 64))
        assert b_norm(f).value < 1.0


@settings(max_examples=25, deadline=None)
@given(st.floats(0, 0.5), angle)
def test_univalent_quadratics_inside_six_ball(r, t):
    w = TruncatedSeries([0.0, 1.0, r * np.exp(1j * t)], order=40)
    assert b_norm(schwarzian(w)).value < 6.0


def test_truncation_gap_kappa0_half_example():
    # geometric rate example: kappa_0 / 2 truncated after ten terms
    f = kappa0(256).series * 0.5
    assert truncation_gap(f, 10) <= geometric_rate(10)
