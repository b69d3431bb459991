from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from krzyz_lab import series as S
from krzyz_lab.covering import (
    AnnulusSpec,
    alpha,
    alpha_by_density,
    alpha_threshold,
    annulus_density,
    certify_unit_ball_member,
    count_zeros,
    covering_function,
    disk_automorphism,
    is_selfmap,
    kappa0,
    kappa_rho,
    strip_parameters,
    subordinate,
)
from krzyz_lab.errors import InvalidModulus, NotSelfMap, ZeroOnContour
from krzyz_lab.series import TruncatedSeries

TWO_OVER_E = 2 / math.e

# frozen from the closed form 2 a r* sin t*, tan t* = 1/a
ALPHA_GOLDEN = {
    0.5: 0.31965182793585534,
    0.25: 0.48496818976422307,
    0.1: 0.5943732468827554,
    0.01: 0.6869556386811935,
    1e-4: 0.7220925205079102,
    1e-6: 0.7295404338867327,
}


def test_kappa0_coefficients():
    c = kappa0(8).series.coeffs
    assert np.allclose(c[:4], [1 / math.e, TWO_OVER_E, 0, -2 / (3 * math.e)], atol=1e-12, rtol=0)
    assert kappa0(8).deriv0 == pytest.approx(TWO_OVER_E, abs=1e-15)


def test_annulus_spec_validation():
    for bad in (-0.1, 1.0, 1.5, float("nan")):
        with pytest.raises(InvalidModulus):
            AnnulusSpec(bad)
    with pytest.raises(InvalidModulus):
        kappa_rho(0.0)


@pytest.mark.parametrize("rho", sorted(ALPHA_GOLDEN))
def test_alpha_golden_and_density_route(rho):
    assert alpha(rho) == pytest.approx(ALPHA_GOLDEN[rho], abs=1e-14)
    assert alpha_by_density(rho) == pytest.approx(alpha(rho), abs=1e-8)
    assert kappa_rho(rho, 32).deriv0 == pytest.approx(alpha(rho), abs=1e-12)


def test_alpha_punctured_disk():
    assert alpha(0.0) == TWO_OVER_E
    assert alpha_by_density(0.0) == pytest.approx(TWO_OVER_E, abs=1e-12)


def test_alpha_strictly_decreasing():
    rhos = [1e-6, 1e-4, 0.01, 0.1, 0.5, 0.9]
    vals = [alpha(r) for r in rhos]
    assert all(a > b for a, b in zip(vals, vals[1:]))
    assert all(v < TWO_OVER_E for v in vals)


def test_alpha_threshold_is_whole_range():
    # alpha never reaches 1 because it is bounded by 2/e
    assert alpha_threshold() == pytest.approx(0.999)


def test_kappa_rho_base_point_maximises_derivative():
    # moving the base point radially off the optimum lowers 1/lambda
    rho = 0.25
    a, t, base, _ = strip_parameters(rho)
    best = 1 / annulus_density(rho, base)
    for r in (base * 0.98, base * 1.02, math.sqrt(rho)):
        assert 1 / annulus_density(rho, r) < best
    assert abs(kappa_rho(rho, 32).series.coeffs[0]) == pytest.approx(base, abs=1e-12)


def test_kappa_rho_maps_into_annulus():
    rho = 0.1
    kappa, _ = covering_function(rho)
    th = np.linspace(0, 2 * np.pi, 400, endpoint=False)
    for r in (0.5, 0.9, 0.99):
        m = np.abs(kappa(r * np.exp(1j * th)))
        assert np.all(m > rho) and np.all(m < 1)


def test_series_matches_closed_form():
    kappa, _ = covering_function(0.25)
    ser = kappa_rho(0.25, 64).series
    z = 0.3 * np.exp(1j * np.linspace(0, 6, 7))
    assert np.allclose(S.evaluate(ser, z), kappa(z), atol=1e-12)


@pytest.mark.parametrize("rho", [0.0, 0.1, 0.5])
@pytest.mark.parametrize("r", [0.5, 0.9, 0.99])
def test_covering_is_zero_free(rho, r):
    kappa, dlog = covering_function(rho)
    assert count_zeros(kappa, r, df=dlog) == 0


def test_count_zeros_detects_zeros():
    z = TruncatedSeries.identity(6)
    f = (z - 0.3) * (z + 0.5j) * (z - 0.9)
    assert count_zeros(f, 0.6) == 2
    assert count_zeros(f, 0.95) == 3
    with pytest.raises(ZeroOnContour):
        count_zeros(f, 0.3)


def test_truncated_kappa0_has_spurious_zeros_near_boundary():
    # the partial sum is not the function: zeros appear close to |z| = 1
    assert count_zeros(kappa0(64).series, 0.5) == 0
    assert count_zeros(kappa0(64).series, 0.95) > 0


def test_certificate_for_kappa0():
    cert = certify_unit_ball_member(kappa0(64).series)
    assert cert.ok and cert.reason == "ok"
    assert cert.max_modulus <= 1.0


def test_certificate_flags_zero_and_excess():
    z = TruncatedSeries.identity(64)
    assert certify_unit_ball_member(0.5 * (z - 0.2)).reason == "violation"
    assert certify_unit_ball_member(TruncatedSeries.constant(1.5, 64)).reason == "violation"


def test_selfmap_and_subordination():
    z = TruncatedSeries.identity(32)
    assert is_selfmap(0.9 * z).ok
    assert not is_selfmap(1.2 * z).ok
    with pytest.raises(NotSelfMap):
        subordinate(1.2 * z)
    f = subordinate(S.substitute_power(z, 2, 32))
    assert f.allclose(S.substitute_power(kappa0(16).series, 2, 32), 1e-12)


@settings(max_examples=30, deadline=None)
@given(st.floats(0.0, 0.8), st.floats(-math.pi, math.pi), st.floats(0.0, 0.9))
def test_subordinates_are_bounded_and_zero_free(mod, arg, rho):
    # fhat = disk automorphism scaled into the disk, sup |fhat| <= 0.7
    fhat = 0.7 * disk_automorphism(mod * np.exp(1j * arg), 48)
    f = subordinate(fhat, rho)
    th = np.linspace(0, 2 * np.pi, 256, endpoint=False)
    v = np.abs(S.evaluate(f, 0.9 * np.exp(1j * th)))
    assert v.max() < 1.0
    assert v.min() > rho
    assert count_zeros(f, 0.9) == 0


@settings(max_examples=30, deadline=None)
@given(st.floats(1e-6, 0.95))
def test_alpha_below_punctured_disk_value(rho):
    assert 0 < alpha(rho) < TWO_OVER_E


def test_kappa0_value_at_half():
    assert abs(kappa0(64).series(0.5)) == pytest.approx(math.exp(-1 / 3), abs=1e-12)
    assert abs(kappa0(64).series(0.5)) == pytest.approx(0.7165, abs=1e-4)


def test_deriv0_increases_as_rho_shrinks():
    d = [kappa_rho(r, 64).deriv0 for r in (0.5, 0.1, 0.01, 0.001)]
    assert all(a < b for a, b in zip(d, d[1:]))
    assert abs(kappa_rho(1e-6, 64).deriv0 - TWO_OVER_E) < 0.05


def test_subordinate_examples():
    z = TruncatedSeries.identity(32)
    assert subordinate(z).allclose(kappa0(32).series, 1e-13)
    assert subordinate(0.5 * z).coeffs[1] == pytest.approx(1 / math.e, abs=1e-14)
    zz = subordinate(S.substitute_power(z, 2, 32)).coeffs
    assert np.allclose(zz[:4], [1 / math.e, 0, TWO_OVER_E, 0], atol=1e-14)


def test_selfmap_examples():
    z = TruncatedSeries.identity(16)
    cert = is_selfmap(z)
    assert cert.ok and cert.margin < 0.02
    assert not is_selfmap(2 * z).ok
    assert is_selfmap(0.9 + 0.05 * z).ok


def test_zero_count_examples():
    z = TruncatedSeries.identity(4)
    assert count_zeros(z * z, 0.5) == 2
    assert count_zeros((z - 0.3) * (z - 0.7), 0.5) == 1


@pytest.mark.parametrize("rho", [0.1, 0.25, 0.5])
def test_base_point_maximal_under_automorphisms(rho):
    # deriv0 of kappa o m_a, m_a(0) = a, is |kappa'(a)| (1 - |a|^2)
    kappa, dlog = covering_function(rho)
    best = alpha(rho)
    for k in range(16):
        a = 0.05 * np.exp(2j * np.pi * k / 16)
        d = abs(kappa(a) * dlog(a)) * (1 - abs(a) ** 2)
        assert d <= best + 1e-12


@settings(max_examples=30, deadline=None)
@given(st.floats(0.0, 0.8), st.floats(-math.pi, math.pi), st.floats(0.05, 0.99), st.sampled_from([0.0, 0.01, 0.3, 0.9]))
def test_schwarz_pick_chain(mod, arg, s, rho):
    fhat = s * disk_automorphism(mod * np.exp(1j * arg), 48)
    f = subordinate(fhat, rho)
    assert abs(f.coeffs[1]) <= alpha(rho) + 1e-8
