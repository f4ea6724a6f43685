"""Closed-form layer: anchors recomputed at high precision, exactness, branches.

Every numeric anchor is recomputed in-test with mpmath at 30 digits from its
elementary expression, then compared against both a frozen decimal and the
package value.  The frozen decimals guard against silent drift in either
route.
"""

import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import isospectra as iso
from isospectra.analytic_spectra import (
    _edges_gapped,
    _edges_gapless,
    _s_gapped,
    _s_gapless,
    _u_gapped,
    _u_gapless,
)

mp.mp.dps = 30

FROZEN = {
    "u_c": "0.2612015585585022846886536",
    "s_at_u_c": "-0.6554651081081643819780131",
    "u_beta_3": "0.1510117765393787071216153",
    "s_beta_2": "-0.7404146265058631184282256",
    "s_beta_3": "-0.8904669227310321588034816",
    "a_beta_2": "0.02525512860841095090135796",
    "b_beta_2": "2.474744871391589049098642",
    "b_beta_1": "2.928203230275509174109785",
}


class TestAnchors:
    def test_u_critical(self):
        want = mp.log(mp.mpf(2) / 3) + mp.mpf(2) / 3
        assert mp.almosteq(want, mp.mpf(FROZEN["u_c"]), abs_eps=mp.mpf("1e-24"))
        assert abs(iso.U_CRITICAL - float(want)) < 1e-12
        assert abs(iso.u_of_beta(1.5) - float(want)) < 1e-12

    def test_s_at_the_gap_opening(self):
        want = -mp.mpf(1) / 4 - mp.log(mp.mpf(3) / 2)
        assert mp.almosteq(want, mp.mpf(FROZEN["s_at_u_c"]), abs_eps=mp.mpf("1e-24"))
        assert iso.entropy_density_s(iso.U_CRITICAL) == pytest.approx(float(want), abs=1e-12)

    def test_u_at_beta_3(self):
        want = mp.log(mp.mpf(5) / 6) + mp.mpf(1) / 3
        assert mp.almosteq(want, mp.mpf(FROZEN["u_beta_3"]), abs_eps=mp.mpf("1e-24"))
        assert iso.u_of_beta(3.0) == pytest.approx(float(want), abs=1e-14)

    def test_s_on_the_gapped_branch(self):
        for beta, key in ((2, "s_beta_2"), (3, "s_beta_3")):
            want = mp.log(mp.mpf(1) / beta - mp.mpf(1) / (2 * beta ** 2)) / 2 - mp.mpf(1) / 4
            assert mp.almosteq(want, mp.mpf(FROZEN[key]), abs_eps=mp.mpf("1e-24"))
            u = iso.u_of_beta(float(beta))
            assert iso.entropy_density_s(u) == pytest.approx(float(want), abs=1e-12)

    def test_gapped_edges(self):
        r = mp.sqrt(mp.mpf(3) / 2)
        a = (r - 1) ** 2 / 2
        b = (r + 1) ** 2 / 2
        assert mp.almosteq(a, mp.mpf(FROZEN["a_beta_2"]), abs_eps=mp.mpf("1e-24"))
        assert mp.almosteq(b, mp.mpf(FROZEN["b_beta_2"]), abs_eps=mp.mpf("1e-24"))
        sup = iso.support_edges(2.0)
        assert sup.a == pytest.approx(float(a), abs=1e-15)
        assert sup.b == pytest.approx(float(b), abs=1e-15)

    def test_gapless_edge(self):
        want = 8 / (mp.sqrt(3) + 1)
        assert mp.almosteq(want, mp.mpf(FROZEN["b_beta_1"]), abs_eps=mp.mpf("1e-24"))
        sup = iso.support_edges(1.0)
        assert sup.a == 0.0
        assert sup.b == pytest.approx(float(want), abs=1e-15)


class TestExactness:
    def test_unconstrained_point(self):
        assert iso.u_of_beta(0.0) == 0.5
        sup = iso.support_edges(0.0)
        assert (sup.a, sup.b) == (0.0, 4.0)
        assert iso.beta_of_u(0.5) == 0.0
        assert iso.entropy_density_s(0.5) == -0.5
        assert iso.log_volume(0.5, 50) == -1250.0

    def test_critical_values_dict(self):
        cv = iso.critical_values()
        assert cv["beta_c"] == 1.5
        assert cv["u_c"] == iso.U_CRITICAL

    def test_support_width(self):
        sup = iso.support_edges(2.0)
        assert sup.width == sup.b - sup.a


class TestBranchContinuity:
    def test_u_matches_across_the_junction(self):
        assert abs(_u_gapped(1.5) - _u_gapless(1.5)) < 1e-10

    def test_edges_match_across_the_junction(self):
        a_g, b_g = _edges_gapped(1.5)
        a_l, b_l = _edges_gapless(1.5)
        assert abs(a_g - a_l) < 1e-10
        assert abs(b_g - b_l) < 1e-10
        assert a_g == pytest.approx(0.0, abs=1e-15)
        assert b_g == pytest.approx(8.0 / 3.0, abs=1e-12)

    def test_s_matches_across_the_junction(self):
        assert abs(_s_gapped(1.5) - _s_gapless(1.5)) < 1e-12


class TestMonotonicity:
    def test_u_strictly_decreasing(self):
        betas = np.linspace(0.0, 8.0, 81)
        us = np.array([iso.u_of_beta(b) for b in betas])
        assert np.all(np.diff(us) < 0.0)
        assert us.max() == 0.5
        assert us.min() > 0.0

    def test_upper_edge_decreasing_lower_edge_increasing(self):
        betas = np.linspace(0.0, 8.0, 41)
        edges = [iso.support_edges(b) for b in betas]
        assert np.all(np.diff([e.b for e in edges]) < 0.0)
        a_vals = np.array([e.a for e in edges])
        gapped = betas > 1.5
        assert np.all(a_vals[~gapped] == 0.0)
        assert np.all(np.diff(a_vals[gapped]) > 0.0)

    def test_s_decreasing_away_from_the_unconstrained_point(self):
        us = np.linspace(0.05, 0.5, 46)
        ss = np.array([iso.entropy_density_s(u) for u in us])
        assert np.all(np.diff(ss) > 0.0)  # s rises toward its maximum at u = 1/2
        assert ss.max() == -0.5


class TestRoundTrips:
    @pytest.mark.parametrize("beta", [0.01, 0.3, 1.0, 1.5, 1.7, 3.0, 10.0])
    def test_beta_u_beta(self, beta):
        assert iso.beta_of_u(iso.u_of_beta(beta)) == pytest.approx(beta, abs=1e-8)

    @pytest.mark.parametrize("u", [0.01, 0.1, iso.U_CRITICAL, 0.3, 0.45, 0.5])
    def test_u_beta_u(self, u):
        assert iso.u_of_beta(iso.beta_of_u(u)) == pytest.approx(u, abs=1e-12)


class TestRejections:
    def test_bad_beta(self):
        for bad in (-1.0, float("nan"), float("inf")):
            with pytest.raises(ValueError):
                iso.u_of_beta(bad)
            with pytest.raises(ValueError):
                iso.support_edges(bad)

    def test_bad_u(self):
        with pytest.raises(ValueError):
            iso.beta_of_u(0.0)
        with pytest.raises(ValueError):
            iso.beta_of_u(0.51)
        with pytest.raises(ValueError):
            iso.phase_of_u(-0.1)
        with pytest.raises(ValueError):
            iso.entropy_density_s(0.0)
        with pytest.raises(ValueError):
            iso.entropy_density_s(0.7)  # needs n_dim past the evaporation point
        with pytest.raises(ValueError):
            iso.entropy_density_s(5.0, 50)  # exceeds ln(50)

    def test_bad_support(self):
        with pytest.raises(ValueError):
            iso.SupportInterval(-0.1, 1.0)
        with pytest.raises(ValueError):
            iso.SupportInterval(1.0, 1.0)

    def test_bad_quantile(self):
        with pytest.raises(ValueError):
            iso.mp_quantile(0.0)
        with pytest.raises(ValueError):
            iso.mp_quantile(1.0)


class TestPhases:
    def test_of_beta(self):
        assert iso.phase_of_beta(0.0) is iso.Phase.GAPLESS
        assert iso.phase_of_beta(1.5) is iso.Phase.GAPLESS  # boundary included below
        assert iso.phase_of_beta(1.5 + 1e-12) is iso.Phase.GAPPED

    def test_of_u(self):
        assert iso.phase_of_u(0.1) is iso.Phase.GAPPED
        assert iso.phase_of_u(iso.U_CRITICAL) is iso.Phase.GAPLESS
        assert iso.phase_of_u(0.3) is iso.Phase.GAPLESS
        assert iso.phase_of_u(0.5) is iso.Phase.GAPLESS
        assert iso.phase_of_u(0.5 + 1e-12) is iso.Phase.EVAPORATED

    def test_the_two_routes_agree(self):
        for beta in (0.0, 0.7, 1.5, 2.0, 6.0):
            assert iso.phase_of_u(iso.u_of_beta(beta)) is iso.phase_of_beta(beta)


class TestMpDensity:
    def test_spot_values(self):
        sd = iso.mp_density()
        assert sd.eval(1.0) == pytest.approx(math.sqrt(3.0) / (2.0 * math.pi), abs=1e-15)
        assert sd.eval(2.0) == pytest.approx(1.0 / (2.0 * math.pi), abs=1e-15)

    def test_edges_and_outside(self):
        sd = iso.mp_density()
        assert math.isnan(sd.eval(0.0))
        assert sd.eval(4.0) == 0.0
        assert sd.eval(-1.0) == 0.0
        assert sd.eval(5.0) == 0.0

    def test_array_and_scalar_parity(self):
        sd = iso.mp_density()
        lam = np.array([0.5, 1.0, 3.9])
        vec = sd.eval(lam)
        assert vec.shape == (3,)
        for li, vi in zip(lam, vec):
            assert sd.eval(float(li)) == vi

    def test_cdf_endpoints_and_clamping(self):
        assert iso.mp_cdf(0.0) == 0.0
        assert iso.mp_cdf(4.0) == 1.0
        assert iso.mp_cdf(-3.0) == 0.0
        assert iso.mp_cdf(9.0) == 1.0

    def test_cdf_monotone(self):
        lam = np.linspace(0.0, 4.0, 101)
        assert np.all(np.diff(iso.mp_cdf(lam)) > 0.0)

    def test_cdf_derivative_is_the_density(self):
        sd = iso.mp_density()
        h = 1e-6
        for lam in (0.3, 1.0, 2.0, 3.5):
            fd = (iso.mp_cdf(lam + h) - iso.mp_cdf(lam - h)) / (2.0 * h)
            assert fd == pytest.approx(sd.eval(lam), abs=1e-8)

    def test_quantile_roundtrip(self):
        for p in (0.01, 0.25, 0.5, 0.9, 0.999):
            assert iso.mp_cdf(iso.mp_quantile(p)) == pytest.approx(p, abs=1e-9)


def g_oracle(x, eta):
    r = 1.0 / (eta + math.sqrt(eta * eta - 1.0))
    s = r * np.sqrt(1.0 - x * x)
    return np.arctan(s / (1.0 + r * x)) / s


def gt_oracle(x):
    eps = 1.0 + np.asarray(x, dtype=float)
    w = np.sqrt(eps / (2.0 - eps))
    return (np.pi - 2.0 * np.arctan(w)) * w - 1.0


class TestSigma:
    def test_beta_zero_is_the_unconstrained_density(self):
        sd = iso.sigma(0.0)
        ref = iso.mp_density()
        lam = np.linspace(0.1, 3.9, 20)
        assert np.allclose(sd.eval(lam), ref.eval(lam), rtol=0.0, atol=0.0)
        assert (sd.support.a, sd.support.b) == (0.0, 4.0)

    def test_gapped_profile_matches_the_closed_form(self):
        beta = 3.0
        sd = iso.sigma(beta)
        a, b = sd.support.a, sd.support.b
        eta = (b + a) / (b - a)
        lam = np.linspace(a + 1e-3, b - 1e-3, 25)
        x = 2.0 * (lam - a) / (b - a) - 1.0
        want = 8.0 / (math.pi * (b - a) ** 2) * np.sqrt((b - lam) * (lam - a)) \
            * g_oracle(x, eta)
        assert np.max(np.abs(sd.eval(lam) - want)) < 1e-9

    def test_gapless_profile_matches_the_closed_form(self):
        beta = 1.0
        sd = iso.sigma(beta)
        b = sd.support.b
        lam = np.linspace(1e-3, b - 1e-3, 25)
        want = 2.0 / (math.pi * b) * np.sqrt((b - lam) / lam) \
            * (1.0 + 0.25 * beta * b * gt_oracle(2.0 * lam / b - 1.0))
        assert np.max(np.abs(sd.eval(lam) - want)) < 1e-9

    def test_gapped_density_vanishes_at_both_edges(self):
        sd = iso.sigma(3.0)
        a, b = sd.support.a, sd.support.b
        assert sd.eval(a) == 0.0
        assert sd.eval(b) == 0.0
        assert sd.eval(a - 0.01) == 0.0
        assert sd.eval(b + 0.01) == 0.0
        # soft edges: square-root vanishing just inside
        assert 0.0 < sd.eval(a + 1e-6) < 1e-2

    def test_gapless_origin_diverges(self):
        sd = iso.sigma(1.0)
        assert math.isnan(sd.eval(0.0))
        assert sd.eval(1e-10) > 1e3

    def test_scalar_and_array_parity(self):
        sd = iso.sigma(2.0)
        lam = np.linspace(sd.support.a + 0.05, sd.support.b - 0.05, 5)
        vec = sd.eval(lam)
        for li, vi in zip(lam, vec):
            assert sd.eval(float(li)) == pytest.approx(vi, abs=1e-14)


class TestEvaporated:
    def test_atom_sits_at_the_trace_fraction(self):
        ev = iso.evaporated_spectrum(1.0, 50)
        mu = 1.0 / math.log(50)
        assert ev.atom.position == mu
        assert ev.atom.weight == mu

    def test_sea_is_the_unconstrained_density(self):
        ev = iso.evaporated_spectrum(1.0, 50)
        ref = iso.mp_density()
        lam = np.linspace(0.1, 3.9, 9)
        assert np.allclose(ev.eval(lam), ref.eval(lam), rtol=0.0, atol=0.0)
        assert (ev.support.a, ev.support.b) == (0.0, 4.0)

    def test_full_evaporation(self):
        ev = iso.evaporated_spectrum(math.log(50), 50)
        assert ev.atom.weight == 1.0

    def test_rejections(self):
        with pytest.raises(ValueError):
            iso.evaporated_spectrum(0.5, 50)
        with pytest.raises(ValueError):
            iso.evaporated_spectrum(4.0, 50)
        with pytest.raises(ValueError):
            iso.evaporated_spectrum(1.0, 1)


class TestEntropyDensity:
    def test_third_branch_value(self):
        want = math.log1p(-1.0 / math.log(50)) - 0.5
        assert iso.entropy_density_s(1.0, 50) == want

    def test_third_branch_reaches_minus_infinity(self):
        assert iso.entropy_density_s(math.log(50), 50) == float("-inf")

    def test_n_dim_ignored_below_the_evaporation_point(self):
        assert iso.entropy_density_s(0.3, 50) == iso.entropy_density_s(0.3)

    def test_log_volume_scales_by_n_squared(self):
        s = iso.entropy_density_s(0.3)
        assert iso.log_volume(0.3, 64) == pytest.approx(64 ** 2 * s, rel=1e-15)


@given(st.floats(min_value=1e-3, max_value=10.0))
@settings(max_examples=60, deadline=None)
def test_u_stays_in_range(beta):
    u = iso.u_of_beta(beta)
    assert 0.0 < u < 0.5
    assert iso.beta_of_u(u) == pytest.approx(beta, abs=1e-7)


@given(st.floats(min_value=0.0, max_value=10.0))
@settings(max_examples=60, deadline=None)
def test_support_is_a_valid_interval(beta):
    sup = iso.support_edges(beta)
    assert 0.0 <= sup.a < sup.b <= 4.0
    assert (sup.a > 0.0) == (beta > 1.5)


@given(st.floats(min_value=0.01, max_value=0.499))
@settings(max_examples=60, deadline=None)
def test_s_is_bounded_above_by_its_maximum(u):
    assert iso.entropy_density_s(u) < -0.5
