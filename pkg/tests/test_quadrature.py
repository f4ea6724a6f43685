"""Quadrature layer: exact PV identities, frozen goldens, closed-form cross checks.

The deformation functions are computed by quadrature in the package but have
elementary closed forms, which the tests use as independent oracles:

    g(x, eta) = arctan(r sqrt(1-x^2) / (1 + r x)) / (r sqrt(1-x^2)),
                r = eta - sqrt(eta^2 - 1)          (eta > 1)
    g(x, 1)   = arccos(x) / (2 sqrt(1 - x^2))
    gt(x)     = (x + 1) arccos(x) / sqrt(1 - x^2) - 1

near x = -1 the last one is evaluated through w = sqrt(eps / (2 - eps)),
gt = (pi - 2 arctan w) w - 1, which stays fully accurate at the wall.
"""

import math

import numpy as np
import pytest

import isospectra as iso
from isospectra.quadrature import (
    QuadratureError,
    density_moment,
    deformation_g,
    deformation_g_tilde,
    pv_chebyshev,
    tricomi_residual,
)

GOLD_G = {
    (-0.9, 1.1): 2.090934803946845937568,
    (0.0, 1.1): 0.8890612544869120306483,
    (0.9, 1.1): 0.6273662146228086804115,
    (-0.9, 1.5): 1.492364811593855201615,
    (0.0, 1.5): 0.9552259032664983958271,
    (0.9, 1.5): 0.7404019002902685830347,
    (-0.9, 3.0): 1.179544829947013740768,
    (0.0, 3.0): 0.9903573305261596342054,
    (0.9, 3.0): 0.8650303781681989879668,
}

GOLD_GT = {
    -0.5: 0.209199576156145233727,
    0.0: 0.570796326794896619228,
    0.5: 0.81379936423421785059,
}

# PV of ln(y + 3) at x = 0, frozen from a 40-digit evaluation
GOLD_PV_LOG = 1.067629138159729229524


def g_oracle(x, eta):
    r = 1.0 / (eta + math.sqrt(eta * eta - 1.0))  # cancellation-free at large eta
    s = r * np.sqrt(1.0 - x * x)
    return np.arctan(s / (1.0 + r * x)) / s


def gt_oracle(x):
    eps = 1.0 + np.asarray(x, dtype=float)
    w = np.sqrt(eps / (2.0 - eps))
    return (np.pi - 2.0 * np.arctan(w)) * w - 1.0


class TestPvChebyshev:
    def test_constant_has_zero_pv(self):
        # holds node-by-node, not merely to tolerance
        for x in (-0.7, 0.0, 0.3):
            assert pv_chebyshev(lambda y: np.ones_like(y), x) == 0.0

    def test_linear_gives_pi(self):
        for x in (-0.7, 0.0, 0.3, 0.9):
            assert pv_chebyshev(lambda y: y, x) == pytest.approx(math.pi, abs=1e-13)

    def test_log_kernel_golden(self):
        val = pv_chebyshev(lambda y: np.log(y + 3.0), 0.0)
        assert val == pytest.approx(GOLD_PV_LOG, abs=1e-12)

    def test_array_input_matches_scalars(self):
        xs = np.array([-0.5, 0.1, 0.8])
        vec = pv_chebyshev(lambda y: np.log(y + 2.0), xs)
        assert vec.shape == (3,)
        for xi, vi in zip(xs, vec):
            assert pv_chebyshev(lambda y: np.log(y + 2.0), float(xi)) == pytest.approx(vi, abs=1e-13)

    def test_node_collision_uses_local_slope(self):
        # force x onto a Gauss-Chebyshev node of the first stage; the PV value
        # is smooth in x, so a slightly shifted evaluation is a valid reference
        x = float(np.cos(31 * np.pi / 512))
        val = pv_chebyshev(lambda y: np.log(y + 3.0), x)
        ref = pv_chebyshev(lambda y: np.log(y + 3.0), x + 1e-7)
        assert val == pytest.approx(ref, abs=1e-5)

    def test_rejects_exterior_points(self):
        with pytest.raises(ValueError):
            pv_chebyshev(lambda y: y, 1.0)
        with pytest.raises(ValueError):
            pv_chebyshev(lambda y: y, np.array([0.0, -1.2]))

    def test_rejects_tiny_node_count(self):
        with pytest.raises(ValueError):
            pv_chebyshev(lambda y: y, 0.0, n_nodes=8)

    def test_kink_integrand_fails_loudly(self):
        with pytest.raises(QuadratureError):
            pv_chebyshev(np.abs, 0.3, max_nodes=1024)

    def test_empty_input_passthrough(self):
        out = pv_chebyshev(lambda y: y, np.array([]))
        assert out.size == 0


class TestDeformationG:
    def test_goldens(self):
        for (x, eta), want in GOLD_G.items():
            assert deformation_g(x, eta) == pytest.approx(want, abs=5e-13)

    def test_closed_form_sweep(self):
        # physical deformations stay below eta ~ 1.3 for the usual couplings;
        # 50 already leaves a wide margin
        xs = np.linspace(-0.95, 0.95, 13)
        for eta in (1.01, 1.1, 2.0, 10.0, 50.0):
            got = deformation_g(xs, eta)
            assert np.max(np.abs(got - g_oracle(xs, eta))) < 1e-9

    def test_large_eta_approaches_one(self):
        vals = deformation_g(np.array([-0.8, 0.0, 0.8]), 1e6)
        assert np.max(np.abs(vals - 1.0)) < 1e-5

    def test_decreasing_in_x(self):
        xs = np.linspace(-0.99, 0.99, 21)
        vals = deformation_g(xs, 1.5)
        assert np.all(np.diff(vals) < 0.0)

    def test_eta_one_closed_form(self):
        xs = np.concatenate([-1.0 + np.array([1e-7, 1e-5, 1e-4, 1e-3]),
                             np.linspace(-0.99, 0.99, 21)])
        want = np.arccos(xs) / (2.0 * np.sqrt(1.0 - xs * xs))
        got = deformation_g(xs, 1.0)
        assert np.max(np.abs(got - want) / np.maximum(1.0, np.abs(want))) < 2e-8

    def test_eta_one_refuses_the_wall(self):
        with pytest.raises(QuadratureError):
            deformation_g(-1.0 + 1e-9, 1.0)

    def test_rejects_eta_below_one(self):
        with pytest.raises(ValueError):
            deformation_g(0.0, 0.5)

    def test_rejects_exterior_points(self):
        with pytest.raises(ValueError):
            deformation_g(-1.0, 1.5)


class TestDeformationGTilde:
    def test_goldens(self):
        for x, want in GOLD_GT.items():
            assert deformation_g_tilde(x) == pytest.approx(want, abs=1e-12)

    def test_closed_form_sweep_including_wall(self):
        xs = np.concatenate([
            -1.0 + np.array([1e-12, 1e-9, 1e-7, 1e-6, 1e-5, 5e-5, 1e-4, 2e-4, 1e-3, 1e-2]),
            np.linspace(-0.999, 0.999, 41),
        ])
        got = deformation_g_tilde(xs)
        assert np.max(np.abs(got - gt_oracle(xs))) < 5e-9

    def test_endpoint_limits(self):
        # -1 at the left wall, +1 at the right edge
        assert deformation_g_tilde(-1.0 + 1e-12) == pytest.approx(-1.0, abs=3e-6)
        assert deformation_g_tilde(1.0 - 1e-12) == pytest.approx(1.0, abs=3e-6)

    def test_interior_maximum_at_zero(self):
        # gt(0) = pi/2 - 1 is the exact midpoint value
        assert deformation_g_tilde(0.0) == pytest.approx(math.pi / 2.0 - 1.0, abs=1e-12)

    def test_consistent_with_g_at_eta_one(self):
        xs = np.linspace(-0.9, 0.9, 7)
        lhs = deformation_g_tilde(xs)
        rhs = 2.0 * (xs + 1.0) * deformation_g(xs, 1.0) - 1.0
        assert np.max(np.abs(lhs - rhs)) < 1e-10


class TestDensityMoment:
    # the 1e-6 acceptance tolerance is above these by orders of magnitude on
    # purpose: any regression in the edge handling shows up here first

    @pytest.mark.parametrize("beta", [0.0, 0.5, 1.0, 1.5, 2.0, 3.0, 5.0])
    def test_norm_mean_and_entropy_weight(self, beta):
        sd = iso.sigma(beta)
        assert density_moment(sd, "one") == pytest.approx(1.0, abs=1e-10)
        assert density_moment(sd, "lambda") == pytest.approx(1.0, abs=1e-10)
        assert density_moment(sd, "lambda_log_lambda") == pytest.approx(
            iso.u_of_beta(beta), abs=1e-10)

    def test_evaporated_sea_is_normalized(self):
        ev = iso.evaporated_spectrum(1.0, 50)
        assert density_moment(ev, "one") == pytest.approx(1.0, abs=1e-10)
        assert density_moment(ev, "lambda") == pytest.approx(1.0, abs=1e-10)

    def test_unknown_weight_rejected(self):
        with pytest.raises(ValueError):
            density_moment(iso.mp_density(), "lambda_squared")

    def test_discontinuous_integrand_fails_loudly(self):
        class Jump:
            support = iso.SupportInterval(0.0, 1.0)

            @staticmethod
            def eval(lam):
                return np.where(lam > 1.0 / 3.0, 1.5, 0.75)

        with pytest.raises(QuadratureError):
            density_moment(Jump(), "one", max_nodes=2048)


class TestTricomiResidual:
    def test_mp_is_exactly_stationary(self):
        rep = tricomi_residual(iso.mp_density(), 0.0)
        assert abs(rep.xi_fit - 1.0) < 1e-10
        assert rep.residual_std < 1e-12

    def test_gapped_density(self):
        rep = tricomi_residual(iso.sigma(3.0), 3.0)
        assert rep.residual_std < 1e-10
        assert rep.residual_max < 1e-9

    def test_gapless_density(self):
        rep = tricomi_residual(iso.sigma(1.0), 1.0)
        assert rep.residual_std < 1e-7

    def test_sample_points_stay_interior(self):
        sd = iso.sigma(2.0)
        rep = tricomi_residual(sd, 2.0, n_points=16)
        assert rep.sample_points.size == 16
        assert rep.sample_points.min() > sd.support.a
        assert rep.sample_points.max() < sd.support.b

    def test_wrong_beta_is_not_stationary(self):
        # the residual check must actually have teeth
        rep = tricomi_residual(iso.sigma(3.0), 2.0)
        assert rep.residual_std > 1e-3

    def test_validation(self):
        with pytest.raises(ValueError):
            tricomi_residual(iso.mp_density(), -1.0)
        with pytest.raises(ValueError):
            tricomi_residual(iso.mp_density(), 0.0, n_points=1)
