import math

import numpy as np
import pytest
from scipy.linalg import expm

from celsim.analytic import (
    ETA_TOL,
    coefficients,
    moments,
    noise_correlators,
    steady_state_moments,
    steady_state_variance,
    trajectory,
)
from celsim.model import ModelParams, drift_diffusion

ANCHOR = ModelParams(A=10, kappa=0.5, eta=0.2)

# steady-state anchors, frozen from the fixed point of the moment ODEs
# (independent 3x3 linear solve) for A=10, kappa=0.5, eta=0.2
U_INF, V_INF, W_INF = 4.8, 3.2, 4.245782220824175  # w = 26*sqrt(6)/15
DC_MINUS_INF = 0.5084355583516498  # 9 - 52*sqrt(6)/15
DC_PLUS_INF = 17.49156444164835


def transfer_matrix_oracle(params, t):
    """exp(-t M) for the 2x2 drift matrix M = [[a, c], [-c, b]]."""
    d = drift_diffusion(params)
    m = np.array([[d.drift_aa, d.cross], [-d.cross, d.drift_bb]])
    return expm(-t * m)


class TestCoefficients:
    @pytest.mark.parametrize("eta", [0.0, 1e-6, 0.2, 0.9, 1.0])
    def test_identity_at_t_zero(self, eta):
        c = coefficients(ModelParams(A=10, kappa=0.5, eta=eta), 0.0)
        assert c.A_plus == pytest.approx(1.0, abs=1e-15)
        assert c.A_minus == pytest.approx(1.0, abs=1e-15)
        assert c.B_plus == 0.0 and c.B_minus == 0.0

    def test_full_inversion_collapses_to_single_decay(self):
        p = ModelParams(A=10, kappa=0.5, eta=1.0)
        for t in (0.3, 1.0, 4.0):
            c = coefficients(p, t)
            assert c.A_plus == pytest.approx(math.exp(-0.25 * t), rel=1e-14)
            assert c.B_plus == 0.0 and c.B_minus == 0.0

    def test_matches_matrix_exponential_at_anchor(self):
        c = coefficients(ANCHOR, 1.0)
        m = transfer_matrix_oracle(ANCHOR, 1.0)
        assert c.A_plus == pytest.approx(m[0, 0], abs=1e-13)
        assert c.B_plus == pytest.approx(m[0, 1], abs=1e-13)
        assert c.B_minus == pytest.approx(m[1, 0], abs=1e-13)
        assert c.A_minus == pytest.approx(m[1, 1], abs=1e-13)
        # frozen from the same oracle
        assert c.A_plus == pytest.approx(1.763392755493834, rel=1e-13)
        assert c.B_plus == pytest.approx(-1.2058739686376994, rel=1e-13)

    @pytest.mark.parametrize("eta", [0.0, 0.2, 0.7])
    @pytest.mark.parametrize("t", [0.1, 0.5, 2.0, 7.0])
    def test_matches_matrix_exponential_both_branches(self, eta, t):
        p = ModelParams(A=4.0, kappa=0.7, eta=eta)
        c = coefficients(p, t)
        m = transfer_matrix_oracle(p, t)
        got = np.array([[c.A_plus, c.B_plus], [c.B_minus, c.A_minus]])
        assert np.abs(got - m).max() < 1e-12

    @pytest.mark.parametrize("eta", [0.0, 0.2, 0.7])
    def test_determinant_is_product_of_decay_factors(self, eta):
        p = ModelParams(A=10, kappa=0.5, eta=eta)
        t = np.linspace(0.0, 6.0, 61)
        c = coefficients(p, t)
        det = c.A_plus * c.A_minus - c.B_plus * c.B_minus
        expected = np.exp(-(p.kappa + p.A * p.eta) * t / 2) * np.exp(-p.kappa * t / 2)
        assert np.abs(det - expected).max() < 1e-12

    def test_stable_coefficients_decay(self):
        c = coefficients(ANCHOR, 80.0)
        for value in (c.A_plus, c.A_minus, c.B_plus, c.B_minus):
            assert abs(value) < 1e-8

    def test_negative_time_rejected(self):
        with pytest.raises(ValueError):
            coefficients(ANCHOR, -0.1)


class TestNoiseCorrelators:
    def test_zero_at_t_zero(self):
        assert noise_correlators(ANCHOR, 0.0) == (0.0, 0.0, 0.0)

    def test_zero_at_full_inversion(self):
        cc, dd, cd = noise_correlators(ModelParams(A=10, kappa=0.5, eta=1.0), 3.0)
        assert cc == 0.0 and dd == 0.0 and cd == 0.0

    def test_dd_vanishes_everywhere(self):
        for eta in (0.0, 0.3, 0.9):
            _, dd, _ = noise_correlators(ModelParams(A=5, kappa=0.5, eta=eta), 2.5)
            assert dd == 0.0

    def test_against_collapsed_double_integral(self):
        # delta correlation collapses the double integral to a single one;
        # trapezoid quadrature over a fine grid is the independent oracle
        A, kappa, eta, t = 10.0, 0.5, 0.2, 2.0
        l1 = kappa + A * eta
        s = np.linspace(0.0, t, 200001)
        kern_c = (eta - 1) * np.exp(-l1 * s / 2) + (eta + 1) * np.exp(-kappa * s / 2)
        kern_d = np.exp(-l1 * s / 2) - np.exp(-kappa * s / 2)
        cc_oracle = (A * (1 - eta) / 2) / (4 * eta**2) * np.trapezoid(kern_c**2, s)
        cd_oracle = (A * (1 - eta**2) / 4) / (4 * eta**2) * np.trapezoid(kern_c * kern_d, s)

        cc, _, cd = noise_correlators(ANCHOR, t)
        assert cc == pytest.approx(cc_oracle, abs=5e-10)
        assert cd == pytest.approx(cd_oracle, abs=5e-10)
        # frozen from the quadrature oracle
        assert cc == pytest.approx(21.462743562633655, rel=1e-12)
        assert cd == pytest.approx(-8.519739339589742, rel=1e-12)

    @pytest.mark.parametrize("eta", [0.0, 0.2, 0.6])
    @pytest.mark.parametrize("t", [0.5, 2.0, 8.0])
    def test_correlators_rebuild_the_vacuum_intensity(self, eta, t):
        # <a* a> with no seed equals CC + DD + 2 CD; ties the correlator
        # formulas to the independently validated moment formulas
        p = ModelParams(A=10, kappa=0.5, eta=eta)
        cc, dd, cd = noise_correlators(p, t)
        state = moments(p, t)
        assert cc + dd + 2 * cd == pytest.approx(state.u, rel=1e-12, abs=1e-12)

    def test_limit_branch_against_quadrature(self):
        # the eta -> 0 kernels have exact limits: the single integrals stay
        # regular, so quadrature at eta = 0 checks the limit branch directly
        A, kappa, t = 10.0, 0.5, 2.0
        s = np.linspace(0.0, t, 200001)
        decay = np.exp(-kappa * s / 2)
        kern_c = decay * (2.0 + A * s / 2.0)  # K_C / eta as eta -> 0
        kern_d = decay * (-A * s / 2.0)  # K_D / eta as eta -> 0
        cc_oracle = (A / 8) * np.trapezoid(kern_c**2, s)
        cd_oracle = (A / 16) * np.trapezoid(kern_c * kern_d, s)
        cc, _, cd = noise_correlators(ModelParams(A=A, kappa=kappa, eta=0.0), t)
        assert cc == pytest.approx(cc_oracle, rel=1e-9)
        assert cd == pytest.approx(cd_oracle, rel=1e-9)


class TestMoments:
    def test_vacuum_start_is_zero(self):
        state = moments(ANCHOR, 0.0)
        assert state.u == 0.0 and state.v == 0.0 and state.w == 0.0

    @pytest.mark.parametrize("eta", [0.0, 0.2])
    def test_initial_condition_is_the_seed(self, eta):
        p = ModelParams(A=10, kappa=0.5, eta=eta, nbar_a=2.0, nbar_b=0.5)
        state = moments(p, 0.0)
        assert state.u == pytest.approx(2.0, abs=1e-13)
        assert state.v == pytest.approx(0.5, abs=1e-13)
        assert state.w == 0.0

    def test_long_time_limit_matches_steady_state(self):
        state = moments(ANCHOR, 60.0)
        assert state.u == pytest.approx(U_INF, abs=1e-10)
        assert state.v == pytest.approx(V_INF, abs=1e-10)
        assert state.w == pytest.approx(W_INF, abs=1e-10)

    @pytest.mark.parametrize("eta", [0.0, 0.2])
    def test_decay_to_steady_state_is_exponentially_enveloped(self, eta):
        p = ModelParams(A=10, kappa=0.5, eta=eta, nbar_a=1.5, nbar_b=0.5)
        ss = steady_state_moments(p)
        t = np.arange(0.0, 20.01, 0.1)
        traj = trajectory(p, 20.0, 0.1)
        gap = np.maximum.reduce(
            [np.abs(traj.u - ss.u), np.abs(traj.v - ss.v), np.abs(traj.w - ss.w)]
        )
        envelope = np.exp(-p.kappa * t / 2)
        fitted_k = (gap / envelope)[: len(t) // 2].max()  # fit K on the early half
        assert np.all(gap <= fitted_k * envelope * (1 + 1e-9))

    def test_seed_superposition_is_exact(self):
        # u(t; na, nb) - u(t; 0, 0) is linear in the seeds
        base = ModelParams(A=10, kappa=0.5, eta=0.2)
        t = 1.7
        vac = moments(base, t)
        unit_a = moments(base.with_seeds(1.0, 0.0), t)
        unit_b = moments(base.with_seeds(0.0, 1.0), t)
        mixed = moments(base.with_seeds(2.25, 0.75), t)
        for field in ("u", "v", "w"):
            expected = (
                getattr(vac, field)
                + 2.25 * (getattr(unit_a, field) - getattr(vac, field))
                + 0.75 * (getattr(unit_b, field) - getattr(vac, field))
            )
            assert getattr(mixed, field) == pytest.approx(expected, rel=1e-12, abs=1e-12)

    @pytest.mark.parametrize("eta", [0.0, 0.2, 0.9, 1.0])
    def test_intensities_stay_nonnegative(self, eta):
        p = ModelParams(A=10, kappa=0.5, eta=eta, nbar_a=0.5, nbar_b=1.5)
        traj = trajectory(p, 20.0, 0.05)
        assert traj.u.min() >= -1e-12
        assert traj.v.min() >= -1e-12

    def test_w_is_real_valued(self):
        state = moments(ModelParams(A=5, kappa=0.5, eta=0.4, nbar_a=1, nbar_b=2), 0.8)
        assert isinstance(state.w, float)

    def test_eta_continuity_across_the_limit_branch(self):
        # |eta| below the branch threshold must evaluate the eta -> 0 limit
        base = dict(A=10, kappa=0.5, nbar_a=1.0, nbar_b=0.5)
        limit = moments(ModelParams(eta=0.0, **base), 2.0)
        for eta in (1e-6, -1e-6):
            near = moments(ModelParams(eta=eta, **base), 2.0)
            assert near.u == pytest.approx(limit.u, rel=1e-6)
            assert near.v == pytest.approx(limit.v, rel=1e-6)
            assert near.w == pytest.approx(limit.w, rel=1e-6)

    def test_branch_threshold_is_documented_value(self):
        assert ETA_TOL == 1e-4

    def test_invalid_parameters_rejected(self):
        with pytest.raises(ValueError):
            moments(ModelParams(A=-1, kappa=0.5), 1.0)


class TestSteadyState:
    def test_limit_values_small_gain(self):
        ss = steady_state_moments(ModelParams(A=1, kappa=0.5, eta=0.0))
        assert (ss.u, ss.v, ss.w) == pytest.approx((1.5, 0.5, 1.0), rel=1e-14)
        assert math.isinf(ss.t)

    def test_limit_values_large_gain(self):
        ss = steady_state_moments(ModelParams(A=10, kappa=0.5, eta=0.0))
        assert (ss.u, ss.v, ss.w) == pytest.approx((60.0, 50.0, 55.0), rel=1e-14)

    def test_full_inversion_shuts_off_mode_a(self):
        ss = steady_state_moments(ModelParams(A=10, kappa=0.5, eta=1.0))
        assert ss.u == 0.0 and ss.w == 0.0

    def test_seed_independence(self):
        lean = steady_state_moments(ANCHOR)
        rich = steady_state_moments(ANCHOR.with_seeds(3.0, 1.5))
        assert (lean.u, lean.v, lean.w) == (rich.u, rich.v, rich.w)

    def test_unstable_refused(self):
        with pytest.raises(ValueError, match="no steady state"):
            steady_state_moments(ModelParams(A=10, kappa=0.5, eta=-0.1))

    def test_anchor_against_ode_fixed_point(self):
        # independent oracle: solve M y = -d for the moment ODE matrix
        d = drift_diffusion(ANCHOR)
        m = np.array(
            [
                [-2 * d.drift_aa, 0, -2 * d.cross],
                [0, -2 * d.drift_bb, 2 * d.cross],
                [d.cross, -d.cross, -(d.drift_aa + d.drift_bb)],
            ]
        )
        fixed = np.linalg.solve(m, -np.array([d.diff_aa, 0, d.diff_ab]))
        ss = steady_state_moments(ANCHOR)
        assert np.allclose([ss.u, ss.v, ss.w], fixed, rtol=1e-12)


class TestSteadyStateVariance:
    def test_anchor_minus(self):
        assert steady_state_variance(ANCHOR, "minus") == pytest.approx(
            DC_MINUS_INF, abs=1e-12
        )

    def test_anchor_plus(self):
        assert steady_state_variance(ANCHOR, "plus") == pytest.approx(
            DC_PLUS_INF, abs=1e-11
        )

    def test_vanishing_gain_gives_vacuum_level(self):
        value = steady_state_variance(ModelParams(A=1e-12, kappa=0.5, eta=0.2), "minus")
        assert value == pytest.approx(1.0, abs=1e-9)

    @pytest.mark.parametrize("eta", [0.0, 1e-5, 0.2, 0.5, 0.9, 1.0])
    @pytest.mark.parametrize("sign", ["plus", "minus"])
    def test_agrees_with_moment_route(self, eta, sign):
        p = ModelParams(A=10, kappa=0.5, eta=eta)
        direct = steady_state_variance(p, sign)
        ss = steady_state_moments(p)
        s = 1.0 if sign == "plus" else -1.0
        via_moments = 1.0 + ss.u + ss.v + 2.0 * s * ss.w
        assert direct == pytest.approx(via_moments, rel=1e-10)

    def test_unstable_refused(self):
        with pytest.raises(ValueError):
            steady_state_variance(ModelParams(A=10, kappa=0.5, eta=-0.1), "minus")

    def test_bad_sign_rejected(self):
        with pytest.raises(ValueError):
            steady_state_variance(ANCHOR, "both")
