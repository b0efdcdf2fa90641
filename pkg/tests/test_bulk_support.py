import math

import numpy as np
import pytest

from svdmimo.bulk_support import (RegimeError, appendixB_scale_verification,
                                  bilateral_supports_general, bilateral_supports_highsnr,
                                  bilateral_validity, gamma_ordering_separable,
                                  interference_scale_factors, noise_scale_factors,
                                  quartic_extremes, rho0_zero_supports, s1_inverse, s1_supports,
                                  s2_inverse_highsnr, separability_boundary,
                                  separability_boundary_ratio, unilateral_intervals,
                                  unilateral_separable, unilateral_supports)
from svdmimo.rmt_spectrum import empirical_spectrum
from svdmimo.system_model import (DerivedParams, InterferenceProfile, PilotConfig, SystemParams,
                                  assemble_received, derive_params, sample_realization)


def fig2_system(W=0.0, I_over_P=0.25):
    return SystemParams.from_profile(R=300, T=3, C=1000, L=2, P=0.1, W=W,
                                     profile=InterferenceProfile(kind="flat", I=I_over_P * 0.1))


def fig2_dp(W=0.0, I_over_P=0.25):
    return derive_params(fig2_system(W=W, I_over_P=I_over_P))


def dp_from_ratios(alpha, kappa, r, t, zeta=0.0, R=300):
    return DerivedParams(kappa=kappa, alpha=alpha, r=r, t=t, zeta=zeta,
                         beta_ratio=r / t, R=R, T=max(int(round(alpha * R)), 1),
                         C=int(round(kappa * R)))


class TestUnilateralIntervals:
    def test_center_and_halfwidth(self):
        sys = SystemParams.from_profile(300, 10, 100, 2, 0.1, 1.0,
                                        InterferenceProfile(kind="flat", I=0.025))
        dp = derive_params(sys)
        p_int, _ = unilateral_intervals(dp, 0.1, 0.025, 2)
        center = 0.5 * (p_int.lower + p_int.upper)
        halfwidth = 0.5 * (p_int.upper - p_int.lower)
        assert np.isclose(center, 1.0, rtol=1e-12)
        assert np.isclose(halfwidth, 2 * 0.1 * np.sqrt(((1 / 3) ** 2 + 1 / 3) * 30), rtol=1e-12)
        assert np.isclose(halfwidth, 0.730, atol=5e-4)

    def test_relative_width_vanishes_at_small_load(self):
        dp_small = dp_from_ratios(alpha=1e-6, kappa=2.0, r=1e-5, t=4e-5, R=10 ** 6)
        p_int, _ = unilateral_intervals(dp_small, 0.1, 0.025, 2)
        center = 0.5 * (p_int.lower + p_int.upper)
        assert (p_int.upper - p_int.lower) / center < 0.02

    def test_symmetry_when_equal_powers_single_cell(self):
        dp = fig2_dp()
        p_int, i_int = unilateral_intervals(dp, 0.1, 0.1, 1)
        assert np.isclose(p_int.lower, i_int.lower) and np.isclose(p_int.upper, i_int.upper)

    def test_negative_lower_clamped_with_warning(self):
        sys = SystemParams.from_profile(300, 30, 100, 2, 0.1, 1.0,
                                        InterferenceProfile(kind="flat", I=0.025))
        dp = derive_params(sys)
        with pytest.warns(UserWarning):
            p_int, i_int = unilateral_intervals(dp, 0.1, 0.025, 2)
        assert p_int.lower >= 0 and i_int.lower >= 0


class TestScaleFactors:
    def test_noise_factors_zero_noise(self):
        assert noise_scale_factors(0.1, 0.025, 0.0, 300, 1000) == (1.0, 1.0)

    def test_noise_factor_example(self):
        n_P, _ = noise_scale_factors(0.1, 0.025, 1.0, 300, 1000)
        assert np.isclose(n_P, (1 + 10 / 300) * (1 + 10 / 1000), rtol=1e-12)
        assert np.isclose(n_P, 1.0437, atol=1e-4)

    def test_noise_factors_large_system_limit(self):
        n_P, n_I = noise_scale_factors(0.1, 0.025, 1.0, 3e8, 1e9)
        assert abs(n_P - 1) < 1e-6 and abs(n_I - 1) < 1e-5

    def test_interference_factors_zero_load(self):
        i_P, i_I = interference_scale_factors(0.1, 0.025, 0.0, 10 / 3, 2)
        assert i_P == 1.0 and i_I == 1.0

    def test_interference_factor_example(self):
        i_P, _ = interference_scale_factors(0.4, 0.1, 0.01, 10 / 3, 2)
        assert np.isclose(i_P, (1 + 0.006 / 3) * (1 + 0.02 / 3), rtol=1e-12)
        assert np.isclose(i_P, 1.00868, atol=1e-5)

    def test_iP_grows_as_powers_approach(self):
        vals = [interference_scale_factors(1.0, x, 0.01, 10 / 3, 2)[0]
                for x in (0.1, 0.25, 0.4)]
        assert vals[0] < vals[1] < vals[2]

    def test_equal_powers_singular(self):
        with pytest.raises(ValueError):
            interference_scale_factors(0.1, 0.1, 0.01, 1.0, 2)

    def test_close_powers_flagged(self):
        with pytest.warns(UserWarning):
            interference_scale_factors(0.1, 0.06, 0.01, 1.0, 2)


class TestUnilateralThreshold:
    def test_paper_operating_point(self):
        separable, threshold = unilateral_separable(fig2_dp(W=1.0), 0.1, 1.0, 2)
        assert abs(threshold - 0.61) <= 0.02
        assert separable  # I/P = 0.25 lies below the threshold

    def test_zero_load_threshold_tends_to_one(self):
        dp = dp_from_ratios(alpha=1e-6, kappa=2.0, r=1.0 / (0.1 * 1e6 * 2e6), t=math.inf,
                            zeta=2e6, R=10 ** 6)
        dp = DerivedParams(kappa=dp.kappa, alpha=dp.alpha, r=dp.r, t=dp.r / 0.5,
                           zeta=dp.zeta, beta_ratio=0.5, R=dp.R, T=dp.T, C=dp.C)
        _, threshold = unilateral_separable(dp, 0.1, 1.0, 1)
        assert threshold > 0.98

    def test_threshold_decreasing_in_L(self):
        thresholds = [unilateral_separable(fig2_dp(W=1.0), 0.1, 1.0, L)[1] for L in (1, 2, 4)]
        assert thresholds[0] > thresholds[1] > thresholds[2]

    def test_threshold_decreasing_in_alpha(self):
        dps = [fig2_dp(W=1.0)]
        sys = SystemParams.from_profile(R=300, T=6, C=1000, L=2, P=0.1, W=1.0,
                                        profile=InterferenceProfile(kind="flat", I=0.025))
        dps.append(derive_params(sys))
        t1 = unilateral_separable(dps[0], 0.1, 1.0, 2)[1]
        t2 = unilateral_separable(dps[1], 0.1, 1.0, 2)[1]
        assert t2 < t1

    def test_regime_error_when_load_too_large(self):
        dp = dp_from_ratios(alpha=0.4, kappa=1.0, r=1e-5, t=4e-5)
        with pytest.raises(RegimeError):
            unilateral_separable(dp, 0.1, 1.0, 2)

    def test_scaled_intervals_disjointness_matches_threshold(self):
        # disjointness of the n*i scaled intervals is exactly the inequality
        for ip, expect in ((0.3, True), (0.8, False)):
            est = unilateral_supports(fig2_dp(W=1.0, I_over_P=ip), 0.1, 1.0, 2)
            assert est.separable is expect


class TestS1:
    def test_alpha_zero_reduces_to_reciprocal(self):
        dp = dp_from_ratios(alpha=0.0, kappa=10 / 3, r=3.3333e-5, t=1.3333e-4)
        for G in np.linspace(-3e-4, -1e-5, 25):
            assert abs(s1_inverse(G, dp, 2) - (-1.0 / G)) <= 1e-12 * abs(1 / G)

    def test_pole_at_zero_flagged(self):
        with pytest.warns(UserWarning):
            s1_inverse(0.0, fig2_dp(), 2)

    def test_quartic_root_sanity(self):
        # independent check: quartic roots are stationary points of s1
        dp = fig2_dp()
        Gs = quartic_extremes(dp, 2)
        assert Gs is not None and len(Gs) == 4
        for g in Gs:
            h = abs(g) * 1e-6
            deriv = (s1_inverse(g + h, dp, 2) - s1_inverse(g - h, dp, 2)) / (2 * h)
            curv = (s1_inverse(g + h, dp, 2) - 2 * s1_inverse(g, dp, 2)
                    + s1_inverse(g - h, dp, 2)) / h ** 2
            assert abs(deriv) <= 1e-6 * abs(curv * g)

    def test_fig2_ordering_and_bracketing(self):
        dp = fig2_dp()
        Gs = quartic_extremes(dp, 2)
        svals = [s1_inverse(g, dp, 2) for g in Gs]
        assert svals[1] < svals[2]  # interference upper below signal lower
        est = s1_supports(dp, 2)
        assert est.separable
        # signal interval brackets the unilateral center kappa P / alpha
        assert est.signal.lower < 10 / 3 * 0.1 / 0.01 < est.signal.upper

    def test_equal_powers_degenerate(self):
        dp = dp_from_ratios(alpha=0.01, kappa=10 / 3, r=3.3333e-5, t=3.3333e-5)
        Gs = quartic_extremes(dp, 2)
        # middle extremes collapse: either flagged as complex or clustered
        if Gs is not None:
            assert abs(Gs[1] - Gs[2]) < 1e-2 * abs(Gs[1])


class TestS2HighSnr:
    def test_equals_phi0_at_rho0_zeros(self):
        dp = fig2_dp()
        sup = rho0_zero_supports(dp, 2)
        assert sup is not None
        from svdmimo.bulk_support import _phi0, _rho0_radicand_coeffs
        from svdmimo.numerics import poly_roots
        zeros = np.sort(poly_roots(_rho0_radicand_coeffs(dp, 2)[::-1]).real)
        for g in zeros:
            val = s2_inverse_highsnr(g, dp, 2)
            if not math.isnan(val):
                assert np.isclose(val, _phi0(g, dp, 2), rtol=1e-6)

    def test_branch_pole_structure(self):
        # phi0 - rho0 has a pole inside [G-inf, G+inf]; the selected branch does not
        dp = fig2_dp()
        from svdmimo.bulk_support import _gplusminus_inf
        a, k, r, t = dp.alpha, dp.kappa, dp.r, dp.t
        g_pole = -(t + r) * k / (2 * k + a * 3)
        lo, hi = _gplusminus_inf(dp, 2)
        assert lo < g_pole < hi
        eps = 1e-4 * abs(g_pole)
        inside_vals = [abs(s2_inverse_highsnr(g_pole + d, dp, 2)) for d in (-eps, eps)]
        assert all(v < 1e9 for v in inside_vals)  # selected branch stays finite

    def test_alpha_small_close_to_reciprocal(self):
        dp = dp_from_ratios(alpha=1e-6, kappa=10 / 3, r=3.3333e-5, t=1.3333e-4, R=3 * 10 ** 6)
        for G in (-3e-4, -2e-4, -6e-5, -1e-5):
            val = s2_inverse_highsnr(G, dp, 2)
            if not math.isnan(val):
                assert abs(val - (-1.0 / G)) <= 1e-3 * abs(1 / G)

    def test_nan_in_complex_region(self):
        dp = fig2_dp()
        from svdmimo.bulk_support import _gI2_highsnr
        gl, gu = _gI2_highsnr(dp, 2)
        assert math.isnan(s2_inverse_highsnr(0.5 * (gl + gu), dp, 2))


class TestBilateralHighSnr:
    def test_fig2_intervals(self):
        est = bilateral_supports_highsnr(fig2_dp(), 2)
        assert est.separable
        # frozen from the verified evaluation at Fig.-2 parameters
        assert np.isclose(est.signal.lower, 24.3957, atol=1e-3)
        assert np.isclose(est.signal.upper, 43.8661, atol=1e-3)
        assert np.isclose(est.interference.lower, 5.5940, atol=1e-3)
        assert np.isclose(est.interference.upper, 12.5826, atol=1e-3)

    def test_interference_interval_shrinks_to_zero_power(self):
        est1 = bilateral_supports_highsnr(fig2_dp(I_over_P=0.25), 2)
        est2 = bilateral_supports_highsnr(fig2_dp(I_over_P=0.05), 2)
        assert est2.interference.upper < est1.interference.upper

    def test_enclosures_track_rho0_intervals(self):
        # the per-bulk enclosures and the rho0-zero intervals are different
        # second-order expansions of the same extremes: they agree to within
        # ~10% on each endpoint but neither strictly contains the other
        dp = fig2_dp()
        est = bilateral_supports_highsnr(dp, 2)
        sig, intf = rho0_zero_supports(dp, 2)
        for enc, ref in ((est.signal, sig), (est.interference, intf)):
            assert abs(enc.lower - ref.lower) <= 0.10 * ref.lower
            assert abs(enc.upper - ref.upper) <= 0.10 * ref.upper

    def test_empirical_containment(self):
        sys = fig2_system(W=0.0)
        est = bilateral_supports_highsnr(derive_params(sys), 2)
        scale = sys.T * sys.R
        sig, intf = [], []
        for i in range(10):
            rz = sample_realization(sys, PilotConfig(tau_blocks=0), seed=[77, i])
            ev = empirical_spectrum(assemble_received(rz)) * sys.R / scale
            sig.extend(ev[:3])
            intf.extend(ev[3:9])
        assert np.mean(est.signal.contains(np.array(sig))) == 1.0
        assert np.mean(est.interference.contains(np.array(intf))) == 1.0


class TestSeparabilityBoundary:
    def test_beta_zero_gives_one(self):
        assert separability_boundary(0.0, 2) == 1.0

    def test_beta_one_gives_zero(self):
        assert separability_boundary(1.0, 2) == 0.0

    def test_paper_boundary_value(self):
        beta = separability_boundary_ratio(0.003, 2)
        assert abs(beta - 0.78) <= 0.01

    def test_monotone_decreasing_for_each_L(self):
        betas = np.linspace(1e-4, 0.999, 300)
        for L in (2, 4, 7):
            vals = [separability_boundary(b, L) for b in betas]
            assert all(v1 >= v2 - 1e-12 for v1, v2 in zip(vals, vals[1:]))

    def test_region_shrinks_with_L(self):
        for b in (0.2, 0.5, 0.8):
            vals = [separability_boundary(b, L) for L in (2, 4, 7)]
            assert vals[0] > vals[1] > vals[2]


class TestBilateralValidity:
    def test_equal_powers_invalid(self):
        dp = dp_from_ratios(alpha=0.01, kappa=1.0, r=1e-5, t=1e-5)
        assert not bilateral_validity(dp, 2)

    def test_zero_load_valid(self):
        dp = dp_from_ratios(alpha=0.0, kappa=1.0, r=1e-5, t=4e-5)
        assert bilateral_validity(dp, 2)

    def test_boundary_implies_validity_sweep(self):
        # whenever the separability condition holds, the expansion is valid
        rng = np.random.default_rng(42)
        checked = 0
        for _ in range(1000):
            L = int(rng.integers(1, 8))
            beta = rng.uniform(0.01, 0.99)
            limit = separability_boundary(beta, L)
            if limit <= 0:
                continue
            ratio = rng.uniform(0.0, limit)  # inside the separability region
            kappa = 10 ** rng.uniform(-0.5, 0.7)
            alpha = ratio * kappa
            t = 10 ** rng.uniform(-5, -3)
            dp = dp_from_ratios(alpha=alpha, kappa=kappa, r=beta * t, t=t)
            assert bilateral_validity(dp, L)
            checked += 1
        assert checked > 800


class TestBilateralGeneral:
    def test_zeta_zero_equals_highsnr(self):
        dp = fig2_dp()
        est0 = bilateral_supports_general(dp, 2, 0.0)
        hi = bilateral_supports_highsnr(dp, 2)
        for a, b in ((est0.signal, hi.signal), (est0.interference, hi.interference)):
            assert abs(a.lower - b.lower) <= 1e-10 * abs(b.lower)
            assert abs(a.upper - b.upper) <= 1e-10 * abs(b.upper)

    def test_noisy_intervals_shift_up(self):
        dp = fig2_dp(W=1.0)
        est0 = bilateral_supports_general(dp, 2, 0.0)
        estW = bilateral_supports_general(dp, 2, dp.zeta)
        assert estW.signal.lower > est0.signal.lower
        assert estW.interference.lower > est0.interference.lower

    def test_noisy_empirical_containment(self):
        sys = fig2_system(W=1.0)
        dp = derive_params(sys)
        est = bilateral_supports_general(dp, 2, dp.zeta)
        scale = sys.T * sys.R
        sig, intf = [], []
        for i in range(10):
            rz = sample_realization(sys, PilotConfig(tau_blocks=0), seed=[78, i])
            ev = empirical_spectrum(assemble_received(rz)) * sys.R / scale
            sig.extend(ev[:3])
            intf.extend(ev[3:9])
        assert np.mean(est.signal.contains(np.array(sig))) == 1.0
        assert np.mean(est.interference.contains(np.array(intf))) == 1.0

    def test_gamma_verdict_matches_boundary_condition(self):
        # verdict from the G-domain ordering coincides with the closed-form
        # separability region for every tested noise level
        L = 2
        for W_zeta in (0.0, 500.0, 1000.0, 2000.0):
            for beta, expect in ((0.5, True), (0.95, False)):
                boundary = separability_boundary(beta, L)
                kappa = 10 / 3
                alpha = (0.5 if expect else 1.5) * boundary * kappa
                t = 1.3333e-4
                dp = dp_from_ratios(alpha=alpha, kappa=kappa, r=beta * t, t=t)
                got = gamma_ordering_separable(dp, L, W_zeta)
                assert got is expect, (W_zeta, beta, expect, got)


class TestAppendixB:
    def test_zero_beta_ratio_one(self):
        dp = dp_from_ratios(alpha=0.0, kappa=10 / 3, r=2.5e-5, t=1e-4)
        rep = appendixB_scale_verification(dp, 2)
        assert np.isclose(rep["scale_ratio"], 1.0, atol=1e-12)

    def test_example_value(self):
        # t/r = 4, kappa = 10/3, beta = L*alpha = 0.02
        dp = dp_from_ratios(alpha=0.01, kappa=10 / 3, r=2.5e-5, t=1e-4)
        rep = appendixB_scale_verification(dp, 2)
        expected = (1 + (0.02 / (10 / 3)) / 3) * (1 + 0.02 / 3)
        assert np.isclose(rep["scale_ratio"], expected, rtol=1e-10)
        assert np.isclose(rep["closed_form_ratio"], expected, rtol=1e-12)
        assert rep["max_rel_diff"] < 1e-9

    def test_matches_interference_scale_factor(self):
        dp = fig2_dp()
        rep = appendixB_scale_verification(dp, 2)
        assert np.isclose(rep["scale_ratio"], rep["i_P"], rtol=1e-9)

    def test_noise_limit_recovers_noise_factor(self):
        # t, beta -> infinity with zeta = beta/t fixed: (1 + r zeta)(1 + r zeta/kappa)
        from svdmimo.bulk_support import _s0_explicit
        kappa, r = 10 / 3, 2.5e-5
        zeta_ratio = 3000.0
        t = 1e8
        beta = zeta_ratio * t
        G4 = r * kappa * (t - r) / (kappa * (r - t) - beta * r)
        ratio = _s0_explicit(G4, beta, kappa, t) * r
        expected = (1 + r * zeta_ratio) * (1 + r * zeta_ratio / kappa)
        assert np.isclose(ratio, expected, rtol=1e-4)


class TestSupportEstimateInvariants:
    def test_separable_implies_disjoint(self):
        for est in (unilateral_supports(fig2_dp(W=1.0), 0.1, 1.0, 2),
                    s1_supports(fig2_dp(), 2),
                    bilateral_supports_highsnr(fig2_dp(), 2),
                    bilateral_supports_general(fig2_dp(W=1.0), 2, 1000.0)):
            if est.separable:
                assert est.interference.upper < est.signal.lower

    def test_to_dict_roundtrip_fields(self):
        d = bilateral_supports_highsnr(fig2_dp(), 2).to_dict()
        assert set(d) == {"method", "signal", "interference", "separable", "flags"}
