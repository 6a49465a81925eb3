"""Bound formulas: hand-computed examples, structural properties, and
serialization."""

import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mtpsd import (InapplicableBoundError, ParameterError, PiecewisePsd,
                   SigmaStats, bias_bound_general, bias_bound_smooth,
                   bound_report, covariance_bound, kappa_lower_bound,
                   local_psd_stats, multiband_fixture, sigma_stats,
                   tail_probability, variance_bound)

FLAT = PiecewisePsd(np.array([0.0]), np.array([2.5]))


class TestSigmaStats:
    def test_perfect_eigenvalues(self):
        sig = sigma_stats(np.ones(5), 5)
        assert sig.sigma1 == 0.0 and sig.sigma2 == 0.0

    def test_hand_case(self):
        sig = sigma_stats(np.array([1.0, 1.0, 0.5]), 3)
        assert sig.sigma1 == pytest.approx(1 / 6)
        assert sig.sigma2 == pytest.approx(np.sqrt(1 / 12))
        assert sig.lambda_last == 0.5

    def test_k_bounds(self):
        with pytest.raises(ParameterError):
            sigma_stats(np.ones(3), 4)

    @settings(max_examples=50, deadline=None)
    @given(data=st.data())
    def test_chain_invariant(self, data):
        n = data.draw(st.integers(1, 40))
        lam = np.sort(data.draw(st.lists(
            st.floats(1e-9, 1 - 1e-9), min_size=n, max_size=n)))[::-1]
        k = data.draw(st.integers(1, n))
        sig = sigma_stats(lam, k)
        assert 0.0 <= sig.sigma1 <= sig.sigma2 + 1e-15
        assert sig.sigma2 <= 1.0 - sig.lambda_last + 1e-15
        assert 1.0 - sig.lambda_last <= 1.0


class TestLocalPsdStats:
    def test_flat(self):
        st_ = local_psd_stats(FLAT, 0.37, 0.02)
        assert st_.m_f == 2.5 and st_.big_m_f == 2.5
        assert st_.a_f == pytest.approx(2.5, rel=1e-12)
        assert st_.r_f == pytest.approx(2.5, rel=1e-12)
        assert st_.big_m == 2.5 and st_.m2_f == 0.0

    def test_multiband_strong_band(self):
        st_ = local_psd_stats(multiband_fixture(), 0.30, 0.01)
        assert st_.m_f == 1e9 and st_.big_m_f == 1e9
        assert st_.a_f == pytest.approx(1e9, rel=1e-12)
        assert st_.r_f == pytest.approx(1e9, rel=1e-12)
        assert st_.big_m == 1e9 and st_.m2_f == 0.0

    def test_multiband_weak_band(self):
        st_ = local_psd_stats(multiband_fixture(), 0.80, 0.01)
        assert st_.m_f == 10.0 and st_.big_m_f == 10.0
        assert st_.a_f == pytest.approx(10.0, rel=1e-12)
        assert st_.r_f == pytest.approx(10.0, rel=1e-12)
        assert st_.big_m == 1e9

    def test_straddling_boundary(self):
        st_ = local_psd_stats(multiband_fixture(), 0.22, 0.01)
        assert st_.m_f == 1.0 and st_.big_m_f == 1e3
        assert st_.a_f == pytest.approx((1e3 + 1) / 2)
        assert st_.r_f == pytest.approx(np.sqrt((1e6 + 1) / 2))
        assert st_.m2_f is None

    def test_wraparound_interval(self):
        psd = PiecewisePsd(np.array([0.0, 0.9]), np.array([1.0, 5.0]))
        st_ = local_psd_stats(psd, 0.0, 0.05)  # covers [0.95, 0.05]
        assert st_.m_f == 1.0 and st_.big_m_f == 5.0
        assert st_.a_f == pytest.approx(3.0)

    @settings(max_examples=40, deadline=None)
    @given(data=st.data())
    def test_against_sampling_oracle(self, data):
        m = data.draw(st.integers(1, 6))
        bp = np.sort(np.array(
            data.draw(st.lists(st.floats(0.0, 0.99), min_size=m, max_size=m,
                               unique=True))))
        if np.any(np.diff(bp) < 1e-3):
            return
        vals = np.array(data.draw(st.lists(
            st.floats(0.0, 100.0), min_size=m, max_size=m)))
        psd = PiecewisePsd(bp, vals)
        f = data.draw(st.floats(0.0, 1.0))
        w = data.draw(st.floats(0.01, 0.3))
        st_ = local_psd_stats(psd, f, w)
        grid = f + np.linspace(-w, w, 20001)
        sampled = psd.evaluate(grid)
        assert st_.m_f <= sampled.min() + 1e-9
        assert st_.big_m_f >= sampled.max() - 1e-9
        assert st_.a_f == pytest.approx(sampled.mean(), abs=0.02 * (1 + sampled.max()))


class TestBiasBounds:
    def test_smooth_flat(self):
        st_ = local_psd_stats(FLAT, 0.4, 0.01)
        sig = SigmaStats(sigma1=0.25, sigma2=0.3, k=4, lambda_last=0.7)
        want = (2.5 + 2.5) * 0.25
        assert bias_bound_smooth(st_, sig, 100, 0.01, 4) == pytest.approx(want)

    def test_smooth_zero(self):
        st_ = local_psd_stats(FLAT, 0.4, 0.01)
        sig = SigmaStats(sigma1=0.0, sigma2=0.0, k=4, lambda_last=1.0)
        assert bias_bound_smooth(st_, sig, 100, 0.01, 4) == 0.0

    def test_smooth_inapplicable_at_jump(self):
        st_ = local_psd_stats(multiband_fixture(), 0.22, 0.01)
        sig = SigmaStats(sigma1=0.0, sigma2=0.0, k=4, lambda_last=1.0)
        with pytest.raises(InapplicableBoundError):
            bias_bound_smooth(st_, sig, 100, 0.01, 4)

    def test_general_flat(self):
        st_ = local_psd_stats(FLAT, 0.4, 0.01)
        sig = SigmaStats(sigma1=0.1, sigma2=0.1, k=4, lambda_last=0.9)
        assert bias_bound_general(st_, sig) == pytest.approx(2.5 * 0.1)

    def test_general_degenerate_sigma(self):
        st_ = local_psd_stats(multiband_fixture(), 0.22, 0.01)
        sig = SigmaStats(sigma1=1.0, sigma2=1.0, k=1, lambda_last=0.0)
        assert bias_bound_general(st_, sig) == pytest.approx(1e9)


class TestVarianceBound:
    def test_collapse(self):
        st_ = local_psd_stats(FLAT, 0.4, 0.05)
        sig = SigmaStats(sigma1=0.0, sigma2=0.0, k=10, lambda_last=1.0)
        n, w = 100, 0.05
        k = int(2 * n * w)
        got = variance_bound(st_, sig, n, w, k)
        assert got == pytest.approx(2.5 ** 2 / k)

    def test_monotone_in_k(self):
        st_ = local_psd_stats(FLAT, 0.4, 0.05)
        sig = SigmaStats(sigma1=0.0, sigma2=0.05, k=10, lambda_last=0.95)
        vals = [variance_bound(st_, sig, 100, 0.05, k) for k in (5, 10, 20)]
        assert vals[0] > vals[1] > vals[2]


class TestCovarianceBound:
    def test_zero_sigma(self):
        s1 = local_psd_stats(multiband_fixture(), 0.2, 0.01)
        s2 = local_psd_stats(multiband_fixture(), 0.8, 0.01)
        sig = SigmaStats(sigma1=0.0, sigma2=0.0, k=4, lambda_last=1.0)
        assert covariance_bound(s1, s2, sig, 100, 0.01, 4) == 0.0

    def test_symmetric(self):
        s1 = local_psd_stats(multiband_fixture(), 0.2, 0.01)
        s2 = local_psd_stats(multiband_fixture(), 0.8, 0.01)
        sig = SigmaStats(sigma1=0.01, sigma2=0.02, k=4, lambda_last=0.98)
        a = covariance_bound(s1, s2, sig, 100, 0.01, 4)
        b = covariance_bound(s2, s1, sig, 100, 0.01, 4)
        assert a == pytest.approx(b, rel=1e-15)

    def test_separation_precondition(self):
        s1 = local_psd_stats(multiband_fixture(), 0.2, 0.01)
        s2 = local_psd_stats(multiband_fixture(), 0.215, 0.01)
        sig = SigmaStats(sigma1=0.01, sigma2=0.02, k=4, lambda_last=0.98)
        with pytest.raises(InapplicableBoundError):
            covariance_bound(s1, s2, sig, 100, 0.01, 4)


class TestKappa:
    def test_ideal_collapse(self):
        st_ = local_psd_stats(FLAT, 0.4, 0.05)
        sig = SigmaStats(sigma1=0.0, sigma2=0.0, k=7, lambda_last=1.0)
        assert kappa_lower_bound(st_, sig, 100, 0.05, 7) == pytest.approx(7.0)

    def test_flat_full_taper_budget(self):
        n, w = 100, 0.05
        k = int(2 * n * w)
        st_ = local_psd_stats(FLAT, 0.4, w)
        sig = SigmaStats(sigma1=0.02, sigma2=0.03, k=k, lambda_last=0.9)
        # M = M_f = A_f = c for a flat density, so the ratio collapses
        want = (k * (1 - 0.02) * 2.5 - 2 * n * w * 0.0) / (2.5 + 0.0 * (1 - 0.9))
        assert kappa_lower_bound(st_, sig, n, w, k) == pytest.approx(want)

    def test_zero_denominator(self):
        psd = PiecewisePsd(np.array([0.0, 0.5]), np.array([0.0, 1.0]))
        st_ = local_psd_stats(psd, 0.25, 0.01)  # M_f = 0 inside zero piece
        sig = SigmaStats(sigma1=0.0, sigma2=0.0, k=4, lambda_last=1.0)
        with pytest.raises(InapplicableBoundError):
            kappa_lower_bound(st_, sig, 100, 0.01, 4)


class TestTailProbability:
    def test_limits_to_one(self):
        up, _ = tail_probability(5.0, 1.0 + 1e-12)
        assert up == pytest.approx(1.0, abs=1e-6)

    def test_scalar_value(self):
        up, lo = tail_probability(10.0, 2.0)
        assert up == pytest.approx(0.5 * np.exp(-10 * (1 - np.log(2))), rel=1e-12)
        assert lo == 1.0

    def test_lower_tail(self):
        up, lo = tail_probability(10.0, 0.5)
        assert up == 1.0
        assert lo == pytest.approx(np.exp(-10 * (0.5 - 1 - np.log(0.5))), rel=1e-12)

    def test_monotone_in_kappa(self):
        vals = [tail_probability(k, 2.0)[0] for k in (1.0, 5.0, 25.0)]
        assert vals[0] > vals[1] > vals[2]

    def test_beta_domain(self):
        with pytest.raises(ParameterError):
            tail_probability(5.0, 1.0)
        with pytest.raises(ParameterError):
            tail_probability(5.0, -2.0)
        with pytest.raises(ParameterError):
            tail_probability(0.0, 2.0)


class TestMonotoneInGlobalMax:
    def test_all_bounds_increase_with_m(self):
        base = local_psd_stats(multiband_fixture(), 0.8, 0.01)
        doubled = type(base)(f=base.f, w=base.w, m_f=base.m_f,
                             big_m_f=base.big_m_f, a_f=base.a_f, r_f=base.r_f,
                             big_m=2 * base.big_m, m2_f=base.m2_f)
        sig = SigmaStats(sigma1=0.01, sigma2=0.02, k=10, lambda_last=0.9)
        n, w, k = 2000, 0.01, 10
        assert bias_bound_general(doubled, sig) > bias_bound_general(base, sig)
        assert bias_bound_smooth(doubled, sig, n, w, k) > \
            bias_bound_smooth(base, sig, n, w, k)
        assert variance_bound(doubled, sig, n, w, k) > \
            variance_bound(base, sig, n, w, k)
        # kappa's lower bound weakens (decreases) as the global max grows
        assert kappa_lower_bound(doubled, sig, n, w, k) < \
            kappa_lower_bound(base, sig, n, w, k)


class TestBoundReport:
    def test_report_round_trip(self):
        lam = np.array([1 - 1e-10, 1 - 1e-8, 1 - 1e-5, 0.9, 0.4])
        rep = bound_report(multiband_fixture(), 0.3, 2000, 0.01, 4, lam, f2=0.8)
        payload = json.loads(rep.to_json())
        assert payload["n"] == 2000 and payload["k"] == 4
        assert payload["covariance"] is not None
        assert not payload["kappa_vacuous"]
        text = rep.to_text()
        assert "variance = " in text and "kappa_lower = " in text

    def test_smooth_bias_absent_at_jump(self):
        lam = np.array([0.99, 0.95, 0.9, 0.6])
        rep = bound_report(multiband_fixture(), 0.22, 2000, 0.01, 3, lam)
        assert rep.bias_smooth is None
        assert rep.covariance is None
