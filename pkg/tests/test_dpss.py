"""Taper bank construction against dense linear-algebra oracles."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.linalg import eigh, toeplitz

from mtpsd import (NumericalError, ParameterError, apply_prolate,
                   build_prolate_kernel, build_taper_bank,
                   eigenvalue_lower_bound, load_bank, save_bank,
                   select_num_tapers, taper_range, transition_width_bound)
from mtpsd.dpss import prolate_first_column


def dense_prolate(n, w):
    return toeplitz(prolate_first_column(n, w))


def normalize_signs(rows):
    rows = rows.copy()
    for i, r in enumerate(rows):
        s = r.sum()
        if abs(s) <= 1e-8:
            s = r[np.argmax(np.abs(r) > 1e-8 * np.abs(r).max())]
        if s < 0:
            rows[i] = -r
    return rows


class TestProlateKernel:
    def test_first_column_n8_quarter_band(self):
        # sin(2*pi*0.25*m) / (pi*m) evaluated directly
        expected = np.array([0.5, 1 / np.pi, 0.0, -1 / (3 * np.pi),
                             0.0, 1 / (5 * np.pi), 0.0, -1 / (7 * np.pi)])
        kern = build_prolate_kernel(8, 0.25)
        np.testing.assert_allclose(kern.first_column, expected, atol=1e-12)
        e0 = np.zeros(8)
        e0[0] = 1.0
        np.testing.assert_allclose(apply_prolate(kern, e0), expected, atol=1e-12)

    def test_zero_vector(self):
        kern = build_prolate_kernel(16, 0.1)
        np.testing.assert_array_equal(apply_prolate(kern, np.zeros(16)), 0.0)

    def test_matches_dense_complex(self):
        rng = np.random.default_rng(7)
        n, w = 32, 0.11
        kern = build_prolate_kernel(n, w)
        B = dense_prolate(n, w)
        v = rng.standard_normal(n) + 1j * rng.standard_normal(n)
        got = apply_prolate(kern, v)
        want = B @ v
        assert np.max(np.abs(got - want)) < 1e-12 * np.max(np.abs(want))

    @settings(max_examples=40, deadline=None)
    @given(n=st.integers(2, 256),
           w=st.floats(0.01, 0.49),
           seed=st.integers(0, 2 ** 31))
    def test_matches_dense_property(self, n, w, seed):
        rng = np.random.default_rng(seed)
        kern = build_prolate_kernel(n, w)
        v = rng.standard_normal(n)
        want = dense_prolate(n, w) @ v
        got = apply_prolate(kern, v)
        scale = np.max(np.abs(want)) + np.max(np.abs(v))
        assert np.max(np.abs(got - want)) < 1e-12 * scale

    def test_length_mismatch(self):
        kern = build_prolate_kernel(8, 0.2)
        with pytest.raises(ParameterError):
            apply_prolate(kern, np.zeros(9))


@pytest.fixture(scope="module")
def bank64():
    return build_taper_bank(64, 0.125, 16)


class TestTaperBank:

    def test_against_dense_eigensolve(self, bank64):
        # Top prolate eigenvalues here agree within machine epsilon, so
        # individual dense eigenvectors are not resolvable; the well-posed
        # equivalents are (a) eigenvalue agreement, (b) eigenpair residual
        # against the dense matrix, (c) per-cluster subspace agreement.
        B = dense_prolate(64, 0.125)
        vals = eigh(B, eigvals_only=True)[::-1][:16]
        np.testing.assert_allclose(bank64.eigenvalues, vals, atol=1e-8)
        resid = B @ bank64.tapers.T - bank64.tapers.T * bank64.eigenvalues
        assert np.max(np.abs(resid)) < 1e-8
        _, vecs = eigh(B)
        dense_rows = vecs[:, ::-1][:, :16].T
        start = 0
        for stop in range(1, 17):
            isolated = stop == 16 or vals[stop - 1] - vals[stop] > 1e-6
            if not isolated:
                continue
            basis = dense_rows[start:stop]
            block = bank64.tapers[start:stop]
            proj = block - (block @ basis.T) @ basis
            assert np.max(np.abs(proj)) < 1e-8, (start, stop)
            start = stop

    def test_against_dense_eigensolve_resolvable_gaps(self):
        # At 2nw ~ 5 the first twelve gaps are far above roundoff, so the
        # dense solve pins each of those eigenvectors individually.
        bank = build_taper_bank(64, 0.04, 12)
        vals, vecs = eigh(dense_prolate(64, 0.04))
        vals = vals[::-1][:12]
        rows = normalize_signs(vecs[:, ::-1][:, :12].T)
        np.testing.assert_allclose(bank.eigenvalues, vals, atol=1e-8)
        np.testing.assert_allclose(bank.tapers, rows, atol=1e-8)

    def test_orthonormal(self, bank64):
        gram = bank64.tapers @ bank64.tapers.T
        assert np.max(np.abs(gram - np.eye(16))) < 1e-10

    def test_eigenvalues_open_interval_descending(self, bank64):
        lam = bank64.eigenvalues
        assert np.all(lam > 0.0) and np.all(lam < 1.0)
        assert np.all(np.diff(lam) < 0.0)

    def test_rayleigh_consistency(self, bank64):
        kern = build_prolate_kernel(64, 0.125)
        quad = np.einsum("ij,ij->i", bank64.tapers,
                         apply_prolate(kern, bank64.tapers))
        assert np.max(np.abs(quad - bank64.eigenvalues)) < 1e-8

    def test_symmetry_alternates(self, bank64):
        # taper k is even/odd about the midpoint as k alternates
        for k, s in enumerate(bank64.tapers):
            sign = 1.0 if k % 2 == 0 else -1.0
            assert np.max(np.abs(s - sign * s[::-1])) < 1e-9, k

    def test_sign_convention(self, bank64):
        for k, s in enumerate(bank64.tapers):
            if abs(s.sum()) > 1e-8:
                assert s.sum() > 0
            else:
                j = np.argmax(np.abs(s) > 1e-8 * np.abs(s).max())
                assert s[j] > 0

    def test_parameter_errors(self):
        with pytest.raises(ParameterError):
            build_taper_bank(64, 0.5, 4)
        with pytest.raises(ParameterError):
            build_taper_bank(64, -0.1, 4)
        with pytest.raises(ParameterError):
            build_taper_bank(64, 0.1, 65)
        with pytest.raises(ParameterError):
            build_taper_bank(0, 0.1, 1)

    def test_degenerate_bandwidth_flag(self):
        with pytest.warns(UserWarning):
            bank = build_taper_bank(16, 0.01, 2)
        assert bank.low_time_bandwidth
        assert np.all(bank.eigenvalues > 0.0)

    def test_taper_range_matches_bank(self):
        bank = build_taper_bank(128, 0.08, 24)
        idx, lam, rows = taper_range(128, 0.08, 10, 20)
        np.testing.assert_array_equal(idx, np.arange(10, 21))
        np.testing.assert_allclose(lam, bank.eigenvalues[10:21], atol=1e-10)
        np.testing.assert_allclose(rows, bank.tapers[10:21], atol=1e-9)

    @pytest.mark.parametrize("n,w,lo,hi", [
        (64, 0.1, 0, 15), (65, 0.1, 0, 15), (100, 0.04, 3, 11),
        (101, 0.27, 5, 20), (4, 0.2, 0, 3), (5, 0.2, 0, 4),
        (33, 0.15, 7, 7), (33, 0.15, 6, 6), (17, 0.49, 0, 16)])
    def test_folded_solver_matches_plain(self, n, w, lo, hi):
        # the symmetric/antisymmetric half-problems must reproduce the
        # unfolded tridiagonal eigenvectors exactly
        from scipy.linalg import eigh_tridiagonal
        from mtpsd.dpss import (_commuting_tridiagonal, _normalize_signs,
                                _solve_taper_rows)
        diag, off = _commuting_tridiagonal(n, w)
        _, vecs = eigh_tridiagonal(diag, off, select="i",
                                   select_range=(n - 1 - hi, n - 1 - lo))
        want = np.ascontiguousarray(vecs[:, ::-1].T)
        want /= np.linalg.norm(want, axis=1, keepdims=True)
        _normalize_signs(want)
        np.testing.assert_allclose(_solve_taper_rows(n, w, lo, hi), want,
                                   atol=1e-9)


class TestBounds:
    def test_transition_width_value(self):
        # (2/pi^2) ln(100*n*w + 25) ln(5/(eps(1-eps))) + 7 at the Fig-1 point
        got = transition_width_bound(10000, 0.01, 1e-3)
        want = 2 / np.pi ** 2 * np.log(10025) * np.log(5 / (1e-3 * 0.999)) + 7
        assert got == pytest.approx(want, rel=1e-12)
        assert got == pytest.approx(22.9, abs=0.1)

    def test_monotone_decreasing_in_eps(self):
        eps = np.linspace(1e-6, 0.499, 50)
        vals = [transition_width_bound(2000, 0.01, e) for e in eps]
        assert np.all(np.diff(vals) < 0)

    def test_eps_domain(self):
        for bad in (0.0, 0.5, 0.7, -1e-3):
            with pytest.raises(ParameterError):
                transition_width_bound(100, 0.1, bad)

    def test_transition_count_small(self):
        n, w = 2000, 0.01
        _, lam, _ = taper_range(n, w, 0, 59)
        for eps in (1e-3, 1e-6, 1e-9):
            count = int(np.sum((lam > eps) & (lam < 1 - eps)))
            assert count <= transition_width_bound(n, w, eps)

    def test_lower_bound_vacuous_point(self):
        n, w = 2000, 0.01
        k = int(np.floor(2 * n * w)) - 7
        assert eigenvalue_lower_bound(n, w, k) == pytest.approx(-9.0)

    def test_lower_bound_holds(self):
        n, w = 2000, 0.01
        idx, lam, _ = taper_range(n, w, 0, 39)
        for k in range(int(np.floor(2 * n * w))):
            lb = eigenvalue_lower_bound(n, w, k)
            if lb > 0:
                assert lam[k] >= lb

    def test_lower_bound_domain(self):
        with pytest.raises(ParameterError):
            eigenvalue_lower_bound(2000, 0.01, 40)
        with pytest.raises(ParameterError):
            eigenvalue_lower_bound(2000, 0.01, -1)


class TestSelect:
    def test_against_dense(self):
        n, w = 64, 0.125
        lam = eigh(dense_prolate(n, w), eigvals_only=True)[::-1]
        for delta in (1e-2, 1e-4, 1e-6):
            want = int(np.sum(lam >= 1 - delta))
            assert select_num_tapers(n, w, delta) == want

    def test_zero_when_first_taper_leaks(self):
        # 2nw barely above 1: lambda_0 is far from 1
        bank = build_taper_bank(50, 0.011, 1)
        assert bank.eigenvalues[0] < 1 - 1e-6
        assert select_num_tapers(50, 0.011, 1e-6) == 0

    def test_delta_domain(self):
        with pytest.raises(ParameterError):
            select_num_tapers(100, 0.1, 0.0)
        with pytest.raises(ParameterError):
            select_num_tapers(100, 0.1, 1.0)


class TestBankIO:
    def test_round_trip(self, tmp_path):
        bank = build_taper_bank(48, 0.1, 6)
        path = tmp_path / "bank.dpss"
        save_bank(bank, path)
        loaded = load_bank(path)
        assert loaded.n == 48 and loaded.w == 0.1 and loaded.k_computed == 6
        np.testing.assert_array_equal(loaded.eigenvalues, bank.eigenvalues)
        np.testing.assert_array_equal(loaded.tapers, bank.tapers)

    def test_bad_magic(self, tmp_path):
        path = tmp_path / "junk.dpss"
        path.write_bytes(b"NOPE" + b"\0" * 64)
        with pytest.raises(ParameterError):
            load_bank(path)
