import math

import numpy as np
import pytest

from zetapair.paircorr import (
    GridMismatchError,
    InsufficientDataError,
    aggregate,
    bin_average,
    compare,
    empirical_r2,
    gue_on_bins,
    gue_r2,
    poisson_noise_floor,
    r2_diag_finite,
    r2_diag_limit,
    r2_off_finite,
    r2_off_limit,
    theory_curve,
    theory_on_bins,
)
from zetapair.special import TWO_PI, mean_density
from zetapair.zeros import ZeroList


def poisson_surrogate(center, width, seed):
    rng = np.random.default_rng(seed)
    dens = mean_density(center)
    n = rng.poisson(dens * width)
    pts = np.sort(rng.uniform(center - width / 2, center + width / 2, n))
    return ZeroList(pts, (center - width / 2, center + width / 2), "ingested", False)


class TestEmpirical:
    def test_poisson_normalization(self):
        zl = poisson_surrogate(5000.0, 2000.0, seed=20260809)
        est = empirical_r2(zl, 5000.0, 2000.0, 0.05, 3.0)
        assert abs(np.mean(est.values) - 1.0) <= 3.0 / math.sqrt(est.pair_count)
        three_sigma = 3.0 / np.sqrt(np.maximum(est.counts, 1.0))
        assert np.all(np.abs(est.values - 1.0) <= three_sigma)

    def test_level_repulsion_visible(self, zeros_high):
        width = 400.0 / mean_density(7000.0)
        est = empirical_r2(zeros_high, 7000.0, width, 0.05, 3.0)
        assert np.all(est.values[:3] < 0.5)

    def test_doubling_width_quadruples_pairs(self, zeros_high):
        # with eps_max tracking the window, the histogram sees a fixed
        # fraction of all ordered pairs, which grow quadratically
        dens = mean_density(7000.0)
        base = empirical_r2(zeros_high, 7000.0, 400.0, 2.0, 0.45 * 400.0 * dens)
        double = empirical_r2(zeros_high, 7000.0, 800.0, 2.0, 0.45 * 800.0 * dens)
        ratio = double.pair_count / base.pair_count
        assert 3.2 <= ratio <= 4.8

    def test_insufficient_data(self, zeros_high):
        with pytest.raises(InsufficientDataError):
            empirical_r2(zeros_high, 7000.0, 20.0, 0.05, 3.0)

    def test_window_outside_range(self, zeros_high):
        with pytest.raises(ValueError):
            empirical_r2(zeros_high, 2995.0, 100.0, 0.05, 3.0)

    def test_aggregate_pools_counts(self, zeros_high):
        a = empirical_r2(zeros_high, 6000.0, 300.0, 0.05, 3.0)
        b = empirical_r2(zeros_high, 8000.0, 300.0, 0.05, 3.0)
        pooled = aggregate([a, b])
        assert pooled.pair_count == a.pair_count + b.pair_count
        expected = (a.counts + b.counts) / (a.norms + b.norms)
        assert np.allclose(pooled.values, expected)

    def test_aggregate_rejects_mixed_grids(self, zeros_high):
        a = empirical_r2(zeros_high, 6000.0, 300.0, 0.05, 3.0)
        b = empirical_r2(zeros_high, 8000.0, 300.0, 0.1, 3.0)
        with pytest.raises(GridMismatchError):
            aggregate([a, b])


class TestLimits:
    def test_diag_limit_values(self):
        assert r2_diag_limit(1.0) == pytest.approx(-1.0 / (2 * math.pi**2))
        assert r2_diag_limit(10.0) == pytest.approx(-1.0 / (200 * math.pi**2))
        assert r2_diag_limit(-2.5) == r2_diag_limit(2.5)
        with pytest.raises(ValueError):
            r2_diag_limit(0.0)

    def test_off_limit_values(self):
        assert r2_off_limit(0.25) == pytest.approx(0.0, abs=1e-16)
        assert r2_off_limit(1.0) == pytest.approx(1.0 / (2 * math.pi**2))
        with pytest.raises(ValueError):
            r2_off_limit(0.0)

    def test_gue_values(self):
        assert gue_r2(0.0) == 0.0
        assert gue_r2(1.0) == pytest.approx(1.0)
        assert gue_r2(0.5) == pytest.approx(1.0 - (2.0 / math.pi) ** 2)

    def test_gue_equals_one_plus_limit_terms(self):
        eps = np.linspace(0.1, 3.0, 59)
        combined = 1.0 + r2_diag_limit(eps) + r2_off_limit(eps)
        assert np.allclose(combined, gue_r2(eps), rtol=0, atol=1e-14)


class TestFiniteHeight:
    def test_diag_even_and_real(self, zeta_cfg, tables_1m):
        for eps in (0.3, 1.7):
            a = r2_diag_finite(eps, zeta_cfg, tables_1m)
            b = r2_diag_finite(-eps, zeta_cfg, tables_1m)
            assert a == b
            assert isinstance(a, float)

    def test_off_even_and_real(self, zeta_cfg, tables_1m):
        for eps in (0.3, 1.7):
            a = r2_off_finite(eps, 1e4, zeta_cfg, tables_1m)
            b = r2_off_finite(-eps, 1e4, zeta_cfg, tables_1m)
            assert a == b
            assert isinstance(a, float)

    def test_diag_prime_tail_converged(self, zeta_cfg, tables_1m):
        # measured truncation shift, P 1e4 -> 1e5 at eps = 5: ~4e-6
        a = r2_diag_finite(5.0, zeta_cfg, tables_1m, 10_000, 20)
        b = r2_diag_finite(5.0, zeta_cfg, tables_1m, 100_000, 20)
        assert abs(a - b) < 2e-5

    def test_off_prime_tail_converged(self, zeta_cfg, tables_1m):
        a = r2_off_finite(5.0, 1e4, zeta_cfg, tables_1m, 10_000)
        b = r2_off_finite(5.0, 1e4, zeta_cfg, tables_1m, 100_000)
        assert abs(a - b) < 5e-6

    def test_off_rejects_low_height(self, zeta_cfg, tables_1m):
        with pytest.raises(ValueError):
            r2_off_finite(1.0, 5.0, zeta_cfg, tables_1m)

    def test_diag_approaches_unfolded_limit(self, zeta_cfg, tables_1m):
        e_height = 1e10
        dens = mean_density(e_height)
        for eps in (0.5, 1.0, 2.0):
            unfolded = r2_diag_finite(eps / dens, zeta_cfg, tables_1m) / dens**2
            assert abs(unfolded - r2_diag_limit(eps)) < 1e-2

    def test_off_approaches_unfolded_limit(self, zeta_cfg, tables_1m):
        # absolute deviation at unfolded eps = 1 is ~6e-3 at E = 1e10 and
        # shrinks with height (the approach is logarithmic in E)
        devs = []
        for e_height in (1e6, 1e8, 1e10):
            dens = mean_density(e_height)
            unfolded = r2_off_finite(1.0 / dens, e_height, zeta_cfg, tables_1m) / dens**2
            devs.append(abs(unfolded - r2_off_limit(1.0)))
        assert devs[0] > devs[1] > devs[2]
        assert devs[-1] <= 1e-2


class TestTheoryCurve:
    def test_decomposition_identity(self, zeta_cfg, tables_1m):
        eps = np.linspace(0.2, 3.0, 20)
        for unfolded in (True, False):
            tc = theory_curve(1e4, eps, zeta_cfg, tables_1m, 20_000, 14, unfolded)
            assert np.array_equal(tc.total, tc.constant_term + tc.diag + tc.offdiag)

    def test_constant_term(self, zeta_cfg, tables_1m):
        eps = np.array([0.5])
        assert theory_curve(1e4, eps, zeta_cfg, tables_1m).constant_term == 1.0
        absolute = theory_curve(1e4, eps, zeta_cfg, tables_1m, unfolded=False)
        assert absolute.constant_term == pytest.approx(mean_density(1e4) ** 2)

    def test_positive_on_window(self, zeta_cfg, tables_1m):
        eps = np.arange(0.2, 3.0001, 0.05)
        tc = theory_curve(1e4, eps, zeta_cfg, tables_1m)
        assert np.all(tc.total > 0.0)

    def test_limit_chain_decreasing(self, zeta_cfg, tables_1m):
        eps = np.arange(0.2, 3.0001, 0.05)
        devs = []
        for e_height in (1e4, 1e6, 1e8, 1e10):
            tc = theory_curve(e_height, eps, zeta_cfg, tables_1m)
            devs.append(float(np.max(np.abs(tc.total - gue_r2(eps)))))
        assert devs == sorted(devs, reverse=True)

    def test_bin_average_washes_out_oscillations(self, zeta_cfg, tables_1m):
        # far out in eps only the constant term survives averaging; fine
        # sub-bins keep the 5-node rule accurate, group means emulate
        # width-5 windows holding ~5 oscillation periods
        edges = np.linspace(20.0, 30.0, 21)
        tc = theory_on_bins(1e4, edges, zeta_cfg, tables_1m, 20_000, 14)
        avg = bin_average(tc, edges).reshape(2, 10).mean(axis=1)
        # residual envelope modulation leaves ~0.6% at this height
        assert np.all(np.abs(avg - 1.0) < 1e-2)


class TestCompare:
    def test_zero_residual_on_identical_input(self, zeta_cfg, tables_1m, zeros_high):
        width = 200.0 / mean_density(7000.0)
        est = empirical_r2(zeros_high, 7000.0, width, 0.05, 3.0)
        curve = theory_on_bins(7000.0, est.bin_edges, zeta_cfg, tables_1m, 20_000, 14)
        synthetic = est.__class__(
            est.bin_edges,
            bin_average(curve, est.bin_edges),
            est.window,
            est.pair_count,
            counts=est.counts,
            norms=est.norms,
        )
        rep = compare(synthetic, curve)
        assert rep.ms_residual == 0.0
        assert np.all(rep.residuals == 0.0)

    def test_grid_mismatch_rejected(self, zeta_cfg, tables_1m, zeros_high):
        width = 200.0 / mean_density(7000.0)
        est = empirical_r2(zeros_high, 7000.0, width, 0.05, 3.0)
        other_edges = np.linspace(0.0, 3.0, 31)
        curve = theory_on_bins(7000.0, other_edges, zeta_cfg, tables_1m, 20_000, 14)
        with pytest.raises(GridMismatchError):
            compare(est, curve)

    def test_gue_on_bins_total_is_gue(self):
        edges = np.linspace(0.0, 3.0, 61)
        curve = gue_on_bins(edges)
        assert np.allclose(curve.total, gue_r2(curve.epsilons), atol=1e-14)

    def test_noise_floor_matches_counts(self, zeros_high):
        width = 400.0 / mean_density(7000.0)
        est = empirical_r2(zeros_high, 7000.0, width, 0.05, 3.0)
        floor = poisson_noise_floor(est)
        assert floor == pytest.approx(float(np.mean(1.0 / est.norms)))

    def test_single_window_near_7005_within_noise_of_gue(self, zeros_high):
        width = 200.0 / mean_density(7005.0)
        est = empirical_r2(zeros_high, 7005.0, width, 0.05, 3.0)
        gue = bin_average(gue_on_bins(est.bin_edges), est.bin_edges)
        sl = slice(2, None)
        ms = float(np.mean((est.values[sl] - gue[sl]) ** 2))
        floor = float(np.mean(gue[sl] / est.norms[sl]))
        assert ms <= 4.0 * floor
