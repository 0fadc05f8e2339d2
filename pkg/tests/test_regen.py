import numpy as np
import pytest
from scipy.stats import kstest

from levyburgers import (
    GridSpec,
    InsufficientDataError,
    LevyParams,
    ParameterError,
    distance_correlation,
    independence_test,
    jump_down,
    permutation_pvalue,
    regen_report,
    rk_sequence,
    rst_scan,
    sample_path,
    solve,
    step_path,
    zero_path,
)
from conftest import derived_seed


class TestFixtureScans:
    def test_zero_path(self, grid_fixture):
        rep = regen_report(zero_path(grid_fixture), 1.0)
        assert (rep.R, rep.S, rep.T_first) == (0.0, 0.0, 0.0)
        assert rep.rk == [0.0]
        assert rep.s_equals_t and rep.rk_converged and rep.steps == 0

    def test_jump_up_at_half(self, grid_fixture):
        path = step_path(grid_fixture, 0.5, 0.5)
        rep = regen_report(path, 1.0)
        assert (rep.R, rep.S, rep.T_first) == (0.0, 0.5, 0.5)
        assert rep.rk == [0.0, 0.5]
        assert rep.s_equals_t and rep.rk_converged

    def test_jump_up_at_origin(self, grid_fixture):
        path = step_path(grid_fixture, 0.5, 0.0)
        rep = regen_report(path, 1.0)
        assert (rep.R, rep.S, rep.T_first) == (0.0, 0.0, 0.0)
        assert rep.rk == [0.0]

    def test_jump_down(self, grid_fixture):
        # the first nonnegative zero-velocity point sits one cell left of 1
        h = grid_fixture.h
        rep = regen_report(jump_down(grid_fixture, 0.5), 1.0)
        for v in (rep.R, rep.S, rep.T_first):
            assert abs(v - 1.0) <= 2 * h
        assert rep.R == rep.S == rep.T_first
        assert rep.rk == [rep.R]
        assert rep.s_equals_t


class TestScanInvariants:
    @pytest.mark.parametrize("alpha,c", [(1.5, 0.4), (0.75, 0.1)])
    def test_ordering_and_identity(self, grid_standard, alpha, c):
        par = LevyParams.stable(alpha, 0.0, c)
        found = 0
        for rep_i in range(30):
            path = sample_path(par, grid_standard, derived_seed(5200, int(alpha * 100), rep_i))
            sol = solve(path, 1.0)
            rep = rst_scan(path, 1.0, sol)
            if rep.R is None or rep.S is None or rep.T_first is None:
                continue
            found += 1
            assert 0.0 <= rep.R <= rep.S <= rep.T_first
            assert rep.S == rep.T_first
            walk = rk_sequence(path, 1.0, k_max=4096, r0=rep.R)
            assert walk.converged
            assert walk.rk[-1] == rep.T_first
            assert walk.steps <= len(sol)
            assert all(a < b for a, b in zip(walk.rk, walk.rk[1:]))
        assert found >= 27

    def test_rk_requires_grid_r0(self, grid_fixture):
        with pytest.raises(ParameterError):
            rk_sequence(zero_path(grid_fixture), 1.0, r0=0.0051)
        with pytest.raises(ParameterError):
            rk_sequence(zero_path(grid_fixture), 1.0, k_max=0)


class TestPermutationMachinery:
    def test_dcor_self_is_one(self):
        rng = np.random.default_rng(1)
        x = rng.normal(size=(80, 3))
        assert abs(distance_correlation(x, x) - 1.0) < 1e-9

    def test_dcor_independent_is_small(self):
        rng = np.random.default_rng(2)
        x = rng.normal(size=(400, 2))
        y = rng.normal(size=(400, 2))
        assert distance_correlation(x, y) < 0.2

    def test_degenerate_dependence_min_pvalue(self):
        rng = np.random.default_rng(3)
        f = rng.normal(size=(100, 3))
        _, p = permutation_pvalue(f, f.copy(), rng, n_perm=999)
        assert p <= 0.001

    def test_null_pvalues_roughly_uniform(self):
        # small sanity version; the full 100-run calibration is in acceptance
        rng = np.random.default_rng(4)
        ps = [
            permutation_pvalue(rng.normal(size=(60, 3)), rng.normal(size=(60, 3)), rng, 499)[1]
            for _ in range(25)
        ]
        assert kstest(ps, "uniform").statistic < 0.3


class TestIndependenceTest:
    def test_needs_enough_reps(self, grid_standard):
        with pytest.raises(ParameterError):
            independence_test(LevyParams.stable(1.5, 0, 0.2), grid_standard, 1.0, 0.5, 50, 1)

    def test_insufficient_data_when_window_too_wide(self, grid_standard):
        with pytest.raises(InsufficientDataError):
            independence_test(
                LevyParams.stable(1.5, 0.0, 0.2), grid_standard, 1.0, 3.9, 100, seed=9
            )

    def test_runs_and_reports(self, grid_standard):
        rep = independence_test(
            LevyParams.stable(1.5, 0.0, 0.2), grid_standard, 1.0, 0.5, 100, seed=10
        )
        assert rep.n_valid + rep.n_dropped == 100
        assert rep.n_dropped <= 20
        assert 0.0 < rep.p_value_global <= 1.0
        assert len(rep.feature_correlations) == 3
        assert rep.f_pre.shape == (rep.n_valid, 3)
        assert np.all(rep.T_values >= 0.0)
