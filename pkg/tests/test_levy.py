import math

import numpy as np
import pytest
from scipy.integrate import quad
from scipy.stats import ks_2samp

from levyburgers import (
    GridError,
    GridSpec,
    JumpDist,
    LevyParams,
    ParameterError,
    abruptness_integral_estimate,
    classify,
    sample_path,
    stable_increment,
    stable_increments,
)
from conftest import derived_seed

# 0.75-quantile of the standard symmetric 1.5-stable law, frozen from the
# characteristic-function inversion oracle below.
STABLE15_Q75 = 0.9689331817


def stable_sym_cdf(x: float, alpha: float) -> float:
    """Gil-Pelaez inversion of the symmetric stable cf exp(-|u|^alpha)."""
    val, _ = quad(lambda u: math.sin(u * x) / u * math.exp(-(u**alpha)), 0, np.inf, limit=400)
    return 0.5 + val / math.pi


class TestGridSpec:
    def test_basic(self):
        g = GridSpec.symmetric(8.0, 4097)
        assert g.h == 16.0 / 4096
        pts = g.points()
        assert pts[g.zero_index] == 0.0
        assert pts[0] == -8.0 and pts[-1] == 8.0
        assert np.all(np.diff(pts) > 0)

    def test_too_few_points(self):
        with pytest.raises(GridError):
            GridSpec(-1.0, 1.0, 2)

    def test_zero_off_grid(self):
        # h = 0.15: nearest grid point to 0 is at -0.05
        with pytest.raises(GridError):
            GridSpec(-0.5, 1.0, 11)

    def test_must_straddle_zero(self):
        with pytest.raises(GridError):
            GridSpec(0.5, 1.5, 11)


class TestSamplePath:
    def test_zero_variance_brownian_is_flat(self):
        g = GridSpec.symmetric(2.0, 65)
        p = sample_path(LevyParams.brownian(0.0), g, seed=7)
        assert np.all(p.values == 0.0)
        assert p.tracked_jumps == ()

    def test_determinism_bit_for_bit(self):
        g = GridSpec.symmetric(4.0, 513)
        par = LevyParams.stable(1.5, 0.3, 0.7)
        p1 = sample_path(par, g, seed=123456789)
        p2 = sample_path(par, g, seed=123456789)
        assert np.array_equal(p1.values, p2.values)
        assert p1.tracked_jumps == p2.tracked_jumps
        p3 = sample_path(par, g, seed=123456790)
        assert not np.array_equal(p1.values, p3.values)

    def test_anchored_at_origin(self):
        g = GridSpec.symmetric(4.0, 513)
        for fam in (
            LevyParams.brownian(1.0),
            LevyParams.stable(0.75, 0.0),
            LevyParams.cauchy(2.0),
            LevyParams.compound_poisson(3.0, JumpDist("normal", 0.0, 1.0)),
        ):
            p = sample_path(fam, g, seed=11)
            assert p.values[g.zero_index] == 0.0

    def test_brownian_moments(self):
        # h = 0.01 and 1e5 increments; sample mean within 4 stderr of 0 and
        # sample std within 5% of sqrt(h) = 0.1
        g = GridSpec(-500.0, 500.0, 100_001)
        assert abs(g.h - 0.01) < 1e-12
        p = sample_path(LevyParams.brownian(1.0), g, seed=2024)
        inc = np.diff(p.values)
        stderr = 0.1 / math.sqrt(len(inc))
        assert abs(inc.mean()) < 4 * stderr
        assert abs(inc.std() - 0.1) < 0.005

    def test_two_sided_increments_same_law(self):
        # two-sample KS on the two sides at level 0.01; over 100 seeds the
        # failure rate stays within the nominal 5%
        g = GridSpec.symmetric(100.0, 20_001)
        par = LevyParams.brownian(1.0)
        failures = 0
        for rep in range(100):
            p = sample_path(par, g, seed=derived_seed(5, rep))
            inc = np.diff(p.values)
            left, right = inc[: g.zero_index], inc[g.zero_index :]
            if ks_2samp(left, right).pvalue < 0.01:
                failures += 1
        assert failures <= 5

    def test_stable_jumps_tracked(self):
        g = GridSpec.symmetric(8.0, 4097)
        p = sample_path(LevyParams.stable(0.75, 0.0), g, seed=31)
        assert len(p.tracked_jumps) > 0
        thr = 6.0 * g.h ** (1 / 0.75)
        inc = np.diff(p.values)
        for idx, size in p.tracked_jumps:
            assert 0 < idx < g.n
            assert size != 0.0
            assert abs(size) > 0.99 * thr
            assert inc[idx - 1] == size  # lands at the first point including it
        assert len(p.tracked_jumps) == np.count_nonzero(np.abs(inc) > thr)

    def test_brownian_has_no_tracked_jumps(self):
        g = GridSpec.symmetric(4.0, 513)
        assert sample_path(LevyParams.brownian(1.0), g, seed=3).tracked_jumps == ()

    def test_cpoisson_jumps_reproduce_increments(self):
        g = GridSpec.symmetric(4.0, 513)
        par = LevyParams.compound_poisson(2.0, JumpDist("uniform", -1.0, 2.0))
        p = sample_path(par, g, seed=17)
        rebuilt = np.zeros(g.n - 1)
        for idx, size in p.tracked_jumps:
            rebuilt[idx - 1] += size
        assert np.array_equal(rebuilt, np.diff(p.values))


class TestStableIncrement:
    def test_alpha2_is_gaussian_var_2(self):
        rng = np.random.default_rng(1)
        x = stable_increments(2.0, 0.0, 1.0, 1.0, 200_000, rng)
        assert abs(x.std() - math.sqrt(2.0)) < 0.02
        assert abs(np.mean(np.abs(x) < 1.96 * math.sqrt(2.0)) - 0.95) < 0.01

    def test_alpha2_h_scaling(self):
        rng = np.random.default_rng(2)
        x = stable_increments(2.0, 0.0, 0.5, 0.04, 200_000, rng)
        # Normal(0, 2 c^2 h) with c=0.5, h=0.04 -> std = 0.1414
        assert abs(x.std() - math.sqrt(2 * 0.25 * 0.04)) < 0.003

    def test_cauchy_symmetric_median(self):
        rng = np.random.default_rng(3)
        x = stable_increments(1.0, 0.0, 1.0, 1.0, 100_000, rng)
        # stderr of the Cauchy sample median is pi/(2 sqrt(n))
        assert abs(np.median(x)) < 4 * math.pi / (2 * math.sqrt(len(x)))

    def test_quantile_against_cf_inversion_oracle(self):
        # oracle: numerical inversion of the characteristic function
        q_oracle = STABLE15_Q75
        from scipy.optimize import brentq

        recomputed = brentq(lambda x: stable_sym_cdf(x, 1.5) - 0.75, 0.1, 5.0)
        assert abs(recomputed - q_oracle) < 1e-6
        rng = np.random.default_rng(4)
        x = stable_increments(1.5, 0.0, 1.0, 1.0, 400_000, rng)
        assert abs(np.quantile(x, 0.75) - q_oracle) < 0.02 * q_oracle

    def test_scalar_wrapper(self):
        rng = np.random.default_rng(5)
        v = stable_increment(1.5, 0.5, 1.0, 0.1, rng)
        assert isinstance(v, float)

    @pytest.mark.parametrize(
        "alpha,beta,c",
        [(0.4, 0.0, 1.0), (2.1, 0.0, 1.0), (1.5, 1.5, 1.0), (1.5, 0.0, -1.0), (1.0, 0.5, 1.0)],
    )
    def test_parameter_errors(self, alpha, beta, c):
        rng = np.random.default_rng(0)
        with pytest.raises(ParameterError):
            stable_increments(alpha, beta, c, 1.0, 10, rng)

    def test_h_must_be_positive(self):
        with pytest.raises(ParameterError):
            stable_increments(1.5, 0.0, 1.0, 0.0, 10, np.random.default_rng(0))


class TestClassify:
    def test_brownian(self):
        f = classify(LevyParams.brownian(1.0))
        assert not f.bounded_variation
        assert f.abrupt and not f.eroded
        assert f.hyp_A and f.hyp_B
        assert f.assumption_B == "not_applicable"

    def test_cauchy_is_eroded(self):
        f = classify(LevyParams.cauchy(1.0))
        assert f.eroded and not f.abrupt and not f.bounded_variation

    def test_stable_bv(self):
        f = classify(LevyParams.stable(0.75, 0.0))
        assert f.bounded_variation and f.hyp_B
        assert f.assumption_B == "assumed"

    def test_stable_abrupt(self):
        f = classify(LevyParams.stable(1.5, -0.5))
        assert f.abrupt and not f.eroded and f.hyp_B

    def test_one_sided_bv_stable_fails_oscillation(self):
        # a spectrally one-sided alpha<1 process is monotone near 0
        assert not classify(LevyParams.stable(0.75, 1.0)).hyp_B

    def test_cpoisson_never_hyp_B(self):
        f = classify(LevyParams.compound_poisson(2.0, JumpDist("normal", 0, 1)))
        assert f.bounded_variation and not f.hyp_B
        assert f.assumption_B == "unknown"

    def test_consistency_sweep(self):
        fams = [
            LevyParams.brownian(1.0),
            LevyParams.brownian(0.0),
            LevyParams.cauchy(0.5),
            LevyParams.compound_poisson(1.0, JumpDist("fixed", 1.0)),
        ] + [
            LevyParams.stable(a, b)
            for a in (0.6, 0.75, 0.99, 1.2, 1.5, 2.0)
            for b in (-1.0, -0.3, 0.0, 0.5, 1.0)
            if not (a == 1.0 and b != 0.0)
        ]
        for par in fams:
            f = classify(par)
            assert not (f.abrupt and f.eroded)
            if f.abrupt or f.eroded:
                assert not f.bounded_variation


class TestAbruptnessIntegral:
    def test_degenerate_interval_is_zero(self):
        rows = abruptness_integral_estimate(
            LevyParams.brownian(1.0), 0.5, 0.5, [0.1, 0.01], 1000, seed=1
        )
        assert all(v == 0.0 for _, v in rows)

    def test_rows_match_eps_list(self):
        eps = [0.5, 0.1, 0.02]
        rows = abruptness_integral_estimate(
            LevyParams.stable(1.5, 0.0), -1, 1, eps, 1000, seed=2
        )
        assert [e for e, _ in rows] == eps
        # the integral over a larger range can only be larger
        vals = [v for _, v in rows]
        assert vals[0] <= vals[1] <= vals[2]

    def test_cauchy_grows(self):
        rows = dict(
            abruptness_integral_estimate(
                LevyParams.cauchy(1.0), -1, 1, [1e-1, 1e-2], 2000, seed=3
            )
        )
        assert rows[1e-2] > rows[1e-1] + 0.5

    @pytest.mark.parametrize(
        "kwargs",
        [
            dict(a=1.0, b=-1.0),
            dict(eps_list=[1.5, 0.1]),
            dict(eps_list=[0.1, 0.2]),
            dict(eps_list=[]),
            dict(n_mc=10),
        ],
    )
    def test_parameter_errors(self, kwargs):
        base = dict(a=-1.0, b=1.0, eps_list=[0.1, 0.01], n_mc=1000)
        base.update(kwargs)
        with pytest.raises(ParameterError):
            abruptness_integral_estimate(
                LevyParams.brownian(1.0), base["a"], base["b"], base["eps_list"],
                base["n_mc"], seed=0,
            )


class TestParams:
    def test_cauchy_maps_to_stable_1_0(self):
        assert LevyParams.cauchy(2.0).effective_alpha_beta() == (1.0, 0.0)

    def test_invalid_families(self):
        with pytest.raises(ParameterError):
            LevyParams(family="gamma")
        with pytest.raises(ParameterError):
            LevyParams.brownian(-1.0)
        with pytest.raises(ParameterError):
            LevyParams.stable(0.3, 0.0)
        with pytest.raises(ParameterError):
            LevyParams.compound_poisson(0.0, JumpDist("fixed", 1.0))
        with pytest.raises(ParameterError):
            JumpDist("cauchy", 0, 1)
        with pytest.raises(ParameterError):
            JumpDist("uniform", 2.0, 1.0)
