import numpy as np
import pandas as pd
import pytest

from rewardlab.environments import build_chain, make_env
from rewardlab.environments.chain import ChainEnv
from rewardlab.agents import UniformRandomPolicy
from rewardlab.errors import EstimatorNotFittedError, InvalidParameterError
from rewardlab.models import STATISTICS_COLUMNS
from rewardlab.noise import NoiseModel
from rewardlab.tabular import SampleMeanEstimator
from rewardlab.variance import (BernoulliReward, GaussianReward, JointLaw, analytic_decomposition, decompose_arrays,
                                decompose_target_variance, fit_sample_mean_estimator, measure_reward_statistics,
                                predicted_gap, reduction_condition, run_check, run_gap_check, variance_gap,
                                variance_table, verify_cov_scaling, verify_sample_mean_variance)


class TestDecomposition:
    def test_two_point_sample(self):
        d = decompose_target_variance([(1.0, 0.0), (0.0, 0.0)])
        assert d.var_reward == pytest.approx(0.5)
        assert d.var_next_value == 0.0
        assert d.cov_reward_value == 0.0
        assert d.var_target == pytest.approx(0.5)

    def test_constant_pairs(self):
        d = decompose_target_variance([(2.0, 3.0)] * 5)
        assert (d.var_reward, d.var_next_value, d.cov_reward_value, d.var_target) == (0.0, 0.0, 0.0, 0.0)

    def test_bernoulli_reward_with_constant_next_value(self, rng):
        r = BernoulliReward(5.0, 0.5).sample(rng, 1_000_000)
        d = decompose_arrays(r, np.full(r.size, 3.0))
        assert d.var_reward == pytest.approx(6.25, rel=0.01)
        assert d.cov_reward_value == pytest.approx(0.0, abs=1e-12)

    def test_identity_holds_on_measured_batches(self, rng):
        for law in (JointLaw.mixture(2.0), JointLaw.negative(), JointLaw.independent(5.0, 0.3)):
            d = decompose_arrays(*law.sample(rng, 5000))
            assert d.identity_residual <= 1e-8

    @pytest.mark.parametrize("pairs", [[(1.0, 0.0)], []])
    def test_too_few_samples(self, pairs):
        with pytest.raises(InvalidParameterError):
            decompose_target_variance(pairs)

    def test_analytic_law_moments(self):
        negative = JointLaw.negative()
        assert negative.var_reward == pytest.approx(0.25)
        assert negative.cov == pytest.approx(-0.5)
        mixture = JointLaw.mixture(1.0)
        assert mixture.cov == pytest.approx(mixture.var_reward)
        d = analytic_decomposition(mixture, 4)
        assert d.var_reward == pytest.approx(0.25 / 4)
        assert d.var_target == pytest.approx(d.var_reward + d.var_next_value + 2 * d.cov_reward_value, rel=1e-8)

    def test_probabilities_must_sum_to_one(self):
        with pytest.raises(InvalidParameterError):
            JointLaw.table([(0.0, 0.0, 0.5), (1.0, 1.0, 0.4)])


class TestSampleMeanVariance:
    def test_single_sample_is_the_estimator(self):
        check = verify_sample_mean_variance(BernoulliReward(5.0, 0.5), 1, 100_000, seed=0)
        assert check.ratio == pytest.approx(1.0, abs=0.05)
        assert check.passed

    def test_bernoulli_ten_samples(self):
        check = verify_sample_mean_variance(BernoulliReward(5.0, 0.5), 10, 100_000, seed=1)
        assert check.ratio == pytest.approx(0.1, rel=0.05)
        assert check.passed

    def test_gaussian_hundred_samples(self):
        check = verify_sample_mean_variance(GaussianReward(0.0, 1.0), 100, 100_000, seed=2)
        assert check.ratio == pytest.approx(0.01, rel=0.05)
        assert check.passed

    def test_standard_error_shrinks_at_monte_carlo_rate(self):
        law = BernoulliReward(5.0, 0.5)
        small = verify_sample_mean_variance(law, 10, 25_000, seed=3)
        large = verify_sample_mean_variance(law, 10, 100_000, seed=4)
        assert small.ratio_standard_error / large.ratio_standard_error == pytest.approx(2.0, rel=0.1)

    def test_rejects_bad_n(self):
        with pytest.raises(InvalidParameterError):
            verify_sample_mean_variance(BernoulliReward(), 0)


class TestCovarianceScaling:
    @pytest.mark.parametrize("n", [1, 10])
    def test_independent_reward_and_value(self, n):
        check = verify_cov_scaling(JointLaw.independent(5.0, 0.5), n, 100_000, seed=n)
        assert check.reference == 0.0
        assert np.isnan(check.ratio)
        assert check.passed

    def test_coupled_single_sample(self):
        check = verify_cov_scaling(JointLaw.coupled(1.0, 0.5), 1, 100_000, seed=5)
        assert check.ratio == pytest.approx(1.0, rel=0.1)

    def test_mixture_ten_samples(self):
        check = verify_cov_scaling(JointLaw.mixture(1.0), 10, 100_000, seed=6)
        assert check.ratio == pytest.approx(0.1, rel=0.1)
        assert check.passed

    def test_ratio_standard_error_scales(self):
        law = JointLaw.mixture(1.0)
        small = verify_cov_scaling(law, 5, 25_000, seed=7)
        large = verify_cov_scaling(law, 5, 100_000, seed=8)
        assert small.ratio_standard_error / large.ratio_standard_error == pytest.approx(2.0, rel=0.1)


class TestVarianceGap:
    def test_closed_form(self):
        assert predicted_gap(0.25, -0.5, 10) == pytest.approx(0.675)
        assert predicted_gap(3.0, 1.0, 1) == 0.0
        assert reduction_condition(0.25, 0.1)
        assert not reduction_condition(0.25, -0.5)

    def test_analytic_decompositions(self):
        law = JointLaw.mixture(1.0)
        gap = variance_gap(analytic_decomposition(law), analytic_decomposition(law, 10), 10)
        assert gap.matches and gap.estimator_no_worse and gap.condition_holds
        assert gap.gap < 0

    @pytest.mark.parametrize("name", ["coupled", "mixture", "independent"])
    def test_nonnegative_covariance_never_hurts(self, name):
        law = {"coupled": JointLaw.coupled(1.0, 0.5), "mixture": JointLaw.mixture(1.0),
               "independent": JointLaw.independent(5.0, 0.5)}[name]
        assert law.cov >= 0
        for n in (2, 10):
            gap = run_gap_check(law, n, 100_000, seed=n)
            assert gap.estimator_no_worse
            assert gap.matches
            assert gap.condition_holds

    def test_single_sample_gap_is_zero(self):
        gap = run_gap_check(JointLaw.mixture(1.0), 1, 10_000, seed=0)
        assert gap.gap == 0.0
        assert gap.matches and gap.estimator_no_worse

    def test_negative_covariance_counterexample(self):
        law = JointLaw.negative()
        assert 2 * abs(law.cov) > law.var_reward
        gap = run_gap_check(law, 10, 100_000, seed=9)
        assert not gap.condition_holds
        assert gap.gap > gap.tolerance
        assert not gap.estimator_no_worse
        assert gap.matches


class _PerfectChainEstimator:
    """Predicts the exact per-transition reward mean of a chain"""

    fitted = True

    def __init__(self, chain):
        self.chain = chain

    def predict_transition(self, transition):
        return self.chain.expected_reward


def _chain_env(seed, value=5.0):
    return ChainEnv(build_chain(5, value, 0.5), np.random.default_rng(seed))


class TestRewardStatistics:
    def test_identity_noise_with_perfect_estimator(self):
        env = _chain_env(0)
        report = measure_reward_statistics(UniformRandomPolicy(env.action_space), env, None,
                                           _PerfectChainEstimator(env.chain), episodes=20, trials=3)
        frame = report.frame()
        assert list(frame.columns) == STATISTICS_COLUMNS
        assert (frame["var_r_corr"] == frame["var_r_true"]).all()
        assert (frame["mse_corr_vs_true"] == 0.0).all()
        assert (frame["var_r_hat"] == 0.0).all()
        assert (frame["transitions"] == 100).all()

    def test_gaussian_noise_adds_its_variance(self):
        env = _chain_env(1)
        noise = NoiseModel.gaussian(0.4)
        estimator = fit_sample_mean_estimator(env, noise, episodes=100, seed=1)
        summary = measure_reward_statistics(UniformRandomPolicy(env.action_space), env, noise, estimator,
                                            episodes=100, trials=10, seed=1).summary()
        assert summary["var_r_corr"] == pytest.approx(summary["var_r_true"] + 0.16, rel=0.05)

    def test_heavy_sparsification(self):
        env = _chain_env(2)
        noise = NoiseModel.sparse(0.9)
        estimator = fit_sample_mean_estimator(env, noise, episodes=100, seed=2)
        summary = measure_reward_statistics(UniformRandomPolicy(env.action_space), env, noise, estimator,
                                            episodes=100, trials=10, seed=2).summary()
        assert summary["var_r_corr"] < 0.3 * summary["var_r_true"]
        assert summary["var_r_hat"] < summary["var_r_corr"]
        # eps * E[r^2] and var r + (E r - E r_corr)^2
        assert summary["mse_corr_vs_true"] == pytest.approx(0.9 * 12.5, rel=0.1)
        assert summary["mse_r_hat_vs_true"] == pytest.approx(6.25 + 2.25 ** 2, rel=0.1)

    def test_unseen_keys_fall_back(self):
        env = _chain_env(3)
        estimator = SampleMeanEstimator().observe(0, 2.5)
        report = measure_reward_statistics(UniformRandomPolicy(env.action_space), env, None, estimator,
                                           episodes=2, trials=1)
        assert report.trials[0].fallback_events == 8

    def test_unfitted_estimator(self):
        env = _chain_env(4)
        with pytest.raises(EstimatorNotFittedError):
            measure_reward_statistics(UniformRandomPolicy(env.action_space), env, None, SampleMeanEstimator())

    def test_same_seed_same_table(self):
        kwargs = dict(noises=[NoiseModel.gaussian(0.4), NoiseModel.sparse(0.9)], fit_episodes=20, episodes=10,
                      trials=2, seed=5)
        first = variance_table(**kwargs)
        pd.testing.assert_frame_equal(first, variance_table(**kwargs))
        assert len(first) == 4
        assert list(first["noise"].unique()) == ["gaussian:0.4", "sparse:0.9"]
        assert (first["env"] == "chain5").all()

    def test_grid_estimator_keys_on_state(self):
        env = make_env("grid5", np.random.default_rng(0), max_steps=10)
        estimator = fit_sample_mean_estimator(env, None, episodes=5, seed=0)
        assert estimator.fitted
        assert all(isinstance(key, int) for key in estimator.count)


class TestRunCheck:
    def test_sample_mean_rows(self):
        frame = run_check("sample-mean", trials=2000, ns=(1, 2))
        assert len(frame) == 4
        assert set(frame["law"]) == {"bernoulli", "gaussian"}
        assert {"ratio", "passed", "ratio_standard_error"} <= set(frame.columns)

    def test_gap_rows_flag_the_counterexample(self):
        frame = run_check("gap", trials=50_000, seed=1, ns=(10,))
        flags = dict(zip(frame["law"], frame["condition_holds"]))
        assert flags == {"coupled": True, "mixture": True, "independent": True, "negative": False}

    def test_unknown_check(self):
        with pytest.raises(InvalidParameterError):
            run_check("bogus")

    @pytest.mark.slow
    def test_full_battery_passes(self):
        for check in ("sample-mean", "covariance"):
            assert run_check(check, trials=100_000, seed=0)["passed"].all()
        gap = run_check("gap", trials=100_000, seed=0)
        assert gap["matches"].all()
        multi = gap[gap["n"] > 1]
        assert (multi["estimator_no_worse"] == multi["condition_holds"]).all()
