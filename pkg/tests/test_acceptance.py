"""End-to-end checks of the lab's headline claims.

Everything marked ``slow`` runs the full-size experiments; use
``./test-lab.sh slow`` to include them.
"""

import numpy as np
import pandas as pd
import pytest

from rewardlab.environments import ActionSpace, PointMassEnv, TransitionTuple
from rewardlab.harness import SuiteConfig, run_suite
from rewardlab.harness.suite import run_train_suite
from rewardlab.nn import FeatureBuilder, RewardRegressor
from rewardlab.noise import NoiseModel, NoisyEnvironment, corrupt_many, expected_corrupted
from rewardlab.sources import FeatureMode
from rewardlab.tabular import SampleMeanEstimator, run_tabular_experiment, summarize_tabular
from rewardlab.variance import (BernoulliReward, GaussianReward, JointLaw, run_gap_check,
                                verify_sample_mean_variance)


def test_repeated_suite_gives_identical_csv(tmp_path):
    lines = ["suite.id=repeat", "suite.seeds=0,1", "env.id=pointmass", "env.horizon=5",
             "noise.sweep=none,sparse:0.5", "train.sources=sampled,estimated:sa", "train.updates=2",
             "train.n_envs=2", "train.rollout_length=5", "train.window=3"]
    texts = []
    for name, workers in (("one", 1), ("two", 4)):
        path = tmp_path / f"{name}.cfg"
        path.write_text("\n".join(lines) + "\n", encoding="utf-8")
        out = tmp_path / f"{name}.csv"
        run_suite(str(path), workers=workers, output_path=str(out))
        texts.append(pd.read_csv(out).drop(columns="timestamp").to_csv(index=False))
    assert texts[0] == texts[1]


@pytest.mark.slow
@pytest.mark.parametrize("preset", ["chain5", "chain10"])
@pytest.mark.parametrize("reward", [1.0, 2.0, 5.0])
def test_estimator_lowers_rmse_at_high_learning_rates(preset, reward):
    frame = run_tabular_experiment(preset, reward_value=reward, reward_prob=0.5, alphas=[0.5, 0.75, 1.0],
                                   episodes=100, seeds=range(10), workers=4)
    summary = summarize_tabular(frame)
    assert (summary["estimator_wins"] >= 9).all(), summary


@pytest.mark.slow
@pytest.mark.parametrize("law", [BernoulliReward(5.0, 0.5), GaussianReward(0.0, 1.0)])
@pytest.mark.parametrize("n", [1, 10, 100])
def test_sample_mean_variance_at_full_scale(law, n):
    check = verify_sample_mean_variance(law, n, 1_000_000, seed=n)
    assert abs(check.ratio - 1.0 / n) <= 0.05 / n


@pytest.mark.slow
def test_gap_sign_follows_the_covariance_condition():
    laws = {"positive": JointLaw.mixture(1.0), "zero": JointLaw.independent(5.0, 0.5), "negative": JointLaw.negative()}
    for name, law in laws.items():
        gap = run_gap_check(law, 10, 1_000_000, seed=1)
        assert abs(gap.gap - gap.predicted) <= 3 * gap.standard_error, name
        assert (gap.gap > 0) == (name == "negative"), name
        assert gap.condition_holds == (name != "negative")


def frozen_sparse_rewards(epsilon, size, rng):
    """Observed rewards whose nonzero share is exactly (1 - eps) / 2, shuffled"""
    nonzero = int(round(size * (1.0 - epsilon) * 0.5))
    rewards = np.zeros(size)
    rewards[:nonzero] = 5.0
    return rng.permutation(rewards)


@pytest.mark.slow
@pytest.mark.parametrize("epsilon", [0.5, 0.9])
def test_estimators_converge_to_sparsified_mean(epsilon):
    rng = np.random.default_rng(0)
    target = expected_corrupted(NoiseModel.sparse(epsilon), 2.5)

    true_rewards = (rng.random(400_000) < 0.5) * 5.0
    tabular = SampleMeanEstimator()
    for r in corrupt_many(NoiseModel.sparse(epsilon), true_rewards, rng):
        tabular.observe(0, r)
    assert tabular.predict(0) == pytest.approx(target, rel=0.05)

    observed = frozen_sparse_rewards(epsilon, 2000, rng)
    features = FeatureBuilder(FeatureMode.SA, 1, ActionSpace("discrete", 1), lambda s: np.array([1.0]))
    batch = [TransitionTuple(0, 0, 0, 0.0, float(r), False) for r in observed]
    regressor = RewardRegressor(features, rng, lr=3e-3, hidden_sizes=(8,))
    regressor.fit_transitions(batch, steps=2000)
    assert regressor.predict_transition(batch[0]) == pytest.approx(target, rel=0.05)


def pointmass_transitions(seed, noise, episodes):
    """Uniform-random rollouts through the noise channel"""
    env = NoisyEnvironment(PointMassEnv(rng=np.random.default_rng(seed)), noise, np.random.default_rng(seed + 1))
    action_rng = np.random.default_rng(seed + 2)
    transitions = []
    for _ in range(episodes):
        env.reset()
        done = False
        while not done:
            transition = env.step(env.sample_action(action_rng))
            transitions.append(transition)
            done = transition.done
    return transitions


@pytest.mark.slow
def test_regressor_beats_corrupted_rewards_on_held_out_states():
    noise = NoiseModel.gaussian(0.4)
    train = pointmass_transitions(0, noise, episodes=80)
    held_out = pointmass_transitions(100, noise, episodes=20)
    regressor = RewardRegressor(FeatureBuilder.for_env(FeatureMode.SA, PointMassEnv()), np.random.default_rng(3),
                                lr=3e-3, hidden_sizes=(32, 32))
    regressor.fit_transitions(train, steps=3000)

    true = np.array([t.reward_true for t in held_out])
    observed = np.array([t.reward_observed for t in held_out])
    corrupted_mse = float(np.mean((observed - true) ** 2))
    estimate_mse = float(np.mean((regressor.predict_transitions(held_out) - true) ** 2))
    assert corrupted_mse == pytest.approx(0.16, rel=0.15)
    assert estimate_mse < corrupted_mse


def train_suite(folder, suite_id, env_lines, noise, sources, seeds=10, updates=300):
    values = {
        "suite.id": suite_id,
        "suite.seeds": ",".join(str(s) for s in range(seeds)),
        "noise.sweep": noise,
        "train.sources": sources,
        "train.updates": str(updates),
        "output.path": str(folder / f"{suite_id}.csv"),
    }
    values.update(env_lines)
    return run_train_suite(SuiteConfig.from_values(values), workers=4)


def final_frame(result):
    final = result.results.sort_values("update").groupby(["noise", "source", "seed"]).tail(1)
    return final.pivot_table(index=["noise", "seed"], columns="source", values=["mean_return", "mean_sq_advantage"])


@pytest.mark.slow
def test_estimator_wins_under_uniform_noise_on_pointmass(tmp_path):
    result = train_suite(tmp_path, "accept-pointmass-uniform", {"env.id": "pointmass", "train.algo": "clipped"},
                         "uniform:0.3", "sampled,estimated:sa")
    returns = final_frame(result)["mean_return"]
    wins = int((returns["estimated:sa"] > returns["sampled"]).sum())
    assert wins >= 9  # one-sided sign test p < 0.05 over 10 seeds


@pytest.mark.slow
def test_gridworld_noise_and_zero_noise_parity(tmp_path):
    result = train_suite(tmp_path, "accept-grid", {"env.id": "grid5", "train.algo": "a2c"}, "none,gaussian:0.3",
                         "sampled,estimated:sa")
    returns = final_frame(result)["mean_return"]
    noisy = returns.loc["gaussian:0.3"]
    assert int((noisy["estimated:sa"] > noisy["sampled"]).sum()) >= 9
    clean = returns.loc["none"].mean()
    assert abs(clean["estimated:sa"] - clean["sampled"]) <= 0.1 * abs(clean["sampled"])


@pytest.mark.slow
def test_estimated_targets_shrink_squared_advantage(tmp_path):
    result = train_suite(tmp_path, "accept-td-error", {"env.id": "pointmass"}, "gaussian:0.4", "sampled,estimated:sa")
    squared = final_frame(result)["mean_sq_advantage"]
    assert int((squared["estimated:sa"] < squared["sampled"]).sum()) > 5


@pytest.mark.slow
def test_action_features_beat_state_features_under_action_cost(tmp_path):
    result = train_suite(tmp_path, "accept-feature-modes", {"env.id": "pointmass", "env.action_cost": "0.5"}, "none",
                         "estimated:s,estimated:sa")
    returns = final_frame(result)["mean_return"]
    assert int((returns["estimated:sa"] > returns["estimated:s"]).sum()) > 5
