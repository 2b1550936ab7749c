"""Reward variance tables: variance and error of the true, corrupted and
estimated rewards seen by a frozen policy over repeated batches of episodes."""

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence

import numpy as np
import pandas as pd

from ..agents.policies import UniformRandomPolicy, policy_from_params
from ..environments.base import Environment
from ..environments.presets import make_env
from ..errors import EstimatorNotFittedError
from ..models.reward_statistics import STATISTICS_COLUMNS, RewardStatistics
from ..nn.features import FeatureBuilder
from ..nn.reward_model import RewardRegressor
from ..nn.serialization import load_params
from ..noise.channels import NoiseModel
from ..noise.wrapper import NoisyEnvironment
from ..sources import FeatureMode
from ..tabular.estimator import SampleMeanEstimator
from ..utils.logger import get_logger

logger = get_logger(__name__)

SUMMARY_FIELDS = ("var_r_true", "var_r_corr", "var_r_hat", "mse_corr_vs_true", "mse_r_hat_vs_true")

DEFAULT_TABLE_NOISE = (
    [NoiseModel.gaussian(s) for s in (0.1, 0.2, 0.3, 0.4)]
    + [NoiseModel.uniform(e) for e in (0.1, 0.2, 0.3, 0.4)]
    + [NoiseModel.sparse(e) for e in (0.6, 0.7, 0.8, 0.9, 0.95)]
)


@dataclass
class StatisticsReport:
    trials: List[RewardStatistics] = field(default_factory=list)

    def frame(self) -> pd.DataFrame:
        return pd.DataFrame([t.to_dict() for t in self.trials], columns=STATISTICS_COLUMNS)

    def summary(self) -> Dict[str, float]:
        """Trial means of the five table columns"""
        frame = self.frame()
        return {name: float(frame[name].mean()) for name in SUMMARY_FIELDS}


def _variance(values: np.ndarray) -> float:
    return float(np.var(values, ddof=1)) if values.size > 1 else float("nan")


def measure_reward_statistics(policy, env: Environment, noise: Optional[NoiseModel], estimator,
                              episodes: int = 100, trials: int = 10, seed: int = 0,
                              env_id: str = "") -> StatisticsReport:
    """Run ``trials`` batches of ``episodes`` episodes with a frozen policy and estimator.

    Statistics cover every visited transition of a batch; both MSEs are
    taken against the true reward. Keys the estimator has never seen fall
    back to the observed reward and are counted.
    """
    if not getattr(estimator, "fitted", False):
        raise EstimatorNotFittedError("reward estimator has not been fitted")
    noise = noise or NoiseModel.identity()
    noisy = env if isinstance(env, NoisyEnvironment) else NoisyEnvironment(
        env, noise, np.random.default_rng([seed, 1]))
    action_rng = np.random.default_rng([seed, 2])
    report = StatisticsReport()
    for trial in range(trials):
        true_rewards, observed, estimated = [], [], []
        fallbacks = 0
        for _ in range(episodes):
            state = noisy.reset()
            while not noisy.done:
                action = policy.act(noisy.encode(state), action_rng)
                transition = noisy.step(policy.env_action(action))
                try:
                    r_hat = estimator.predict_transition(transition)
                except KeyError:
                    r_hat = transition.reward_observed
                    fallbacks += 1
                true_rewards.append(transition.reward_true)
                observed.append(transition.reward_observed)
                estimated.append(r_hat)
                state = transition.next_state
        r_true = np.asarray(true_rewards, dtype=float)
        r_corr = np.asarray(observed, dtype=float)
        r_hat = np.asarray(estimated, dtype=float)
        report.trials.append(RewardStatistics(
            env=env_id,
            noise=noisy.model.label(),
            level=noisy.model.level,
            trial=trial,
            transitions=int(r_true.size),
            var_r_true=_variance(r_true),
            var_r_corr=_variance(r_corr),
            var_r_hat=_variance(r_hat),
            mse_corr_vs_true=float(np.mean((r_corr - r_true) ** 2)),
            mse_r_hat_vs_true=float(np.mean((r_hat - r_true) ** 2)),
            fallback_events=fallbacks,
        ))
    if any(t.fallback_events for t in report.trials):
        logger.info("%s: estimator fell back to observed rewards on unseen keys", noisy.model.label())
    return report


def fit_sample_mean_estimator(env: Environment, noise: Optional[NoiseModel], episodes: int = 100,
                              seed: int = 0, key_mode: FeatureMode = FeatureMode.S,
                              policy=None) -> SampleMeanEstimator:
    """Pretrain a tabular estimator on corrupted rewards of ``episodes`` episodes"""
    policy = policy or UniformRandomPolicy(env.action_space)
    noisy = NoisyEnvironment(env, noise, np.random.default_rng([seed, 3]))
    action_rng = np.random.default_rng([seed, 4])
    estimator = SampleMeanEstimator(key_mode)
    for _ in range(episodes):
        state = noisy.reset()
        while not noisy.done:
            transition = noisy.step(policy.env_action(policy.act(noisy.encode(state), action_rng)))
            estimator.observe_transition(transition)
            state = transition.next_state
    return estimator


def variance_table(preset: str = "chain5", reward_value: float = 5.0, reward_prob: float = 0.5,
                   noises: Sequence[NoiseModel] = DEFAULT_TABLE_NOISE, fit_episodes: int = 100,
                   episodes: int = 100, trials: int = 10, seed: int = 0) -> pd.DataFrame:
    """One row per (channel, level, trial) for a chain preset under a pretrained sample-mean estimator"""
    rows = []
    for index, noise in enumerate(noises):
        env = make_env(preset, np.random.default_rng([seed, index]),
                       reward_value=reward_value, reward_prob=reward_prob)
        estimator = fit_sample_mean_estimator(env, noise, fit_episodes, seed)
        policy = UniformRandomPolicy(env.action_space)
        report = measure_reward_statistics(policy, env, noise, estimator, episodes, trials, seed, env_id=preset)
        rows.extend(t.to_dict() for t in report.trials)
    return pd.DataFrame(rows, columns=STATISTICS_COLUMNS)


def measure_from_checkpoints(env_id: str, policy_path: str, reward_path: str, feature_mode: FeatureMode,
                             noise: Optional[NoiseModel] = None, episodes: int = 100, trials: int = 10,
                             seed: int = 0, **overrides) -> StatisticsReport:
    """Reward statistics of a saved policy and reward model, both frozen"""
    env = make_env(env_id, np.random.default_rng(seed), **overrides)
    policy = policy_from_params(*load_params(policy_path), env.action_space)
    features = FeatureBuilder.for_env(FeatureMode(feature_mode), env)
    regressor = RewardRegressor.from_params(features, *load_params(reward_path))
    return measure_reward_statistics(policy, env, noise, regressor, episodes, trials, seed, env_id=env_id)
