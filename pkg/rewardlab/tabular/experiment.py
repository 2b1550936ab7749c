import threading
import time
from concurrent.futures import ThreadPoolExecutor
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd

from ..environments.chain import RIGHT, ChainEnv, ChainMdp, true_values
from ..environments.presets import chain_from_preset
from ..errors import InvalidParameterError
from ..noise.channels import NoiseModel
from ..noise.wrapper import NoisyEnvironment
from ..sources import FeatureMode, RewardSource
from ..utils.logger import get_logger
from ..utils.seeding import derive_seeds
from .estimator import SampleMeanEstimator
from .td import ValueTable, td_update

logger = get_logger(__name__)

DEFAULT_ALPHAS = (0.01, 0.05, 0.1, 0.25, 0.5, 0.75, 1.0)

TABULAR_COLUMNS = ["preset", "reward_value", "prob", "alpha", "source", "seed", "mean_rmse", "fallback_events"]


class TabularTdLearner:
    """TD(0) policy evaluation on a chain with a sampled or sample-mean reward target.

    The environment and noise streams come only from the seeds, so two
    learners built with the same seed but different sources see the same
    trajectories and observed rewards.
    """

    def __init__(self, chain: ChainMdp, alpha: float, reward_source: RewardSource,
                 seed: int, noise: Optional[NoiseModel] = None,
                 key_mode: FeatureMode = FeatureMode.S, cell_index: int = 0):
        if not 0.0 < alpha <= 1.0:
            raise InvalidParameterError(f"alpha must lie in (0, 1], got {alpha}")
        self.chain = chain
        self.alpha = alpha
        self.reward_source = RewardSource(reward_source)
        seeds = derive_seeds(seed, cell_index)
        self.env = NoisyEnvironment(
            ChainEnv(chain, np.random.default_rng(seeds.env)),
            noise,
            np.random.default_rng(seeds.noise),
        )
        self.table = ValueTable.for_chain(chain)
        self.estimator = SampleMeanEstimator(key_mode)
        self.truth = true_values(chain)

    def run_episode(self) -> float:
        """Learn from one episode and return the RMSE at its end"""
        self.env.reset()
        while not self.env.done:
            transition = self.env.step(RIGHT)
            td_update(self.table, transition, self.alpha, self.reward_source, self.estimator)
            if self.reward_source is RewardSource.ESTIMATED:
                self.estimator.observe_transition(transition)
        return self.table.rmse(self.truth)

    def run(self, episodes: int) -> List[float]:
        return [self.run_episode() for _ in range(episodes)]


def run_tabular_cell(chain: ChainMdp, alpha: float, seed: int, noise: Optional[NoiseModel] = None,
                     episodes: int = 100, key_mode: FeatureMode = FeatureMode.S) -> Dict[RewardSource, Tuple[float, int]]:
    """Mean RMSE over the episodes and the fallback count, for both reward sources"""
    results = {}
    for source in (RewardSource.SAMPLED, RewardSource.ESTIMATED):
        learner = TabularTdLearner(chain, alpha, source, seed, noise, key_mode)
        errors = learner.run(episodes)
        results[source] = (float(np.mean(errors)), learner.estimator.fallback_events)
    return results


def run_tabular_experiment(preset: str = "chain5", reward_value: Optional[float] = None,
                           reward_prob: Optional[float] = None, noise: Optional[NoiseModel] = None,
                           alphas: Sequence[float] = DEFAULT_ALPHAS, episodes: int = 100,
                           seeds: Iterable[int] = range(10), key_mode: FeatureMode = FeatureMode.S,
                           gamma: Optional[float] = None, workers: int = 1) -> pd.DataFrame:
    """RMSE-vs-learning-rate sweep on a chain preset.

    Returns one row per (alpha, source, seed) with the RMSE averaged over the
    end of every episode.
    """
    chain = chain_from_preset(preset, reward_value=reward_value, reward_prob=reward_prob, gamma=gamma)
    seeds = list(seeds)
    alphas = [float(a) for a in alphas]
    if not alphas or not seeds:
        raise InvalidParameterError("tabular experiment needs at least one alpha and one seed")
    for alpha in alphas:
        if not 0.0 < alpha <= 1.0:
            raise InvalidParameterError(f"alpha must lie in (0, 1], got {alpha}")

    start_time = time.time()
    print(f"Running tabular TD on {preset} (reward {chain.reward_value:g}, p={chain.reward_prob:g}) "
          f"for {len(alphas)} learning rates x {len(seeds)} seeds...")

    rows: List[Dict] = []
    sink_lock = threading.Lock()

    def run_cell(alpha: float, seed: int) -> None:
        results = run_tabular_cell(chain, alpha, seed, noise, episodes, key_mode)
        with sink_lock:
            for source, (mean_rmse, fallbacks) in results.items():
                rows.append({
                    "preset": preset,
                    "reward_value": chain.reward_value,
                    "prob": chain.reward_prob,
                    "alpha": alpha,
                    "source": source.value,
                    "seed": seed,
                    "mean_rmse": mean_rmse,
                    "fallback_events": fallbacks,
                })

    cells = [(alpha, seed) for alpha in alphas for seed in seeds]
    with ThreadPoolExecutor(max_workers=max(1, workers)) as pool:
        for future in [pool.submit(run_cell, alpha, seed) for alpha, seed in cells]:
            future.result()

    frame = pd.DataFrame(rows, columns=TABULAR_COLUMNS)
    frame = frame.sort_values(["alpha", "source", "seed"], kind="mergesort").reset_index(drop=True)
    logger.info("tabular sweep finished: %d rows", len(frame))
    print(f"Tabular sweep completed in {time.time() - start_time:.2f} seconds")
    return frame


def summarize_tabular(frame: pd.DataFrame) -> pd.DataFrame:
    """Seed-mean RMSE per (alpha, source) and the per-alpha count of seeds where the estimator wins"""
    means = frame.pivot_table(index=["preset", "reward_value", "alpha"], columns="source",
                              values="mean_rmse", aggfunc="mean")
    paired = frame.pivot_table(index=["preset", "reward_value", "alpha", "seed"], columns="source",
                               values="mean_rmse")
    wins = (paired[RewardSource.ESTIMATED.value] < paired[RewardSource.SAMPLED.value]).groupby(
        level=["preset", "reward_value", "alpha"]).sum()
    summary = means.rename(columns=lambda c: f"mean_rmse_{c}")
    summary["estimator_wins"] = wins
    summary["seeds"] = paired.groupby(level=["preset", "reward_value", "alpha"]).size()
    return summary.reset_index()
