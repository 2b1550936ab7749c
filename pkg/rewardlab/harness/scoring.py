import numpy as np

from ..agents.policies import UniformRandomPolicy
from ..environments.presets import make_env
from ..errors import UndefinedScoreError
from .report_config import RANDOM_BASELINE_EPISODES


def normalized_improvement(ours: float, best_baseline: float, random_policy: float) -> float:
    """100 * (ours - best) / |best - random|, in percent"""
    denominator = abs(best_baseline - random_policy)
    if denominator == 0:
        raise UndefinedScoreError(
            f"best baseline ({best_baseline:g}) equals the random policy score; improvement is undefined")
    return 100.0 * (ours - best_baseline) / denominator


def random_policy_baseline(preset_id: str, episodes: int = RANDOM_BASELINE_EPISODES, seed: int = 0,
                           **overrides) -> float:
    """Mean true return of uniformly sampled actions over ``episodes`` episodes"""
    env = make_env(preset_id, np.random.default_rng(seed), **overrides)
    policy = UniformRandomPolicy(env.action_space)
    action_rng = np.random.default_rng([seed, 1])
    returns = []
    for _ in range(episodes):
        env.reset()
        total = 0.0
        while not env.done:
            total += env.step(policy.act(None, action_rng)).reward_true
        returns.append(total)
    return float(np.mean(returns))
