from typing import Tuple

import numpy as np

from ..errors import DimensionMismatchError
from ..nn.mlp import MlpParams, grad, mse_output_loss


def a2c_actor_loss(policy, theta: np.ndarray, observations: np.ndarray, actions, advantages,
                   entropy_coef: float = 0.01) -> Tuple[float, np.ndarray]:
    """-mean(log pi(a|s) * A) - c * mean(entropy); advantages are constants"""
    advantages = np.asarray(advantages, dtype=float).reshape(-1)
    evaluation = policy.evaluate(theta, observations, actions)
    n = len(advantages)
    loss = -np.mean(evaluation.log_probs * advantages) - entropy_coef * np.mean(evaluation.entropy)
    g = policy.backward(theta, evaluation, -advantages / n, np.full(n, -entropy_coef / n))
    return float(loss), g


def clipped_objective(ratios, advantages, clip_epsilon: float) -> np.ndarray:
    """Per-step min(rho * A, clip(rho, 1 - eps, 1 + eps) * A)"""
    ratios = np.asarray(ratios, dtype=float)
    advantages = np.asarray(advantages, dtype=float)
    clipped = np.clip(ratios, 1.0 - clip_epsilon, 1.0 + clip_epsilon) * advantages
    return np.minimum(ratios * advantages, clipped)


def clipped_surrogate_loss(policy, theta: np.ndarray, old_log_probs, observations: np.ndarray, actions,
                           advantages, clip_epsilon: float = 0.2,
                           entropy_coef: float = 0.0) -> Tuple[float, np.ndarray]:
    advantages = np.asarray(advantages, dtype=float).reshape(-1)
    old_log_probs = np.asarray(old_log_probs, dtype=float).reshape(-1)
    evaluation = policy.evaluate(theta, observations, actions)
    n = len(advantages)
    ratios = np.exp(evaluation.log_probs - old_log_probs)
    unclipped = ratios * advantages
    objective = clipped_objective(ratios, advantages, clip_epsilon)
    loss = -np.mean(objective) - entropy_coef * np.mean(evaluation.entropy)
    # gradient only flows where the unclipped branch is the minimum
    active = unclipped <= np.clip(ratios, 1.0 - clip_epsilon, 1.0 + clip_epsilon) * advantages
    d_log_probs = np.where(active, -unclipped / n, 0.0)
    g = policy.backward(theta, evaluation, d_log_probs, np.full(n, -entropy_coef / n))
    return float(loss), g


def critic_loss(critic: MlpParams, observations: np.ndarray, targets) -> Tuple[float, np.ndarray]:
    """Mean squared error between V(s) and fixed targets"""
    targets = np.asarray(targets, dtype=float).reshape(-1)
    observations = np.atleast_2d(np.asarray(observations, dtype=float))
    if len(observations) != len(targets):
        raise DimensionMismatchError(f"{len(observations)} observations for {len(targets)} targets")
    return grad(critic, mse_output_loss(targets), observations)
