from dataclasses import dataclass
from typing import Any, Sequence, Tuple

import numpy as np

from ..environments.base import ActionSpace
from ..errors import DimensionMismatchError, NonFiniteError
from ..nn.mlp import MlpParams, backward, forward_cached, init_mlp, parameter_count

LOG_2PI = float(np.log(2.0 * np.pi))


@dataclass
class PolicyEvaluation:
    log_probs: np.ndarray
    entropy: np.ndarray
    cache: Any


class CategoricalPolicy:
    """Softmax policy head over a discrete action set"""

    def __init__(self, observation_size: int, n_actions: int, rng: np.random.Generator,
                 hidden_sizes: Sequence[int] = (64, 64)):
        self.net = init_mlp((observation_size, *hidden_sizes, n_actions), rng, 1.0, 0.01)
        self.theta = self.net.theta.copy()

    @property
    def sizes(self):
        return self.net.sizes

    def _net(self, theta: np.ndarray) -> MlpParams:
        return self.net.with_theta(theta)

    def _log_softmax(self, logits: np.ndarray) -> np.ndarray:
        shifted = logits - logits.max(axis=1, keepdims=True)
        return shifted - np.log(np.exp(shifted).sum(axis=1, keepdims=True))

    def evaluate(self, theta: np.ndarray, observations: np.ndarray, actions) -> PolicyEvaluation:
        logits, cache = forward_cached(self._net(theta), np.atleast_2d(observations))
        log_p = self._log_softmax(logits)
        actions = np.asarray(actions, dtype=int).reshape(-1)
        log_probs = log_p[np.arange(len(actions)), actions]
        if not np.all(np.isfinite(log_probs)):
            raise NonFiniteError("non-finite action log-probability", layer_index=len(self.sizes) - 2)
        probs = np.exp(log_p)
        entropy = -(probs * log_p).sum(axis=1)
        return PolicyEvaluation(log_probs, entropy, (cache, log_p, probs, actions))

    def backward(self, theta: np.ndarray, evaluation: PolicyEvaluation, d_log_probs, d_entropy) -> np.ndarray:
        cache, log_p, probs, actions = evaluation.cache
        onehot = np.zeros_like(probs)
        onehot[np.arange(len(actions)), actions] = 1.0
        d_log_probs = np.asarray(d_log_probs, dtype=float).reshape(-1, 1)
        d_entropy = np.asarray(d_entropy, dtype=float).reshape(-1, 1)
        d_logits = d_log_probs * (onehot - probs) - d_entropy * probs * (log_p + evaluation.entropy[:, None])
        return backward(self._net(theta), cache, d_logits)

    def act_batch(self, observations: np.ndarray, rng: np.random.Generator) -> Tuple[np.ndarray, np.ndarray]:
        logits, _ = forward_cached(self._net(self.theta), np.atleast_2d(observations))
        log_p = self._log_softmax(logits)
        cumulative = np.exp(log_p).cumsum(axis=1)
        draws = rng.random(len(cumulative))
        actions = np.minimum((cumulative < draws[:, None]).sum(axis=1), cumulative.shape[1] - 1)
        return actions, log_p[np.arange(len(actions)), actions]

    def act(self, observation: np.ndarray, rng: np.random.Generator) -> int:
        actions, _ = self.act_batch(observation, rng)
        return int(actions[0])

    def env_action(self, action):
        return int(action)


class GaussianPolicy:
    """Diagonal Gaussian head with a learnable state-independent log-std.

    ``theta`` is the network's flat parameters followed by the log-std vector.
    """

    def __init__(self, observation_size: int, action_size: int, rng: np.random.Generator,
                 hidden_sizes: Sequence[int] = (64, 64), init_log_std: float = 0.0):
        self.net = init_mlp((observation_size, *hidden_sizes, action_size), rng, 1.0, 0.01)
        self.action_size = action_size
        self.theta = np.concatenate([self.net.theta, np.full(action_size, init_log_std)])

    @property
    def sizes(self):
        return self.net.sizes

    def _split(self, theta: np.ndarray) -> Tuple[MlpParams, np.ndarray]:
        n = self.net.theta.size
        return self.net.with_theta(theta[:n]), theta[n:]

    def evaluate(self, theta: np.ndarray, observations: np.ndarray, actions) -> PolicyEvaluation:
        net, log_std = self._split(theta)
        mean, cache = forward_cached(net, np.atleast_2d(observations))
        actions = np.asarray(actions, dtype=float).reshape(mean.shape)
        std = np.exp(log_std)
        z = (actions - mean) / std
        log_probs = (-0.5 * z ** 2 - log_std - 0.5 * LOG_2PI).sum(axis=1)
        if not np.all(np.isfinite(log_probs)):
            raise NonFiniteError("non-finite action log-probability", layer_index=len(self.sizes) - 2)
        entropy = np.full(len(mean), float(np.sum(log_std + 0.5 * (1.0 + LOG_2PI))))
        return PolicyEvaluation(log_probs, entropy, (cache, z, std))

    def backward(self, theta: np.ndarray, evaluation: PolicyEvaluation, d_log_probs, d_entropy) -> np.ndarray:
        net, _ = self._split(theta)
        cache, z, std = evaluation.cache
        d_log_probs = np.asarray(d_log_probs, dtype=float).reshape(-1, 1)
        d_entropy = np.asarray(d_entropy, dtype=float).reshape(-1)
        d_mean = d_log_probs * z / std
        d_log_std = (d_log_probs * (z ** 2 - 1.0)).sum(axis=0) + d_entropy.sum()
        return np.concatenate([backward(net, cache, d_mean), d_log_std])

    def act_batch(self, observations: np.ndarray, rng: np.random.Generator) -> Tuple[np.ndarray, np.ndarray]:
        net, log_std = self._split(self.theta)
        mean, _ = forward_cached(net, np.atleast_2d(observations))
        std = np.exp(log_std)
        noise = rng.standard_normal(mean.shape)
        actions = mean + std * noise
        log_probs = (-0.5 * noise ** 2 - log_std - 0.5 * LOG_2PI).sum(axis=1)
        return actions, log_probs

    def act(self, observation: np.ndarray, rng: np.random.Generator) -> np.ndarray:
        actions, _ = self.act_batch(observation, rng)
        return actions[0]

    def env_action(self, action):
        return np.asarray(action, dtype=float)


class UniformRandomPolicy:
    """Samples uniformly from the action space, ignoring the observation"""

    def __init__(self, action_space: ActionSpace):
        self.action_space = action_space

    def act(self, observation, rng: np.random.Generator):
        return self.action_space.sample(rng)

    def env_action(self, action):
        return action


def make_policy(observation_size: int, action_space: ActionSpace, rng: np.random.Generator,
                hidden_sizes: Sequence[int] = (64, 64)):
    if action_space.is_discrete:
        return CategoricalPolicy(observation_size, action_space.n, rng, hidden_sizes)
    return GaussianPolicy(observation_size, action_space.n, rng, hidden_sizes)


def policy_from_params(sizes: Sequence[int], theta: np.ndarray, action_space: ActionSpace):
    """Rebuild a frozen policy from a parameter file's contents"""
    sizes = tuple(sizes)
    policy = make_policy(sizes[0], action_space, np.random.default_rng(0), sizes[1:-1])
    if policy.sizes != sizes:
        raise DimensionMismatchError(f"parameter file sizes {sizes} do not match the environment's policy {policy.sizes}")
    expected = parameter_count(sizes) + (0 if action_space.is_discrete else action_space.n)
    if theta.size != expected:
        raise DimensionMismatchError(f"expected {expected} policy parameters, got {theta.size}")
    policy.theta = np.asarray(theta, dtype=float).copy()
    return policy
