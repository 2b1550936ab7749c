from dataclasses import dataclass
from typing import Optional

import numpy as np

from ..errors import InvalidParameterError
from .base import ActionSpace, Environment, TransitionTuple, one_hot

RIGHT = 0


@dataclass(frozen=True)
class ChainMdp:
    """Left-to-right chain with a stochastic reward on every transition.

    States are ``0 .. num_reward_steps``; the last one is terminal. Leaving
    any state pays ``reward_value`` with probability ``reward_prob``, else 0.
    """

    num_reward_steps: int
    reward_value: float
    reward_prob: float
    gamma: float = 1.0

    @property
    def num_states(self) -> int:
        return self.num_reward_steps + 1

    @property
    def terminal_state(self) -> int:
        return self.num_reward_steps

    @property
    def expected_reward(self) -> float:
        return self.reward_prob * self.reward_value

    @property
    def reward_variance(self) -> float:
        p = self.reward_prob
        return p * (1.0 - p) * self.reward_value ** 2


def build_chain(num_reward_steps: int, reward_value: float, reward_prob: float, gamma: float = 1.0) -> ChainMdp:
    if int(num_reward_steps) != num_reward_steps or num_reward_steps < 1:
        raise InvalidParameterError(f"num_reward_steps must be a positive integer, got {num_reward_steps}")
    if not 0.0 <= reward_prob <= 1.0:
        raise InvalidParameterError(f"reward_prob must lie in [0, 1], got {reward_prob}")
    if not 0.0 < gamma <= 1.0:
        raise InvalidParameterError(f"gamma must lie in (0, 1], got {gamma}")
    return ChainMdp(int(num_reward_steps), float(reward_value), float(reward_prob), float(gamma))


def true_values(chain: ChainMdp) -> np.ndarray:
    """Exact state values of the only policy; V(terminal) = 0"""
    values = np.zeros(chain.num_states)
    for state in range(chain.num_reward_steps):
        remaining = chain.num_reward_steps - state
        discounts = chain.gamma ** np.arange(remaining)
        values[state] = float(np.sum(discounts)) * chain.expected_reward
    return values


def rollout_values(chain: ChainMdp, episodes: int, rng: np.random.Generator):
    """Brute-force Monte-Carlo value oracle: mean and standard error of the return from each state"""
    n = chain.num_reward_steps
    rewards = (rng.random((episodes, n)) < chain.reward_prob) * chain.reward_value
    discounts = chain.gamma ** np.arange(n)
    means = np.zeros(chain.num_states)
    errors = np.zeros(chain.num_states)
    for state in range(n):
        returns = rewards[:, state:] @ discounts[: n - state]
        means[state] = returns.mean()
        errors[state] = returns.std(ddof=1) / np.sqrt(episodes)
    return means, errors


class ChainEnv(Environment):
    """Runner for a :class:`ChainMdp` under its fixed always-right policy"""

    action_space = ActionSpace("discrete", 1)

    def __init__(self, chain: ChainMdp, rng: Optional[np.random.Generator] = None):
        super().__init__(rng)
        self.chain = chain
        self.observation_size = chain.num_states
        self.reset()

    def reset(self) -> int:
        self.state = 0
        self.done = False
        return self.state

    def _advance(self, action, rng: np.random.Generator) -> TransitionTuple:
        state = self.state
        reward = self.chain.reward_value if rng.random() < self.chain.reward_prob else 0.0
        self.state = state + 1
        return TransitionTuple(
            state=state,
            action=RIGHT,
            next_state=self.state,
            reward_true=reward,
            reward_observed=reward,
            terminal=self.state == self.chain.terminal_state,
        )

    def encode(self, state) -> np.ndarray:
        return one_hot(state, self.chain.num_states)
