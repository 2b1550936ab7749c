import dataclasses
from typing import Optional

import numpy as np

from ..environments.base import Environment, TransitionTuple
from .channels import NoiseModel, corrupt


class NoisyEnvironment:
    """Wraps an environment so that observed rewards pass through a noise channel.

    The noise RNG is separate from the environment's, so switching the channel
    on or off leaves trajectories unchanged.
    """

    def __init__(self, env: Environment, model: Optional[NoiseModel] = None,
                 noise_rng: Optional[np.random.Generator] = None):
        self.env = env
        self.model = model or NoiseModel.identity()
        self.noise_rng = noise_rng if noise_rng is not None else np.random.default_rng()

    def __getattr__(self, name):
        return getattr(self.env, name)

    def reset(self, *args, **kwargs):
        return self.env.reset(*args, **kwargs)

    def step(self, action, rng: Optional[np.random.Generator] = None) -> TransitionTuple:
        transition = self.env.step(action, rng)
        if self.model.is_identity:
            return transition
        observed = corrupt(self.model, transition.reward_true, self.noise_rng)
        return dataclasses.replace(transition, reward_observed=observed)
