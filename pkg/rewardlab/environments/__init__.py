from .base import ActionSpace, Environment, TransitionTuple, step
from .chain import ChainEnv, ChainMdp, build_chain, rollout_values, true_values
from .gridworld import GridWorldEnv
from .pointmass import PointMassEnv
from .presets import DEFAULT_PRESETS, chain_from_preset, list_presets, make_env, preset_settings

__all__ = [
    "ActionSpace",
    "ChainEnv",
    "ChainMdp",
    "DEFAULT_PRESETS",
    "Environment",
    "GridWorldEnv",
    "PointMassEnv",
    "TransitionTuple",
    "build_chain",
    "chain_from_preset",
    "list_presets",
    "make_env",
    "preset_settings",
    "rollout_values",
    "step",
    "true_values",
]
