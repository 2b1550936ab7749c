from typing import Any, Dict, List, Optional

import numpy as np

from ..errors import InvalidParameterError, UnknownPresetError
from .base import Environment
from .chain import ChainEnv, ChainMdp, build_chain
from .gridworld import GridWorldEnv
from .pointmass import PointMassEnv

DEFAULT_PRESETS: Dict[str, Dict[str, Any]] = {
    "chain5": {
        "kind": "chain",
        "description": "Chain with 5 reward-bearing transitions",
        "num_reward_steps": 5,
        "reward_value": 1.0,
        "reward_prob": 0.5,
        "gamma": 1.0,
    },
    "chain10": {
        "kind": "chain",
        "description": "Chain with 10 reward-bearing transitions",
        "num_reward_steps": 10,
        "reward_value": 1.0,
        "reward_prob": 0.5,
        "gamma": 1.0,
    },
    "grid5": {
        "kind": "grid",
        "description": "5x5 gridworld, +1 at the far corner, 50-step cap",
        "size": 5,
        "max_steps": 50,
        "goal_reward": 1.0,
    },
    "pointmass": {
        "kind": "pointmass",
        "description": "1-D point mass with quadratic position and action cost",
        "action_cost_coeff": 0.1,
        "horizon": 50,
    },
}

# CLI / config spellings accepted for overrides
OVERRIDE_ALIASES = {
    "reward": "reward_value",
    "prob": "reward_prob",
    "action_cost": "action_cost_coeff",
}


def list_presets() -> List[str]:
    return sorted(DEFAULT_PRESETS)


def preset_settings(preset_id: str, **overrides) -> Dict[str, Any]:
    """Merged settings of a preset with overrides; ``None`` overrides are ignored"""
    if preset_id not in DEFAULT_PRESETS:
        raise UnknownPresetError(f"Unknown environment preset '{preset_id}' (known: {', '.join(list_presets())})")
    settings = dict(DEFAULT_PRESETS[preset_id])
    for key, value in overrides.items():
        if value is None:
            continue
        key = OVERRIDE_ALIASES.get(key, key)
        if key not in settings or key in ("kind", "description"):
            raise InvalidParameterError(f"Preset '{preset_id}' has no setting '{key}'")
        settings[key] = value
    return settings


def chain_from_preset(preset_id: str, **overrides) -> ChainMdp:
    settings = preset_settings(preset_id, **overrides)
    if settings["kind"] != "chain":
        raise InvalidParameterError(f"Preset '{preset_id}' is not a chain MDP")
    return build_chain(
        settings["num_reward_steps"], settings["reward_value"], settings["reward_prob"], settings["gamma"]
    )


def make_env(preset_id: str, rng: Optional[np.random.Generator] = None, **overrides) -> Environment:
    """Instantiate an environment preset by string id"""
    settings = preset_settings(preset_id, **overrides)
    kind = settings["kind"]
    if kind == "chain":
        return ChainEnv(chain_from_preset(preset_id, **overrides), rng)
    if kind == "grid":
        return GridWorldEnv(int(settings["size"]), int(settings["max_steps"]), float(settings["goal_reward"]), rng)
    return PointMassEnv(float(settings["action_cost_coeff"]), int(settings["horizon"]), rng)


def discount_for(preset_id: str, default: float = 0.99, **overrides) -> float:
    """Chains carry their own discount; other presets use ``default``"""
    settings = preset_settings(preset_id, **overrides)
    return float(settings.get("gamma", default))
