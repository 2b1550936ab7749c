from typing import Any, Dict, Hashable

from ..environments.base import TransitionTuple
from ..errors import EstimatorNotFittedError
from ..sources import FeatureMode


def _hashable(value: Any) -> Hashable:
    if hasattr(value, "tolist"):
        value = value.tolist()
    if isinstance(value, list):
        return tuple(_hashable(v) for v in value)
    return value


class SampleMeanEstimator:
    """Running sample mean of observed rewards per key.

    The key is the departed state, (state, action) or (state, action, next
    state) depending on ``key_mode``.
    """

    def __init__(self, key_mode: FeatureMode = FeatureMode.S):
        self.key_mode = FeatureMode(key_mode)
        self.count: Dict[Hashable, int] = {}
        self.mean: Dict[Hashable, float] = {}
        self.fallback_events = 0

    def key_for(self, transition: TransitionTuple) -> Hashable:
        state = _hashable(transition.state)
        if self.key_mode is FeatureMode.S:
            return state
        action = _hashable(transition.action)
        if self.key_mode is FeatureMode.SA:
            return (state, action)
        return (state, action, _hashable(transition.next_state))

    def observe(self, key: Hashable, reward_observed: float) -> "SampleMeanEstimator":
        n = self.count.get(key, 0) + 1
        old = self.mean.get(key, 0.0)
        self.mean[key] = old + (reward_observed - old) / n
        self.count[key] = n
        return self

    def observe_transition(self, transition: TransitionTuple) -> "SampleMeanEstimator":
        return self.observe(self.key_for(transition), transition.reward_observed)

    def has(self, key: Hashable) -> bool:
        return key in self.count

    def predict(self, key: Hashable) -> float:
        if key not in self.mean:
            raise KeyError(key)
        return self.mean[key]

    @property
    def fitted(self) -> bool:
        return bool(self.count)

    def predict_transition(self, transition: TransitionTuple) -> float:
        if not self.fitted:
            raise EstimatorNotFittedError("Sample-mean estimator has no observations")
        return self.predict(self.key_for(transition))


def observe(est: SampleMeanEstimator, key: Hashable, reward_observed: float) -> SampleMeanEstimator:
    return est.observe(key, reward_observed)
