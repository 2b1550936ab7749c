from dataclasses import asdict, dataclass
from typing import Sequence, Tuple, Union

import numpy as np

from ..errors import InvalidParameterError
from ..utils.logger import get_logger
from .distributions import BernoulliReward, GaussianReward, JointLaw

logger = get_logger(__name__)

RewardDistribution = Union[BernoulliReward, GaussianReward]


@dataclass(frozen=True)
class VarianceDecomposition:
    """Variance of a Bellman target r + gamma*V' and its three terms.

    ``var_target`` is measured directly on the summed targets;
    ``var_target_identity`` is var r + var gamma*V' + 2 cov.
    """

    var_reward: float
    var_next_value: float
    cov_reward_value: float
    var_target: float
    var_target_identity: float
    samples: int = 0

    @property
    def identity_residual(self) -> float:
        scale = max(1.0, abs(self.var_target))
        return abs(self.var_target - self.var_target_identity) / scale

    def to_dict(self):
        return asdict(self)


def decompose_arrays(rewards, next_values) -> VarianceDecomposition:
    r = np.asarray(rewards, dtype=float).reshape(-1)
    v = np.asarray(next_values, dtype=float).reshape(-1)
    if r.size != v.size:
        raise InvalidParameterError(f"{r.size} rewards paired with {v.size} next values")
    if r.size < 2:
        raise InvalidParameterError(f"variance decomposition needs at least 2 samples, got {r.size}")
    var_r = float(np.var(r, ddof=1))
    var_v = float(np.var(v, ddof=1))
    cov = float(np.cov(r, v, ddof=1)[0, 1])
    return VarianceDecomposition(
        var_reward=var_r,
        var_next_value=var_v,
        cov_reward_value=cov,
        var_target=float(np.var(r + v, ddof=1)),
        var_target_identity=var_r + var_v + 2.0 * cov,
        samples=int(r.size),
    )


def decompose_target_variance(samples: Sequence[Tuple[float, float]]) -> VarianceDecomposition:
    """Unbiased decomposition of var[r + gamma*V'] from (r, gamma*V') pairs"""
    pairs = np.asarray(samples, dtype=float)
    if pairs.ndim != 2 or pairs.shape[1] != 2:
        if pairs.size < 4:
            raise InvalidParameterError(f"variance decomposition needs at least 2 samples, got {len(samples)}")
        raise InvalidParameterError("samples must be (reward, discounted next value) pairs")
    return decompose_arrays(pairs[:, 0], pairs[:, 1])


def analytic_decomposition(law: JointLaw, n: int = 1) -> VarianceDecomposition:
    """Exact decomposition for the target built on R-hat_N (n=1 is the sampled reward)"""
    var_r = law.var_reward / n
    cov = law.cov / n
    total = var_r + law.var_value + 2.0 * cov
    return VarianceDecomposition(var_r, law.var_value, cov, total, total)


@dataclass(frozen=True)
class RatioCheck:
    """Measured Monte-Carlo ratio against its 1/N prediction"""

    n: int
    trials: int
    measured: float
    reference: float
    expected: float
    standard_error: float
    tolerance: float

    @property
    def ratio(self) -> float:
        if self.reference == 0:
            return float("nan")
        return self.measured / self.reference

    @property
    def ratio_standard_error(self) -> float:
        if self.reference == 0:
            return float("nan")
        return self.standard_error / abs(self.reference)

    @property
    def passed(self) -> bool:
        if self.reference == 0:
            # nothing to scale: the measured quantity itself must vanish
            return abs(self.measured) <= max(4.0 * self.standard_error, 1e-12)
        return abs(self.ratio - self.expected) <= self.tolerance

    def to_dict(self):
        row = asdict(self)
        row.update(ratio=self.ratio, ratio_standard_error=self.ratio_standard_error, passed=self.passed)
        return row


def _rng(seed) -> np.random.Generator:
    return seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)


def verify_sample_mean_variance(reward_dist: RewardDistribution, n: int, trials: int = 100_000,
                                seed=0, relative_tolerance: float = 0.05) -> RatioCheck:
    """var[R-hat_N] / var[r] over ``trials`` independent N-sample means.

    The denominator is the law's exact variance. Passes when the ratio is
    within ``relative_tolerance / N`` of 1/N.
    """
    if n < 1:
        raise InvalidParameterError(f"N must be a positive integer, got {n}")
    if trials < 2:
        raise InvalidParameterError(f"need at least 2 trials, got {trials}")
    means = reward_dist.sample_means(_rng(seed), n, trials)
    squared = (means - reward_dist.mean) ** 2
    measured = float(np.var(means, ddof=1))
    check = RatioCheck(
        n=n,
        trials=trials,
        measured=measured,
        reference=float(reward_dist.variance),
        expected=1.0 / n,
        standard_error=float(np.std(squared, ddof=1) / np.sqrt(trials)),
        tolerance=relative_tolerance / n,
    )
    logger.info("sample-mean variance N=%d: ratio %.5f (expected %.5f)", n, check.ratio, check.expected)
    return check


def verify_cov_scaling(law: JointLaw, n: int, trials: int = 100_000, seed=0,
                       relative_tolerance: float = 0.10) -> RatioCheck:
    """cov[R-hat_N, gamma*V'] / cov[r, gamma*V'] with V' tied to the measured reward"""
    if trials < 2:
        raise InvalidParameterError(f"need at least 2 trials, got {trials}")
    _, r_hat, v = law.sample_estimated(_rng(seed), n, trials)
    products = (r_hat - law.mean_reward) * (v - law.mean_value)
    check = RatioCheck(
        n=n,
        trials=trials,
        measured=float(np.cov(r_hat, v, ddof=1)[0, 1]),
        reference=law.cov,
        expected=1.0 / n,
        standard_error=float(np.std(products, ddof=1) / np.sqrt(trials)),
        tolerance=relative_tolerance / n,
    )
    logger.info("covariance scaling N=%d: measured %.5f vs reference %.5f", n, check.measured, check.reference)
    return check
