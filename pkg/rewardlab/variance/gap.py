from dataclasses import asdict, dataclass
from typing import Optional

import numpy as np

from ..errors import InvalidParameterError
from .decomposition import VarianceDecomposition, analytic_decomposition, decompose_arrays
from .distributions import JointLaw


def predicted_gap(var_reward: float, cov_reward_value: float, n: int) -> float:
    """(1/N - 1) var r + (2/N - 2) cov, the exact var[G-hat] - var[G]"""
    return (1.0 / n - 1.0) * var_reward + (2.0 / n - 2.0) * cov_reward_value


def reduction_condition(var_reward: float, cov_reward_value: float) -> bool:
    """var r > -2 cov is needed for the estimator to reduce target variance"""
    return var_reward > -2.0 * cov_reward_value


@dataclass(frozen=True)
class VarianceGap:
    n: int
    gap: float
    predicted: float
    standard_error: float
    tolerance: float
    condition_holds: bool

    @property
    def matches(self) -> bool:
        return abs(self.gap - self.predicted) <= self.tolerance

    @property
    def estimator_no_worse(self) -> bool:
        return self.gap <= self.tolerance

    def to_dict(self):
        row = asdict(self)
        row.update(matches=self.matches, estimator_no_worse=self.estimator_no_worse)
        return row


def variance_gap(decomp_sampled: VarianceDecomposition, decomp_estimated: VarianceDecomposition, n: int,
                 standard_error: Optional[float] = None,
                 reference: Optional[VarianceDecomposition] = None) -> VarianceGap:
    """var[G-hat] - var[G] against its closed form.

    ``reference`` supplies the var r and cov used in the closed form and the
    reduction condition (defaults to the sampled decomposition). Without a
    standard error the comparison is exact up to round-off.
    """
    if n < 1:
        raise InvalidParameterError(f"N must be a positive integer, got {n}")
    reference = reference or decomp_sampled
    gap = decomp_estimated.var_target - decomp_sampled.var_target
    predicted = predicted_gap(reference.var_reward, reference.cov_reward_value, n)
    if standard_error is None:
        standard_error = 0.0
        tolerance = 1e-8 * max(1.0, abs(predicted))
    else:
        tolerance = max(4.0 * standard_error, 1e-8 * max(1.0, abs(predicted)))
    return VarianceGap(
        n=n,
        gap=float(gap),
        predicted=float(predicted),
        standard_error=float(standard_error),
        tolerance=float(tolerance),
        condition_holds=reduction_condition(reference.var_reward, reference.cov_reward_value),
    )


def run_gap_check(law: JointLaw, n: int, trials: int = 100_000, seed=0) -> VarianceGap:
    """Monte-Carlo gap on paired draws: both targets share the measured outcome.

    The standard error comes from the per-trial difference of squared
    deviations around the exact target mean.
    """
    if trials < 2:
        raise InvalidParameterError(f"need at least 2 trials, got {trials}")
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    r, r_hat, v = law.sample_estimated(rng, n, trials)
    sampled = decompose_arrays(r, v)
    estimated = decompose_arrays(r_hat, v)
    target_mean = law.mean_reward + law.mean_value
    d = (r_hat + v - target_mean) ** 2 - (r + v - target_mean) ** 2
    se = float(np.std(d, ddof=1) / np.sqrt(trials))
    return variance_gap(sampled, estimated, n, standard_error=se, reference=analytic_decomposition(law))
