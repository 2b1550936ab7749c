from .checks import CHECKS, JOINT_LAWS, REWARD_LAWS, run_check
from .decomposition import (RatioCheck, VarianceDecomposition, analytic_decomposition, decompose_arrays,
                            decompose_target_variance, verify_cov_scaling, verify_sample_mean_variance)
from .distributions import BernoulliReward, GaussianReward, JointLaw
from .gap import VarianceGap, predicted_gap, reduction_condition, run_gap_check, variance_gap
from .statistics import (DEFAULT_TABLE_NOISE, StatisticsReport, fit_sample_mean_estimator, measure_from_checkpoints,
                         measure_reward_statistics, variance_table)

__all__ = [
    "BernoulliReward",
    "CHECKS",
    "DEFAULT_TABLE_NOISE",
    "GaussianReward",
    "JOINT_LAWS",
    "JointLaw",
    "REWARD_LAWS",
    "RatioCheck",
    "StatisticsReport",
    "VarianceDecomposition",
    "VarianceGap",
    "analytic_decomposition",
    "decompose_arrays",
    "decompose_target_variance",
    "fit_sample_mean_estimator",
    "measure_from_checkpoints",
    "measure_reward_statistics",
    "predicted_gap",
    "reduction_condition",
    "run_check",
    "run_gap_check",
    "variance_gap",
    "verify_cov_scaling",
    "verify_sample_mean_variance",
]
