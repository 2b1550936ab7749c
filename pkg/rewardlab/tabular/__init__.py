from .estimator import SampleMeanEstimator, observe
from .experiment import (
    DEFAULT_ALPHAS,
    TABULAR_COLUMNS,
    TabularTdLearner,
    run_tabular_cell,
    run_tabular_experiment,
    summarize_tabular,
)
from .td import ValueTable, rmse, td_target, td_update

__all__ = [
    "DEFAULT_ALPHAS",
    "SampleMeanEstimator",
    "TABULAR_COLUMNS",
    "TabularTdLearner",
    "ValueTable",
    "observe",
    "rmse",
    "run_tabular_cell",
    "run_tabular_experiment",
    "summarize_tabular",
    "td_target",
    "td_update",
]
