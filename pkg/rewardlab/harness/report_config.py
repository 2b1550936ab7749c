"""Column names and file naming for suite reports"""

# Summary CSV columns
SUMMARY_COLUMNS = [
    "suite_id",
    "env",
    "algo",
    "noise",
    "source",
    "seeds",
    "diverged_seeds",
    "mean_return",
    "std_return",
    "best_baseline",
    "random_return",
    "normalized_improvement",
]

# Columns that identify one cell/source combination
GROUP_COLUMNS = ["suite_id", "env", "algo", "noise", "source"]

# Rows are sorted by these before writing so output order is independent of thread scheduling
SORT_COLUMNS = ["cell", "source", "seed", "update"]

BASELINE_SOURCE = "sampled"

SUMMARY_SUFFIX = "_summary"

DEFAULT_RESULTS_NAME = "results.csv"

# Episodes used for the random-policy normalization baseline
RANDOM_BASELINE_EPISODES = 100
