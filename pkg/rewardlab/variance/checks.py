from typing import Dict, Sequence

import pandas as pd

from ..errors import InvalidParameterError
from .decomposition import verify_cov_scaling, verify_sample_mean_variance
from .distributions import BernoulliReward, GaussianReward, JointLaw
from .gap import run_gap_check
from .statistics import variance_table

CHECKS = ("sample-mean", "covariance", "gap", "tables")
# Short names accepted by the CLI
CHECK_ALIASES = {"eq4": "sample-mean", "eq5": "covariance", "eq6": "gap"}
DEFAULT_N = (1, 2, 5, 10, 100)

REWARD_LAWS = {
    "bernoulli": BernoulliReward(5.0, 0.5),
    "gaussian": GaussianReward(0.0, 1.0),
}

JOINT_LAWS: Dict[str, JointLaw] = {
    "coupled": JointLaw.coupled(1.0, 0.5),
    "mixture": JointLaw.mixture(1.0),
    "independent": JointLaw.independent(5.0, 0.5),
    "negative": JointLaw.negative(),
}


def run_check(check: str, trials: int = 100_000, seed: int = 0, ns: Sequence[int] = DEFAULT_N) -> pd.DataFrame:
    """Run one family of Monte-Carlo checks and return one row per (law, N)"""
    check = CHECK_ALIASES.get(check, check)
    rows = []
    if check == "sample-mean":
        for name, law in REWARD_LAWS.items():
            for n in ns:
                rows.append({"check": check, "law": name, **verify_sample_mean_variance(law, n, trials, seed).to_dict()})
    elif check == "covariance":
        for name in ("coupled", "mixture", "independent"):
            for n in ns:
                rows.append({"check": check, "law": name, **verify_cov_scaling(JOINT_LAWS[name], n, trials, seed).to_dict()})
    elif check == "gap":
        for name, law in JOINT_LAWS.items():
            for n in ns:
                rows.append({"check": check, "law": name, **run_gap_check(law, n, trials, seed).to_dict()})
    elif check == "tables":
        frame = variance_table(seed=seed)
        frame.insert(0, "check", check)
        return frame
    else:
        names = ", ".join(CHECKS + tuple(CHECK_ALIASES))
        raise InvalidParameterError(f"Unknown variance check '{check}' (use {names})")
    return pd.DataFrame(rows)
