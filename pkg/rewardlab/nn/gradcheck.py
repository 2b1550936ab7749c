from dataclasses import dataclass
from typing import Callable, Tuple

import numpy as np

LossAndGrad = Callable[[np.ndarray], Tuple[float, np.ndarray]]


@dataclass
class GradCheckResult:
    analytic: np.ndarray
    numeric: np.ndarray
    max_relative_error: float

    def passed(self, tolerance: float = 1e-4) -> bool:
        return self.max_relative_error <= tolerance


def finite_difference_grad(fn: LossAndGrad, theta: np.ndarray, h: float = 1e-5) -> np.ndarray:
    theta = np.asarray(theta, dtype=float)
    numeric = np.zeros_like(theta)
    for i in range(theta.size):
        plus = theta.copy()
        minus = theta.copy()
        plus[i] += h
        minus[i] -= h
        numeric[i] = (fn(plus)[0] - fn(minus)[0]) / (2.0 * h)
    return numeric


def relative_errors(analytic: np.ndarray, numeric: np.ndarray, floor: float = 1e-6) -> np.ndarray:
    scale = np.maximum(np.maximum(np.abs(analytic), np.abs(numeric)), floor)
    return np.abs(analytic - numeric) / scale


def gradient_check(fn: LossAndGrad, theta: np.ndarray, h: float = 1e-5) -> GradCheckResult:
    """Compare the analytic gradient of ``fn`` at ``theta`` with central differences"""
    _, analytic = fn(np.asarray(theta, dtype=float))
    numeric = finite_difference_grad(fn, theta, h)
    errors = relative_errors(analytic, numeric)
    return GradCheckResult(analytic, numeric, float(errors.max()) if errors.size else 0.0)
