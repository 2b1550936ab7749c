from .features import FeatureBuilder
from .gradcheck import GradCheckResult, finite_difference_grad, gradient_check
from .mlp import MlpParams, backward, forward, forward_cached, grad, init_mlp, mse_output_loss, parameter_count
from .optimizer import Adam, AdamState, clip_grad_norm, optimizer_step
from .reward_model import RewardRegressor, regression_loss_arrays, reward_regression_loss
from .serialization import decode_params, encode_params, load_params, save_params

__all__ = [
    "Adam",
    "AdamState",
    "FeatureBuilder",
    "GradCheckResult",
    "MlpParams",
    "RewardRegressor",
    "backward",
    "clip_grad_norm",
    "decode_params",
    "encode_params",
    "finite_difference_grad",
    "forward",
    "forward_cached",
    "grad",
    "gradient_check",
    "init_mlp",
    "load_params",
    "mse_output_loss",
    "optimizer_step",
    "parameter_count",
    "regression_loss_arrays",
    "reward_regression_loss",
    "save_params",
]
