from .channels import (
    NoiseKind,
    NoiseModel,
    corrupt,
    corrupt_many,
    corrupted_variance,
    expected_corrupted,
    parse_noise,
)
from .wrapper import NoisyEnvironment

__all__ = [
    "NoiseKind",
    "NoiseModel",
    "NoisyEnvironment",
    "corrupt",
    "corrupt_many",
    "corrupted_variance",
    "expected_corrupted",
    "parse_noise",
]
