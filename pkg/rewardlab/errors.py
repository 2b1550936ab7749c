"""Exception hierarchy for the lab.

Every error the CLI reports carries a short machine-readable ``code`` and the
process exit code it maps to.
"""


class LabError(Exception):
    """Base class for all lab errors"""

    code = "lab_error"
    exit_code = 1

    def __init__(self, message: str = ""):
        super().__init__(message)
        self.message = message


class ConfigError(LabError):
    """A suite config or CLI argument could not be used"""

    code = "malformed_config"
    exit_code = 2


class UnknownPresetError(ConfigError):
    code = "unknown_preset"


class InvalidParameterError(ConfigError, ValueError):
    code = "invalid_parameter"


class DivergenceError(LabError):
    """Every seed of an experiment cell diverged"""

    code = "divergence"
    exit_code = 3


class OutputWriteError(LabError):
    code = "write_failure"
    exit_code = 4


class ParameterFileError(OutputWriteError, ValueError):
    """A parameter file exists but its contents cannot be decoded"""

    code = "bad_parameter_file"


class UndefinedScoreError(LabError, ZeroDivisionError):
    """Normalized improvement requested with best baseline equal to the random policy"""

    code = "undefined_score"


class EstimatorNotFittedError(LabError):
    code = "estimator_not_fitted"


class TerminalStepError(LabError):
    """An environment was stepped after reaching a terminal state"""

    code = "terminal_step"


class DimensionMismatchError(LabError, ValueError):
    code = "dimension_mismatch"


class NonFiniteError(LabError, FloatingPointError):
    """A non-finite value showed up in a network computation"""

    code = "non_finite"

    def __init__(self, message: str = "", layer_index: int = -1):
        super().__init__(message)
        self.layer_index = layer_index
