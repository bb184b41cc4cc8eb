"""Exception types shared across the package."""


class TrajadvError(Exception):
    """Base class for all package-specific errors."""


class ModelError(TrajadvError, ValueError):
    """Invalid model description or mismatched dimensions."""


class DegenerateModelError(ModelError):
    """Mass matrix numerically singular (condition number above threshold)."""


class InputError(TrajadvError, ValueError):
    """Non-finite or otherwise unusable numeric input."""


class UnsupportedFeatureError(TrajadvError, NotImplementedError):
    """Structurally reserved feature that is not implemented (floating base)."""


class SchemaError(TrajadvError, ValueError):
    """Scenario or model file failed validation."""


class SimulationError(TrajadvError, RuntimeError):
    """A closed-loop run aborted; carries the offending step index."""

    def __init__(self, step: int, message: str):
        self.step = step
        super().__init__(f"step {step}: {message}")
