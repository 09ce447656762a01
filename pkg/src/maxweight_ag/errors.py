"""Exception types. Every error carries a short machine-readable ``code``."""


class MaxWeightError(Exception):
    code = "error"

    def __init__(self, message="", code=None):
        super().__init__(message)
        if code is not None:
            self.code = code


class ScheduleSetError(MaxWeightError):
    """Raised by :func:`validate`; ``problems`` lists every failed invariant."""

    code = "invalid-schedule-set"

    def __init__(self, problems):
        self.problems = list(problems)
        super().__init__("schedule set invalid: " + ", ".join(self.problems))


class DimensionMismatch(MaxWeightError):
    code = "dim-mismatch"


class InfeasibleLogError(MaxWeightError):
    code = "infeasible-log"


class TooManyVertices(MaxWeightError):
    code = "too-many-vertices"


class InvalidDecomposition(MaxWeightError):
    code = "invalid-decomposition"


class NoSlackError(MaxWeightError):
    code = "no-slack"


class DerivativeUndefined(MaxWeightError):
    code = "derivative-undefined"


class NegativeQueue(MaxWeightError, AssertionError):
    code = "negative-queue"


class ConfigError(MaxWeightError):
    code = "config-error"
