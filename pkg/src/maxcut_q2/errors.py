"""Exception hierarchy; each class carries the CLI exit code it maps to."""


class MaxCutError(Exception):
    exit_code = 1


class ParameterError(MaxCutError, ValueError):
    exit_code = 2


class DimensionError(ParameterError):
    pass


class InputError(ParameterError):
    pass


class ParseError(ParameterError):
    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class SizeError(MaxCutError):
    exit_code = 3


class SolverNumericError(MaxCutError, ArithmeticError):
    exit_code = 4


class DispatchError(MaxCutError):
    """A worker task failed; ``cluster`` identifies which one."""

    def __init__(self, cluster, cause):
        self.cluster = cluster
        self.cause = cause
        super().__init__(f"task for cluster {cluster} failed: {cause!r}")

    @property
    def exit_code(self):
        return getattr(self.cause, "exit_code", 1)
