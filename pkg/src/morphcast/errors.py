"""Exception hierarchy shared by all modules."""


class MorphcastError(Exception):
    """Base class for domain errors (mapped to exit status 1 by the CLI)."""


class FormatError(MorphcastError, ValueError):
    """A document could not be parsed; carries a position when known."""

    def __init__(self, message, line=None, column=None):
        if line is not None:
            message = f"{message} (line {line}, column {column})"
        super().__init__(message)
        self.line = line
        self.column = column


class InvariantError(MorphcastError, ValueError):
    """A structure violates one of its declared invariants."""


class ConfigurationError(MorphcastError, ValueError):
    """A parameter falls outside the range a transform or solver accepts."""


class SolverLimitError(MorphcastError):
    """An instance exceeds the size cap configured for a solver mode."""


class UnknownOperationError(MorphcastError, KeyError):
    """An operation id is not in the catalog."""

    def __str__(self):
        return str(self.args[0]) if self.args else ""


class EditResolutionError(MorphcastError):
    """An edit targets a node that neither the base tree nor a sibling edit provides."""


class InfeasibleError(MorphcastError):
    """No selection satisfies the constraint (e.g. a cover threshold is unreachable)."""
