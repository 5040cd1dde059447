# Exception hierarchy shared by every subpackage


class OldroydError(Exception):
    """Base class for all simulator errors."""


class DomainError(OldroydError, ValueError):
    """A pointwise argument lies outside the model's domain."""


class ParameterError(OldroydError, ValueError):
    """A parameter set or configuration object violates its invariants."""


class IntegrityError(OldroydError):
    """Field data is inconsistent (shapes, vacuum consistency, histories)."""


class StepSizeError(OldroydError):
    """The requested time step exceeds a stability limit."""


class DivergenceError(OldroydError):
    """A discrete term produced non-finite values."""

    def __init__(self, term: str, detail: str = ""):
        self.term = term
        message = f"non-finite values in {term}"
        if detail:
            message += f": {detail}"
        super().__init__(message)


class ScenarioError(OldroydError, KeyError):
    """Unknown scenario preset or override."""

    def __str__(self) -> str:
        # KeyError quotes its argument; keep the plain message
        return str(self.args[0]) if self.args else ""


class ConfigError(OldroydError):
    """Malformed or invalid run configuration."""

    def __init__(self, message: str, line: int = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
