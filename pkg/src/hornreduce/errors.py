"""Exception types shared across the package."""


class HornError(Exception):
    """Base class for all package errors."""


class ParseError(HornError, ValueError):
    """Malformed expression text."""


class DomainError(HornError, ValueError):
    """Operation undefined for its inputs."""


class EvaluationError(HornError, ZeroDivisionError):
    """Evaluation hit a pole or an unbound symbol."""


class UnknownFunctionError(HornError, KeyError):
    """Function name not in the catalog."""

    def __str__(self):
        return str(self.args[0]) if self.args else "unknown function"


class ExceptionalParametersError(HornError, ValueError):
    """Numeric parameters hit an exceptional set."""

    def __init__(self, function: str, triggered: list[str]):
        self.function = function
        self.triggered = triggered
        super().__init__(f"{function}: exceptional parameters, integer-valued: {', '.join(triggered)}")


class StructureError(HornError, RuntimeError):
    """A derived system is degenerate where genericity was assumed."""
