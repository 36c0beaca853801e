"""Exception types shared across the package."""


class CircuitError(Exception):
    """Base class for circuit construction and transformation failures."""


class InvalidVariableError(CircuitError):
    """A variable index is outside the circuit's declared range."""


class EmptyCircuitError(CircuitError):
    """Cleanup removed the root: the circuit has no remaining support."""


class InfeasibleEvidenceError(CircuitError):
    """The conditioning evidence has probability zero in the circuit."""


class OverPruneError(CircuitError):
    """Pruning removed the root's entire support; the caller's lower bound was inconsistent."""


class BudgetExceededError(CircuitError):
    """Brute-force enumeration would exceed the configured budget."""


class ParseError(CircuitError):
    """Malformed circuit or instance file."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)
