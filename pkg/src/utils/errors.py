from typing import List, Optional


class SimulationError(Exception):
    """
    Base class for every error raised by the simulator.
    """

    marker = "error"


class SpecValidationError(SimulationError, ValueError):
    """
    Raised when a network description fails validation.
    """

    marker = "invalid"

    def __init__(self, diagnostics: List[str]):
        self.diagnostics = list(diagnostics)
        super().__init__(
            "invalid network spec: " + "; ".join(self.diagnostics)
        )


class EvaluationAtPoleError(SimulationError, ArithmeticError):
    """
    Raised when a resolvent is evaluated at (or numerically on top of) a pole.
    """

    marker = "pole"

    def __init__(self, omega: complex, pole: Optional[complex] = None):
        self.omega = omega
        self.pole = pole
        message = f"evaluation at pole: omega={omega!r}"
        if pole is not None:
            message += f" coincides with pole {pole!r}"
        super().__init__(message)


class MissingBathError(SimulationError, KeyError):
    """
    Raised when an input port has no bath assigned.
    """

    marker = "missing-bath"

    def __init__(self, port: str):
        self.port = port
        super().__init__(f"no bath assigned to input port '{port}'")

    def __str__(self) -> str:
        return str(self.args[0])


class DivergentIntegralError(SimulationError, ArithmeticError):
    """
    Raised when an improper integral does not converge.
    """

    marker = "divergent"

    def __init__(self, exponent: float, message: Optional[str] = None):
        self.exponent = exponent
        super().__init__(
            message
            or f"divergent integral: fitted tail exponent {exponent:.4g} "
            "is not below -1.1"
        )


class UnstableSystemError(SimulationError):
    """
    Raised when a stable system is required but the pole set is not stable.
    """

    marker = "unstable"

    def __init__(self, classification: str, max_growth: float = 0.0):
        self.classification = classification
        self.max_growth = max_growth
        super().__init__(
            f"system is {classification}: largest pole imaginary part "
            f"{max_growth:.6g} rad/s"
        )


class InfeasibleSearchError(SimulationError, ValueError):
    """
    Raised when an optimizer has no admissible point to evaluate.
    """

    marker = "infeasible"


class ConfigError(SimulationError, ValueError):
    """
    Raised for invalid run configurations.
    """

    marker = "config"

    def __init__(
        self,
        message: str,
        line: Optional[int] = None,
        column: Optional[int] = None,
    ):
        self.line = line
        self.column = column
        if line is not None:
            message = f"{message} (line {line}, column {column})"
        super().__init__(message)
