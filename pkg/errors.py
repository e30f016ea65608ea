"""conelab 异常体系

Every failure raised by the numerical kernels derives from ConelabError and
carries the context needed to reproduce it (radius, quantity, best estimate).
"""

from typing import Any


class ConelabError(Exception):
    """Base class for all lab errors"""

    exit_code: int = 3

    def __init__(self, message: str, **context: Any):
        super().__init__(message)
        self.message = message
        self.context = context
        """结构化上下文，例如 radius / quantity / best_estimate"""

    def __str__(self) -> str:
        if not self.context:
            return self.message
        details = ", ".join(f"{k}={v}" for k, v in self.context.items())
        return f"{self.message} ({details})"


class ConfigError(ConelabError):
    """Experiment config could not be parsed or validated"""

    exit_code = 2


class DomainError(ConelabError):
    """Argument outside an operation's domain"""


class PreconditionError(DomainError):
    """A theorem's hypothesis fails numerically before its verifier runs"""


class NumericalFailure(ConelabError):
    """Quadrature or ODE integration did not reach the requested tolerance"""


class SeedError(NumericalFailure):
    """Asymptotic series is not decreasing at the requested seed radius"""


class TraceError(NumericalFailure):
    """Pullbacks of r^{-d} u do not converge on the reference annulus"""


class CertificationError(ConelabError):
    """A certified bound (weakly conical caps, almost-eigen residual) is violated"""

    exit_code = 1


class OutputError(ConelabError):
    """A report or CSV artifact could not be written"""


def exit_code_for(exc: BaseException) -> int:
    """Map an exception to the CLI exit code"""
    if isinstance(exc, ConelabError):
        return exc.exit_code
    return 3
