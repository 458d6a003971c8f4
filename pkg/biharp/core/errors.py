"""
Exception hierarchy shared by the library, the CLI and the HTTP routers.
"""

from typing import Optional

REL_TOL = 1e-9
IDENTITY_TOL = 1e-12


class BiharpError(Exception):
    """Base class for every error raised on purpose by biharp."""


class ResolutionError(BiharpError, ValueError):
    pass


class DomainError(BiharpError, ValueError):
    pass


class DegenerateInputError(BiharpError, ValueError):
    pass


class PreconditionError(BiharpError, ValueError):
    pass


class ConfigError(BiharpError, ValueError):
    pass


class InvariantViolation(BiharpError, AssertionError):
    """An asserted inequality did not hold."""

    def __init__(self, label: str, lhs: float, rhs: float, context: Optional[str] = None):
        self.label = label
        self.lhs = lhs
        self.rhs = rhs
        self.context = context
        message = f"{label}: {lhs!r} > {rhs!r}"
        if context:
            message += f" ({context})"
        super().__init__(message)


def ensure_le(lhs: float, rhs: float, label: str, rel: float = REL_TOL, abs_tol: float = 0.0) -> float:
    """
    Asserts lhs <= rhs up to relative slack `rel` (and an optional absolute slack).
    Returns the margin rhs - lhs.
    """
    if lhs > rhs + rel * abs(rhs) + abs_tol:
        raise InvariantViolation(label, lhs, rhs)
    return rhs - lhs


def ensure(condition: bool, label: str, context: Optional[str] = None) -> None:
    if not condition:
        raise InvariantViolation(label, float("nan"), float("nan"), context)


def check_exponent(p: float, name: str = "p") -> float:
    if not (0.0 < p <= 2.0):
        raise DomainError(f"{name} must lie in (0, 2], got {p}")
    return float(p)


def check_theta(theta: float) -> float:
    if not (0.0 < theta < 1.0):
        raise DomainError(f"theta must lie in (0, 1), got {theta}")
    return float(theta)
