"""Exception types shared across the package.

The CLI maps these onto exit codes: parse/usage problems exit 1,
mathematical hypothesis and domain violations exit 2.
"""


class CurvhomError(Exception):
    """Base class for all package errors."""


class ExprSyntaxError(CurvhomError, ValueError):
    """Malformed field expression. Carries the offending position."""

    def __init__(self, message, position):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class DomainError(CurvhomError, ValueError):
    """Evaluation left the field's domain (log of a non-positive value,
    division by zero, non-finite result)."""


class HypothesisError(CurvhomError, ValueError):
    """A mathematical hypothesis required by the construction fails
    (e.g. the second fundamental form is not positive definite)."""
