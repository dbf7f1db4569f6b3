"""
Exception module for the signed probability toolkit.

Every error derives from SignedProbError and from the built-in exception
it refines, so callers may catch either.
"""

from typing import List, Optional


class SignedProbError(Exception):
    """Base class for all toolkit errors."""


class ScalarParseError(SignedProbError, ValueError):
    """Malformed scalar text."""

    def __init__(self, message: str, text: str, position: int):
        super().__init__(f"{message} at position {position} in {text!r}")
        self.text = text
        self.position = position


class ScalarDivisionError(SignedProbError, ZeroDivisionError):
    """Division of a scalar by zero."""


class SpaceMismatchError(SignedProbError, ValueError):
    """Operands live over different sample spaces."""


class DistributionError(SignedProbError, ValueError):
    """Weights do not form a signed probability distribution."""


class FrameValidationError(SignedProbError, ValueError):
    """
    An observation frame or observed table breaks its invariants.

    Attributes:
        violations: Human readable descriptions, first violation first
    """

    def __init__(self, violations: List[str]):
        first = violations[0] if violations else "unknown violation"
        super().__init__(first)
        self.violations = list(violations)


class NotObservableError(SignedProbError, ValueError):
    """The event is not a member of any ensemble algebra."""


class CapExceededError(SignedProbError, ValueError):
    """An enumeration or search would exceed its configured cap."""


class PreconditionError(SignedProbError, ValueError):
    """An operation was called outside its precondition."""


class InfeasibleSystemError(SignedProbError, RuntimeError):
    """The linear system has no signed solution."""


class ExtensionError(SignedProbError, RuntimeError):
    """Symmetrization inputs are not an extension or not automorphisms."""


class SolverError(SignedProbError, RuntimeError):
    """The simplex solver could not finish."""


class FileFormatError(SignedProbError, ValueError):
    """
    A data file does not follow its format.

    Attributes:
        field: Path of the offending field, e.g. ``ensembles[1].parts[0].prob``
        line: Line number for JSON syntax errors
        column: Column number for JSON syntax errors
    """

    def __init__(self, message: str, field: Optional[str] = None,
                 line: Optional[int] = None, column: Optional[int] = None):
        where = []
        if field:
            where.append(f"field {field}")
        if line is not None:
            where.append(f"line {line}, column {column}")
        suffix = f" ({'; '.join(where)})" if where else ""
        super().__init__(f"{message}{suffix}")
        self.field = field
        self.line = line
        self.column = column
