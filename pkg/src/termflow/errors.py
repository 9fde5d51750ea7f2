"""Exception hierarchy shared by every termflow module.

The CLI maps these onto process exit codes: parse problems (including
file-level validation) exit 2, violated operation preconditions exit 3,
refused search budgets exit 4, anything else is an internal error (1).
"""

from __future__ import annotations


class TermflowError(Exception):
    """Base class for everything raised deliberately by this package."""


class ParseError(TermflowError):
    """Syntax or file-level validation error, with source position."""

    def __init__(self, message: str, line: int = 0, col: int = 0):
        super().__init__(f"{line}:{col}: {message}" if line else message)
        self.message = message
        self.line = line
        self.col = col


class ValidationError(TermflowError):
    """A constructed object violates a structural invariant."""


class EvalError(TermflowError):
    """Evaluation hit a missing table or variable binding."""


class PreconditionError(TermflowError):
    """An operation was called on input outside its contract."""


class BudgetError(TermflowError):
    """An exhaustive search was refused before it started.

    Carries the closed-form sizes so callers can report exactly what was
    asked for.  Nothing is truncated: either the whole space fits the
    budget or the search never begins.
    """

    def __init__(self, message: str, *, interpretations: int | None = None,
                 evaluations: int | None = None):
        super().__init__(message)
        self.interpretations = interpretations
        self.evaluations = evaluations
