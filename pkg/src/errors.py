"""
Exception hierarchy for the cascade influence toolkit.

Every exception carries the process exit code the CLI reports for it.
"""
from typing import Optional


class CascadeInfluenceError(Exception):
    """Base class for all errors raised by this package."""
    exit_code = 2


class InvalidInputError(CascadeInfluenceError):
    """
    Input does not satisfy an operation's preconditions.

    When the input came from a cascade file the record id and line number are
    kept on the exception and prefixed to the message.
    """

    def __init__(self, message: str, record_id: Optional[str] = None, line: Optional[int] = None):
        self.detail = message
        self.record_id = record_id
        self.line = line
        context = []
        if record_id is not None:
            context.append(f"record '{record_id}'")
        if line is not None:
            context.append(f"line {line}")
        if context:
            message = f"{', '.join(context)}: {message}"
        super().__init__(message)

    def with_context(self, record_id: Optional[str] = None, line: Optional[int] = None) -> "InvalidInputError":
        """Return a copy of this error of the same type, tagged with record context."""
        return type(self)(self.detail, record_id=record_id, line=line)


class InvalidTreeError(InvalidInputError):
    """A parent/edge description does not form a rooted directed tree."""


class MultipleRootsError(InvalidTreeError):
    """More than one node has no parent."""


class MissingRootError(InvalidTreeError):
    """Every node has a parent, so there is no root."""


class CycleError(InvalidTreeError):
    """Some node is not reachable from the root."""


class MultipleParentsError(InvalidTreeError):
    """A node appears as the child of two different edges."""


class CascadeFormatError(InvalidInputError):
    """A cascade file record cannot be parsed."""


class LabelLengthMismatchError(CascadeFormatError):
    """The labelling of a record does not cover exactly the tree's nodes."""


class DuplicateIdError(CascadeFormatError):
    """Two records in one dataset share an id."""


class DomainError(InvalidInputError):
    """A numeric parameter lies outside the range an operation is defined on."""


class PreconditionError(InvalidInputError):
    """An argument violates a documented precondition of the operation."""


class InvalidMoveError(InvalidInputError):
    """A switch was requested between nodes with the wrong labels."""


class InvalidBudgetError(InvalidInputError):
    """The number of 1-nodes requested does not fit the tree."""


class DivergenceError(InvalidInputError):
    """Distributions cannot be compared (empty input, bad smoothing)."""


class DegenerateFitError(CascadeInfluenceError):
    """Not enough distinct points to fit a line and test its slope."""


class GuardExceededError(CascadeInfluenceError):
    """An exhaustive enumeration would exceed its configured limit."""
    exit_code = 3
