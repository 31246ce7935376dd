"""Exception hierarchy shared by all modules.

The CLI maps these onto exit codes: ``PreconditionError`` and its
subclasses exit with 2, ``BudgetExceeded`` with 3, anything else with 1.
"""


class DillError(Exception):
    """Base class for all library errors."""


class ParseError(DillError):
    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class PreconditionError(DillError):
    """An input violates a documented precondition or hypothesis."""


class UnsupportedError(PreconditionError):
    """The operation is not defined for this kind of input (e.g. non-primitive)."""


class EigenvalueMismatch(PreconditionError):
    pass


class NotRecognizableError(PreconditionError):
    pass


class DomainError(DillError):
    """A word or window is not in the domain of a table."""


class UnseenWindowError(DomainError):
    pass


class CompositionError(DillError):
    pass


class BudgetExceeded(DillError):
    """A search hit its node or step budget; ``partial`` holds what was found."""

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial
