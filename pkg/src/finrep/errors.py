"""Exception types shared across the workbench."""


class CarrierMismatch(ValueError):
    """Two operands disagree about which carrier an index lives in."""


class BudgetError(RuntimeError):
    """A bounded construction would exceed its explicit cap.

    Raised instead of truncating: a silently clipped carrier would make
    downstream verdicts meaningless.
    """


class UnvalidatedError(RuntimeError):
    """An operation that assumes validated input got an unchecked value."""


class TheoremInconsistencyError(AssertionError):
    """A cross-check that is guaranteed by a proved statement failed.

    Distinct from an ordinary law violation: seeing this means the kernel
    itself (or the surrounding construction) is broken, not the input.
    """


class DocumentError(ValueError):
    """Problem in a workbench document, with position information."""

    def __init__(self, message, line=None, column=None):
        self.message = message
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f" (line {line}" + (f", column {column}" if column is not None else "") + ")"
        super().__init__(message + where)
