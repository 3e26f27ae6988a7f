class DofError(Exception):
    """Base class for dofcount errors."""


class ParseError(DofError):
    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        where = f" (line {line}, column {column})" if line is not None else ""
        super().__init__(f"{message}{where}")


class InvalidSystem(DofError):
    pass


class BudgetExceeded(DofError):
    pass


class InternalError(DofError):
    """An invariant that can only fail through a bug (or a method disagreement)."""
