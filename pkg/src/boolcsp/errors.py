"""Exception hierarchy shared by every module."""


class BoolCspError(Exception):
    """Base class for all errors raised by boolcsp."""


class InputError(BoolCspError):
    """Malformed or inconsistent input data (CLI exit code 1)."""


class ParseError(InputError):
    def __init__(self, message, line=None, column=None, source=None):
        self.line = line
        self.column = column
        self.source = source
        where = ""
        if line is not None:
            where = f"line {line}"
            if column is not None:
                where += f", column {column}"
            where += ": "
        if source:
            where = f"{source}: " + where
        super().__init__(where + message)


class ValidationError(InputError):
    """A structurally valid document violates a domain invariant."""


class BudgetExceeded(BoolCspError):
    """An exhaustive procedure would exceed its configured budget (exit code 2)."""


class PreconditionError(BoolCspError):
    """An algorithm was called on input outside its stated precondition (exit code 2)."""


class NoTractableMethod(PreconditionError):
    """None of the six Schaefer operations is a polymorphism of the language."""
