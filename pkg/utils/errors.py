"""
Exception hierarchy shared by every heroix component.

Library code raises these; only main.py turns them into exit codes.
"""


class HeroixError(Exception):
    """Base class for all heroix errors."""


class TournamentValidationError(HeroixError, ValueError):
    """A tournament could not be built from the given data."""


class TournamentFileError(TournamentValidationError):
    """
    A tournament file is malformed.

    Args:
        message (str): Description of the problem
        line (int, optional): 1-based line number in the file
        column (int, optional): 1-based column number in the line
    """

    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        location = ""
        if line is not None:
            location = f"line {line}"
            if column is not None:
                location += f", column {column}"
            location += ": "
        super().__init__(f"{location}{message}")


class SizeLimitError(HeroixError, ValueError):
    """An input exceeds a configured size limit."""


class UndecidedError(HeroixError):
    """A bounded search ran out of budget before reaching a verdict."""


class PreconditionError(HeroixError, ValueError):
    """
    An operation's precondition does not hold.

    Args:
        message (str): Which precondition failed
        witness (object, optional): Evidence of the violation, usually an Embedding
    """

    def __init__(self, message, witness=None):
        self.witness = witness
        super().__init__(message)


class ConsistencyError(HeroixError):
    """Two independent computations disagreed. Always a bug."""
