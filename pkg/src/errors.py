from __future__ import annotations


class UnilinError(Exception):
    """Base class for errors raised by the solver front end."""


class ModelSyntaxError(UnilinError):
    def __init__(self, message: str, line: int, column: int) -> None:
        super().__init__(f"{line}:{column}: {message}")
        self.message = message
        self.line = line
        self.column = column


class ModelDefinitionError(UnilinError):
    """Well-formed text that still does not describe a usable model."""


class OracleSizeError(UnilinError):
    pass
