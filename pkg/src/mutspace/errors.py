"""Exception types shared across the toolkit."""


class MutspaceError(Exception):
    """Base class for all toolkit errors."""


class UnknownIdError(MutspaceError):
    """A test or program identifier is not present in the matrix."""


class RoleError(MutspaceError):
    """A program row does not carry the role an operation requires."""


class CapacityError(MutspaceError):
    """Explicit lattice construction was requested above the size limit."""


class SchemaError(MutspaceError):
    """An input file violates its documented schema.

    ``path`` is a JSON-pointer-style location of the offending field,
    e.g. ``/cells/m1/t2/status``.
    """

    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}")
        self.path = path
        self.message = message


class ParseError(MutspaceError):
    """Source text could not be parsed; carries a 1-based location."""

    def __init__(self, message: str, line: int, col: int):
        super().__init__(f"line {line}, col {col}: {message}")
        self.line = line
        self.col = col
