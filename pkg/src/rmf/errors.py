"""Exception types raised by the library."""


class DomainError(ValueError):
    """An input lies outside the domain an operation is defined on."""


class DegeneratePairError(DomainError):
    """Two anchors of a cluster coincide, so no ball can be built."""


class ParseError(ValueError):
    """A population, pairing or window file could not be parsed."""

    def __init__(self, message, path=None, row=None):
        self.path = path
        self.row = row
        where = ""
        if path is not None:
            where += f"{path}"
        if row is not None:
            where += f" (row {row})" if where else f"row {row}"
        super().__init__(f"{where}: {message}" if where else message)
