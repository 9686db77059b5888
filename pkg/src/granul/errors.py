"""Exception types raised across granul."""


class GranulError(Exception):
    """Base class for all granul errors."""


class InvalidArgumentError(GranulError, ValueError):
    pass


class MalformedInputError(GranulError, ValueError):
    """Input text is not valid UTF-8."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} at byte offset {offset}")
        self.offset = offset


class FormatError(GranulError, ValueError):
    """A vocab, merges, lexicon or meta file violates its format."""

    def __init__(self, message: str, line: int | None = None, path=None):
        where = ""
        if path is not None:
            where += f"{path}:"
        if line is not None:
            where += f"line {line}: "
        elif where:
            where += " "
        super().__init__(where + message)
        self.line = line
        self.path = path


class InvalidTokenError(GranulError, ValueError):
    pass
