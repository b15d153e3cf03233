"""Exception hierarchy shared across the package."""


class TermrankError(Exception):
    """Base class for all errors raised by this package."""


class ConfigError(TermrankError):
    """Invalid or unknown configuration (bad field, bad value, bad schema)."""


class DataError(TermrankError):
    """Malformed or unusable input data (corpus, resources, gold standard)."""


class ParseError(DataError):
    """A data file failed to parse; carries the offending line number."""

    def __init__(self, path, line_no, message):
        self.path = str(path)
        self.line_no = line_no
        super().__init__(f"{self.path}:{line_no}: {message}")


class EmptyCorpusError(DataError):
    """The corpus contains no tokens."""
