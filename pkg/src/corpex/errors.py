"""Exception hierarchy shared across the package."""


class CorpexError(Exception):
    """Base class for all corpex errors."""


class UsageError(CorpexError):
    """Bad arguments or configuration; maps to CLI exit code 2."""


# --- vertical / plain-text ingest ---

class VerticalFormatError(CorpexError):
    """Structurally invalid vertical-format input."""


class MalformedLineError(VerticalFormatError):
    def __init__(self, line_no: int, reason: str):
        super().__init__(f"line {line_no}: {reason}")
        self.line_no = line_no
        self.reason = reason


class UnclosedDocError(VerticalFormatError):
    pass


class DuplicateDocIdError(VerticalFormatError):
    pass


# --- node specs ---

class BadArityError(CorpexError):
    """Node spec has the wrong number of forms for its kind."""


class NonAlphabeticError(CorpexError):
    """Initialism contains non-letter characters."""


# --- index storage ---

class EmptyCorpusError(UsageError):
    """No non-empty documents to index."""


class IndexFormatError(CorpexError):
    """Unreadable index file."""


class BadMagicError(IndexFormatError):
    pass


class VersionMismatchError(IndexFormatError):
    pass


class TruncatedFileError(IndexFormatError):
    pass


# --- scopes and queries ---

class QueryParseError(UsageError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class EmptyScopeError(CorpexError):
    """A non-empty scope was required."""


# --- statistics ---

class ZeroCorpusError(CorpexError):
    """A size-normalized statistic was asked of an empty scope."""


class BadSmoothingError(CorpexError):
    """Keyness smoothing constant must be positive."""


class ZeroCooccurrenceError(CorpexError):
    """logDice is undefined for a zero co-occurrence count."""


class NodeAbsentError(CorpexError):
    """The node has no hits in the scope under analysis."""


class UntaggedScopeError(CorpexError):
    """POS-dependent relations were requested on an untagged scope."""


class UnknownFormatError(UsageError):
    """Unsupported output format name."""
