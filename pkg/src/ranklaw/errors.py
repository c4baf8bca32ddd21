"""Exception hierarchy for ranklaw."""


class RankLawError(Exception):
    """Base class for all validation errors raised by this package."""


class CorpusDecodeError(RankLawError):
    def __init__(self, encoding, offset, reason):
        self.encoding = encoding
        self.offset = offset
        super().__init__(
            f"cannot decode input as {encoding} at byte offset {offset}: {reason}"
        )


class EmptyCorpusError(RankLawError):
    pass


class DegenerateCorpusError(RankLawError):
    pass


class DegenerateMomentsError(RankLawError):
    pass


class ShapeDomainError(RankLawError):
    def __init__(self, a, b):
        self.a = a
        self.b = b
        super().__init__(
            f"beta-function arguments must be positive, got 1-alpha={a!r}, "
            f"alpha+beta+1={b!r}"
        )


class InsufficientPointsError(RankLawError):
    pass


class NoOptimumError(RankLawError):
    pass


class InvalidInitializationError(RankLawError):
    pass


class FormatError(RankLawError):
    """Malformed TSV or JSON input."""
