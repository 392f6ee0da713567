"""Exception types raised across the package.

Every error derives from :class:`FrameRangeError`, itself a ``ValueError``,
so callers can catch one base class at the CLI boundary.
"""


class FrameRangeError(ValueError):
    pass


class DimensionMismatch(FrameRangeError):
    pass


class SingularMatrix(FrameRangeError):
    pass


class UnsupportedMatrix(FrameRangeError):
    pass


class UnboundedBand(FrameRangeError):
    pass


class EmptyBand(FrameRangeError):
    pass


class NotSamplingMatrix(FrameRangeError):
    def __init__(self, message, which=None):
        super().__init__(message)
        self.which = which


class EmptyList(FrameRangeError):
    pass


class Incommensurable(FrameRangeError):
    pass


class EmptyBandGrid(FrameRangeError):
    def __init__(self, message, suggested_period=None):
        super().__init__(message)
        self.suggested_period = suggested_period


class PeriodMismatch(FrameRangeError):
    pass


class NotDisjoint(FrameRangeError):
    pass


class NotTight(FrameRangeError):
    pass


class RankAmbiguity(FrameRangeError):
    """A singular value fell inside the band where rank cannot be decided."""


class LengthMismatch(FrameRangeError):
    pass


class MissingTimeProfile(FrameRangeError):
    pass


class NotExpansive(FrameRangeError):
    pass


class ZeroFactor(FrameRangeError):
    pass


class ParseError(FrameRangeError):
    def __init__(self, message, line=None, key=None):
        loc = []
        if line is not None:
            loc.append(f"line {line}")
        if key is not None:
            loc.append(f"key {key!r}")
        if loc:
            message = f"{message} ({', '.join(loc)})"
        super().__init__(message)
        self.line = line
        self.key = key


class UnknownKey(ParseError):
    pass
