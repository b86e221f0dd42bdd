"""Exception hierarchy shared by all pipeline stages."""


class TfrsError(Exception):
    """Base class for every error raised by this package."""


class DataError(TfrsError):
    """Input data is malformed or unsuitable for the requested stage."""


class ParseError(DataError):
    """Malformed PNM header or pixel token."""

    def __init__(self, message, offset):
        super().__init__(f"{message} (at byte {offset})")
        self.offset = offset


class TruncatedError(DataError):
    pass


class UnsupportedError(DataError):
    pass


class SizeError(DataError, ValueError):
    pass


class OddLengthError(SizeError):
    pass


class RankError(DataError, ValueError):
    pass


class LabelError(DataError, KeyError):
    pass


class NoComponentError(DataError):
    pass


class DegenerateMaskError(DataError):
    pass


class ManifestError(DataError):
    pass


class DegenerateSpectrumWarning(UserWarning):
    """Some requested eigenvectors had (numerically) zero eigenvalue and were filled in."""
