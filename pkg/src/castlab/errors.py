"""Exception types shared across the toolkit.

Class names are stable identifiers: the CLI prints ``type(e).__name__`` on
the diagnostic stream, so renaming one is a breaking change.
"""


class CastLabError(Exception):
    """Base class for all toolkit errors."""


class InvalidKeyLength(CastLabError):
    """Key is not 5..16 octets (40-128 bits in 8-bit steps)."""


class InvalidRounds(CastLabError):
    """Round count outside [1, 16]."""


class InvalidBitIndex(CastLabError):
    """Bit index beyond the key's bit length."""


class ZeroBound(CastLabError):
    """rand_below() called with bound < 1."""


class UnsupportedFormat(CastLabError):
    """Image file is not 8-bit grayscale PGM/BMP."""


class CorruptHeader(CastLabError):
    """Image header is malformed or truncated."""


class SizeMismatch(CastLabError):
    """Pixel data does not match header dimensions, or two images differ in size."""


class IoError(CastLabError):
    """File could not be read or written."""


class NotBlockAligned(CastLabError):
    """Image pixel count is not a multiple of the 8-byte block size."""


class BadPadding(CastLabError):
    """PKCS#7 padding failed validation on decrypt."""


class EmptyHistogram(CastLabError):
    """Histogram has zero total count."""


class DegenerateVariance(CastLabError):
    """Correlation undefined: one series has zero variance."""
