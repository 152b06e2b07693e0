"""Exception types shared across the package."""


class HoiheadError(Exception):
    """Base class for all errors raised by this package."""


class ConfigError(HoiheadError):
    """Bad user input: malformed files, inconsistent shapes, invalid options."""


class DataFormatError(HoiheadError):
    """A matrix container file violates the on-disk format."""


class DegenerateInputError(HoiheadError):
    """Numerically unusable input, e.g. a zero-norm feature vector."""


class NumericFailure(HoiheadError):
    """A computation produced non-finite values and cannot continue."""
