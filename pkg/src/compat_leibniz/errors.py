"""Exception types raised across the package."""


class LeibnizError(ValueError):
    """Base class; every error here is a bad-input condition."""


class DimensionMismatch(LeibnizError):
    pass


class SingularMatrixError(LeibnizError):
    pass


class InadmissibleParameter(LeibnizError):
    pass


class DegreeTooLarge(LeibnizError):
    pass


class NotInC0Com(LeibnizError):
    """Degree-0 element outside the compatible 0-cochains."""


class NotMaurerCartan(LeibnizError):
    pass


class InvalidDeformation(LeibnizError):
    pass


class NoInfinitesimal(LeibnizError):
    pass


class CocycleError(LeibnizError):
    def __init__(self, message, component=None):
        super().__init__(message)
        self.component = component


class InvalidBimodule(LeibnizError):
    pass


class InvalidExtension(LeibnizError):
    pass


class FormatError(LeibnizError):
    """Malformed input file; ``location`` names the offending field."""

    def __init__(self, message, location=None):
        super().__init__(f"{location}: {message}" if location else message)
        self.location = location
