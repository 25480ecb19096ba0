"""Exception hierarchy shared by all gswlab modules."""


class GSWLabError(Exception):
    """Base class for every error raised by gswlab."""


class ShapeMismatch(GSWLabError, ValueError):
    pass


class DimensionMismatch(GSWLabError, ValueError):
    pass


class NonUnitQuaternion(GSWLabError, ValueError):
    pass


class NonUnitScalar(GSWLabError, ValueError):
    pass


class NotImaginary(GSWLabError, ValueError):
    pass


class DegreeOverflow(GSWLabError, ValueError):
    pass


class DegreeUnderflow(GSWLabError, ValueError):
    pass


class DegreeMismatch(GSWLabError, ValueError):
    pass


class GridMismatch(GSWLabError, ValueError):
    pass


class IncompatibleTriple(GSWLabError, ValueError):
    pass


class NotOnSlice(GSWLabError, ValueError):
    pass


class DivergedError(GSWLabError, RuntimeError):
    """Raised when an iterative solver's residual grows beyond its guard."""


class BlowUp(GSWLabError, RuntimeError):
    """Raised when a time integrator produces a field norm above its guard."""


class ConfigError(GSWLabError, ValueError):
    pass


class ParseError(GSWLabError, ValueError):
    pass


class UnknownSuite(GSWLabError, KeyError):
    pass
