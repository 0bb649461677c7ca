"""Exception types shared across the package."""


class WavewalkError(Exception):
    """Base class for all package-specific errors."""


class FilterKindError(WavewalkError):
    """Operation requires the other filter representation (coefficients vs. table)."""


class UnsupportedScale(WavewalkError):
    """Operation is only defined for dyadic filters (scale 2)."""


class DigitOutOfRange(WavewalkError):
    """A digit fell outside {0, ..., N-1}."""


class EmptyWord(WavewalkError):
    """Operation needs a nonempty digit word."""


class ArityTooLarge(WavewalkError):
    """Tabulated-function arity would exceed the configured tree budget."""


class DepthTooLarge(WavewalkError):
    """Exact transfer-operator power would exceed the configured tree budget."""


class DegenerateStep(WavewalkError):
    """All branch weights vanished at some state of a sampled walk."""
