"""Exception types raised by the simulator and the convolution pipelines."""


class QConvError(Exception):
    """Base class for all errors raised by qconv."""


class InvalidLengthError(QConvError, ValueError):
    """Vector length is not a power of two, or lengths disagree."""


class ZeroNormError(QConvError, ValueError):
    pass


class NonUnitaryError(QConvError, ValueError):
    """A non-unitary matrix was passed without explicit opt-in."""


class OrderingError(QConvError, ValueError):
    """Spectral data was tagged with an ordering the operation cannot accept."""


class UndefinedPhaseError(QConvError, ValueError):
    """A phase was requested for a zero frequency-response value."""


class AnnihilationError(QConvError):
    """The filter removes the whole input spectrum, so no state survives."""


class ImpossibleOutcomeError(QConvError):
    """Post-selection on an outcome whose probability is (numerically) zero."""


class SignalFormatError(QConvError, ValueError):
    """A signal or filter file could not be parsed."""
