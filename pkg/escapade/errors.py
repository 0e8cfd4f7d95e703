class EscapadeError(Exception):
    """Base exception thrown by escapade"""


class ConfigError(EscapadeError):
    """Error in the config system."""


class ImmutableError(EscapadeError):
    """Immutable properties cannot change"""


class ParameterError(EscapadeError, ValueError):
    """An algorithm parameter is out of its valid range."""


class InputError(EscapadeError):
    """Input data is malformed or of the wrong dimension."""


class ModelDescriptionError(InputError):
    """A model description file cannot be understood."""


class UsageError(InputError):
    """The command line cannot be parsed."""


class TransportError(EscapadeError):
    """Communication with a remote model failed."""

    def __init__(self, message, line=None):
        super().__init__(message if line is None else f'{message}: {line!r}')
        self.line = line


class ProtocolError(TransportError):
    """A remote model answered with an invalid message."""


class UnsupportedVersionError(ProtocolError):
    """A remote model speaks another protocol version."""


class PredictionError(EscapadeError):
    """The prediction at the target point could not be obtained."""


class PreconditionError(EscapadeError):
    """An operation was called outside of its domain."""


class AmbiguousSideError(PreconditionError):
    """The target prediction lies exactly on the decision boundary."""


class EmptyRegionError(EscapadeError):
    """No context point is eps-far, the boundary is not observable."""


class DegenerateModelError(EscapadeError):
    """Every boundary gradient vanished, no halfspace can be built."""


class DegenerateHullError(EscapadeError):
    """The context points span no volume."""


class UntrustedTargetError(PreconditionError):
    """The target lies outside of the trustworthy region."""
