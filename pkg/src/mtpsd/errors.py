"""Exception types shared across the package."""


class ParameterError(ValueError):
    """An argument is outside its documented domain."""


class ConfigurationError(ParameterError):
    """A combination of otherwise-valid arguments violates a required
    relationship (the message names the violated inequality)."""


class InapplicableBoundError(ValueError):
    """A bound formula does not apply to the given inputs (e.g. missing
    smoothness information, or a frequency-separation requirement fails)."""


class NumericalError(RuntimeError):
    """A numerical routine failed to converge or produced an unusable
    factorization."""


class InputError(ValueError):
    """Sample or fixture input could not be read or has the wrong shape."""
