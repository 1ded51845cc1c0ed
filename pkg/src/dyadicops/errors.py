"""Exception types shared across the package."""


class DyadicOpsError(ValueError):
    """Base class for domain errors raised by this package."""


class ShapeError(DyadicOpsError):
    """Operands have mismatched depth, mode, or arity."""


class ResolutionError(DyadicOpsError):
    """An interval is too fine for the grid depth it is used with."""


class RootExceedsHeight(DyadicOpsError):
    """The global average already exceeds the requested stopping height."""
