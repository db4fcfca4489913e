"""Exception types raised across snirkit."""


class SnirError(Exception):
    """Base class for all snirkit errors."""


class InvalidConfigError(SnirError, ValueError):
    pass


class EmptyGraphError(SnirError, ValueError):
    pass


class NoNetworkError(EmptyGraphError):
    pass


class SingularDesignError(SnirError, ArithmeticError):
    """A design (or Gram) matrix is rank deficient.

    ``index`` carries the node whose column made the design singular, when
    one can be identified.
    """

    def __init__(self, message, index=None):
        super().__init__(message)
        self.index = index


class SingularityError(SingularDesignError):
    pass


class InsufficientRowsError(SnirError, ValueError):
    pass


class DegenerateFitError(SnirError, ArithmeticError):
    pass


class DegenerateResponseError(SnirError, ValueError):
    pass


class ConstantResponseError(DegenerateResponseError):
    pass


class UnstableTruthError(SnirError, ValueError):
    pass


class DataError(SnirError, ValueError):
    """Malformed or incomplete input data."""

    def __init__(self, message, lineno=None):
        if lineno is not None:
            message = f"line {lineno}: {message}"
        super().__init__(message)
        self.lineno = lineno
