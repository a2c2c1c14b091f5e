"""expoapprox Error Classes."""


class ExpoApproxException(Exception):
    """Base class for exceptions raised by this library."""
    pass


class InvalidArgumentsError(ExpoApproxException):
    """Invalid arguments were passed to a method."""
    pass


class ValidationError(ExpoApproxException):
    """Data validation failed for a property or group of properties"""
    pass


class MalformedSignalError(ValidationError):
    """A sampled signal (or the CSV it was read from) is malformed"""
    pass


class IllConditionedBasisError(ExpoApproxException):
    """The Gram matrix of a basis is not numerically positive definite.

    Attributes:
        index (int): position of the first pivot that fell below the
            threshold.

    """
    def __init__(self, message, index):
        super(IllConditionedBasisError, self).__init__(message)
        self.index = index


class ConsistencyError(ExpoApproxException):
    """A computed quantity violated a bound that holds in exact arithmetic
    by more than rounding can explain."""
    pass


class RootBracketError(ExpoApproxException):
    """The bracket handed to a root solver does not contain a sign change"""
    pass
