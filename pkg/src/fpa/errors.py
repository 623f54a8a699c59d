"""Exception hierarchy. Everything raised on bad user input is a ``FPAError``."""


class FPAError(ValueError):
    pass


class ParameterError(FPAError):
    """Inconsistent (lambda, m, n, k, d) or mismatched inputs."""


class InvalidWord(FPAError):
    pass


class WrongLength(InvalidWord):
    pass


class OutOfRangeSymbol(InvalidWord):
    pass


class WrongMultiplicity(InvalidWord):
    pass


class IndexOutOfRange(FPAError):
    pass


class EmptyTrials(FPAError):
    pass


class CapExceeded(FPAError):
    """A size guard refused an exponential computation."""


class OrderTooLarge(CapExceeded):
    pass


class NonDivisible(ArithmeticError):
    """Permanent not divisible by (lambda!)^m. Never expected; indicates a bug."""
