"""Exception hierarchy shared by all subpackages."""


class HigherPrequantumError(Exception):
    """Base class for every error raised by this package."""


class ChartMismatch(HigherPrequantumError, ValueError):
    pass


class DegreeMismatch(HigherPrequantumError, ValueError):
    pass


class BranchError(HigherPrequantumError, ValueError):
    """A pullback or restriction leaves the polynomial-Fourier ring."""


class NotInLaurentRing(HigherPrequantumError, ArithmeticError):
    """An exact solve produced a genuine rational function of tau."""


class ParseError(HigherPrequantumError, ValueError):
    pass


class NotClosed(HigherPrequantumError, ValueError):
    pass


class NotHamiltonian(HigherPrequantumError, ValueError):
    pass


class NonConstantOmega(HigherPrequantumError, ValueError):
    pass


class NotACocycle(HigherPrequantumError, ValueError):
    pass


class NotAComplex(HigherPrequantumError, ValueError):
    pass


class GluingFailure(HigherPrequantumError, ValueError):
    pass


class NotIntegral(HigherPrequantumError, ValueError):
    pass


class NotAPrimitive(HigherPrequantumError, ValueError):
    pass


class NerveMismatch(HigherPrequantumError, ValueError):
    pass


class UnknownScenario(HigherPrequantumError, KeyError):
    pass


class InvalidOverride(HigherPrequantumError, ValueError):
    pass
