"""Exception types raised across the package."""


class OIAError(Exception):
    """Base class for all errors raised by oiasim."""


class RankDeficient(OIAError):
    """A channel or basis matrix lacks full numerical column rank."""


class ShapeMismatch(OIAError, ValueError):
    pass


class EmptyList(OIAError, ValueError):
    pass


class NotHermitian(OIAError, ValueError):
    pass


class InvalidConfig(OIAError, ValueError):
    pass


class InfeasibleAssignment(OIAError, ValueError):
    """Fewer rows (users) than columns (transmitters)."""


class NonFiniteCost(OIAError, ValueError):
    pass


class TooLarge(OIAError, ValueError):
    """Brute-force enumeration refused because the problem is too big."""


class UnsupportedCombination(OIAError):
    """A scheme/framework/sweep combination that is not modelled."""


class InvalidSpec(OIAError, ValueError):
    """Bad experiment description; ``field`` names the offending spec field."""

    def __init__(self, message, field=None):
        super().__init__(message)
        self.field = field


class UsageError(OIAError):
    """Bad command line; ``flag`` names the offending option when known."""

    def __init__(self, message, flag=None):
        super().__init__(message)
        self.flag = flag
