"""Exception hierarchy.

Configuration and input problems derive from :class:`ConfigError` (CLI exit
code 2); data that the asymptotics exclude derive from
:class:`DegenerateDataError` (exit code 3).
"""


class VolcpError(Exception):
    """Base class for all package errors."""


class ConfigError(VolcpError, ValueError):
    pass


class InputError(ConfigError):
    """Malformed or non-equidistant input file."""


class BlockTooLarge(ConfigError):
    pass


class BlockTooSmall(ConfigError):
    pass


class DomainError(ConfigError):
    pass


class WindowTooLarge(ConfigError):
    pass


class GridTooLarge(ConfigError):
    pass


class DegenerateDataError(VolcpError, ArithmeticError):
    pass


class ZeroDenominator(DegenerateDataError):
    pass


class AllTruncated(DegenerateDataError):
    pass


class DegenerateQuarticity(DegenerateDataError):
    pass


class ZeroSpotVol(DegenerateDataError):
    pass


class CholeskyFailure(DegenerateDataError):
    pass


class NoConvergence(DegenerateDataError):
    pass


class MaxIterations(DegenerateDataError):
    pass
