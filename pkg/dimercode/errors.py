"""Exception hierarchy for DimerCode.

Library code raises these; the CLI turns them into an error panel and exit code 1.
"""

from typing import Optional


class DimerCodeError(Exception):
    """Base class for all DimerCode errors."""


class ColouringParseError(DimerCodeError, ValueError):
    """A colouring string is empty or contains a character other than 'r'/'b'."""

    def __init__(self, message: str, position: Optional[int] = None):
        super().__init__(message)
        self.position = position


class InvalidConfigurationError(DimerCodeError, ValueError):
    """A dimer or hard-dimer is not valid on the given colouring."""


class EnumerationLimitError(DimerCodeError):
    """The subset space is too large for brute-force enumeration."""

    def __init__(self, dimer_count: int, limit: int):
        super().__init__(
            f"{dimer_count} dimers exceed the brute-force limit of {limit}; "
            "use count_hard_dimers_dp instead"
        )
        self.dimer_count = dimer_count
        self.limit = limit


class CountOverflowError(DimerCodeError, ArithmeticError):
    """A hard-dimer count left the 64-bit unsigned range (use wide=True)."""


class ParameterRangeError(DimerCodeError, ValueError):
    """Arguments outside an operation's admissible range."""


class BudgetExceededError(DimerCodeError, ValueError):
    """A site count exceeds the enumeration budget of the chosen method."""


class ZeroVarianceError(DimerCodeError, ValueError):
    """Standardization of a sample with zero variance."""


class GridMismatchError(DimerCodeError, ValueError):
    """Two densities evaluated on different grids."""


class SettingsError(DimerCodeError):
    """A settings file could not be read or validated."""
