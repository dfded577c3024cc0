"""Exception types raised across the package.

Every error carries a short machine-parseable name (the class name) which
the command line front end prints as ``error=<Name>``.
"""

from __future__ import annotations


class DrspError(Exception):
    """Base class for all errors raised by this package."""

    #: CLI exit status used when this error escapes a subcommand.
    exit_code = 2


class MalformedMatrix(DrspError, ValueError):
    """A column is not a permutation of ``[N]``, or the grid is not N x N."""


class NonUnitParameters(DrspError, ValueError):
    """Parameter vector does not have unit Euclidean norm."""


class InvalidDivision(DrspError, ValueError):
    """Couples overlap or do not cover every row exactly once."""


class DimensionMismatch(DrspError, ValueError):
    pass


class NotScattered(DrspError, ValueError):
    """Matrix does not have exactly one +-1 per row and column."""


class MalformedSystem(DrspError, ValueError):
    pass


class NotSemiOrthogonal(DrspError, ValueError):
    """Some column pair cannot be split into exchanged 2-tuples."""


class NotSpecialOrthogonal(DrspError, ValueError):
    """Signs of a special matrix violate the exchange-and-negate rule."""


class BrokenPath(DrspError, ValueError):
    """An alternating couple path failed to close into a 4-tuple."""


class SolutionMismatch(DrspError, RuntimeError):
    """Sign assignment did not produce a special orthogonal matrix."""


class NotCooperative(DrspError, ValueError):
    pass


class NotGeneratorSet(DrspError, ValueError):
    pass


class InvalidMatrix(DrspError, ValueError):
    pass


class TooLarge(DrspError, ValueError):
    """Exhaustive search space exceeds the configured limit."""

    exit_code = 3
