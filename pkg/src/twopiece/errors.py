"""Exception hierarchy.

Every exception carries a short machine-greppable ``name`` which the
command line front end prints as the prefix of its one-line error message.
"""


class TwoPieceError(Exception):
    name = "error"


class DomainError(TwoPieceError, ValueError):
    """Argument outside the domain of the operation (e.g. p not in (0, 1))."""

    name = "domain-error"


class InvalidParameters(DomainError):
    name = "invalid-parameters"


class ToleranceNotReached(TwoPieceError, ArithmeticError):
    name = "tolerance-not-reached"


class NoSignChange(TwoPieceError, ValueError):
    name = "no-sign-change"


class MaxIterations(TwoPieceError, ArithmeticError):
    name = "max-iterations"


class InfeasibleSkewness(TwoPieceError, ValueError):
    name = "infeasible-skewness"


class NoPositiveScales(TwoPieceError, ValueError):
    name = "no-positive-scales"


class DegenerateData(TwoPieceError, ValueError):
    name = "degenerate-data"


class ParseError(TwoPieceError, ValueError):
    name = "parse-error"
