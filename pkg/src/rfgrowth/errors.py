"""Exception hierarchy shared by every module.

Each class maps to a distinct CLI exit code (see ``rfgrowth.cli``).
"""


class RFGrowthError(Exception):
    exit_code = 1
    kind = "error"


class InputError(RFGrowthError, ValueError):
    exit_code = 3
    kind = "input"


class ResourceError(RFGrowthError, RuntimeError):
    """A configured budget (ball size, scan size, hom tuples, order cap) was exceeded."""

    exit_code = 4
    kind = "budget"


class UnsupportedPresentation(RFGrowthError):
    exit_code = 5
    kind = "unsupported-presentation"


class SearchExhausted(RFGrowthError):
    exit_code = 6
    kind = "search-exhausted"


class DomainError(RFGrowthError, ValueError):
    """Parameters outside the range where a family or construction is defined."""

    exit_code = 7
    kind = "domain"


class PreconditionError(DomainError):
    kind = "precondition"


class MembershipError(InputError):
    kind = "membership"


class ConstantViolation(RFGrowthError, AssertionError):
    exit_code = 8
    kind = "constant-violation"


class InequalityViolation(RFGrowthError, AssertionError):
    exit_code = 8
    kind = "inequality-violation"
