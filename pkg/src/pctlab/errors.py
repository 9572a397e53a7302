"""Exception hierarchy shared across the package.

Validation errors map to CLI exit code 1, numerical failures to exit
code 3.  Verification results beyond tolerance are not exceptions; they
travel inside reports and map to exit code 2.
"""


class PctlabError(Exception):
    """Base class for all package errors."""


class ValidationError(PctlabError):
    """Bad input: parameters, quantum numbers, flags, domains."""


class DomainError(ValidationError):
    """Argument outside the mathematical domain of a map or potential."""


class UnsupportedBranchError(ValidationError):
    """gamma = -2 requested on the power-law branch; use the log-map cases."""


class ComplexIndexError(ValidationError):
    """Effective angular momentum radicand is negative for this state."""


class NoBoundStateError(ValidationError):
    """Requested state is not bound for the given parameters."""


class NumericalError(PctlabError):
    """Eigensolver breakdown, quadrature failure, or similar."""


class PoleError(NumericalError):
    """A potential was evaluated at (or a grid node landed on) a pole."""
