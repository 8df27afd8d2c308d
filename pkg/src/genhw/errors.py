"""Exception hierarchy.

Two families matter to callers: ``InputError`` (bad instance, bad flags,
size guard exceeded; CLI exit code 2) and ``InternalInvariantError`` (a
mathematical invariant that must hold was breached; CLI exit code 3).
"""


class GenHWError(Exception):
    pass


class InputError(GenHWError, ValueError):
    pass


class InstanceError(InputError):
    pass


class GuardExceeded(InputError):
    pass


class InternalInvariantError(GenHWError):
    code = "INTERNAL"


class NuBoundViolation(InternalInvariantError):
    """A solution nu with some nu_j >= p for u, v in U^I_min."""

    code = "NU-BOUND-VIOLATION"


class AxViolation(InternalInvariantError):
    code = "AX-VIOLATION"


class FrobeniusFixednessError(InternalInvariantError):
    code = "FROBENIUS-FIXEDNESS"


class InexactDivisionError(InternalInvariantError):
    code = "INEXACT-DIVISION"
