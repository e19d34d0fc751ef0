"""Exception hierarchy shared by all modules.

The CLI maps these onto exit codes: input problems exit 2, exhausted
budgets and caps exit 3.  Negative verdicts (a search that certifies
absence) are ordinary return values, never exceptions.
"""


class RamseyForgeError(Exception):
    """Base class for all errors raised by this package."""


class InputError(RamseyForgeError):
    """Malformed input: bad file, bad argument, violated constructor invariant."""


class WindowTooSmallError(InputError):
    """The requested certificate cannot fit in the finite window.

    Distinct from a negative search result: "no homogeneous set of size 6
    exists in this window" is an answer, "the window has fewer than 6
    elements" is not.
    """


class PreconditionError(InputError):
    """An operation's stated precondition does not hold for the given input."""


class BoundViolationError(PreconditionError):
    """A chain or homogeneous set exceeds the bound the caller promised."""


class BudgetExceededError(RamseyForgeError):
    """A search ran out of its node-expansion budget before finishing."""


class CapExceededError(BudgetExceededError):
    """A construction hit a hard size cap (e.g. the partition-enumeration cap)."""


class FrontierError(InputError):
    """An edge would touch a vertex behind the witness graph's frontier."""
