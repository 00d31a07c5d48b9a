"""Exception hierarchy shared by all modules.

The CLI maps PreconditionError to exit status 2 and CapExceeded to
exit status 3; everything else is a bug.
"""


class BFreeError(Exception):
    pass


class PreconditionError(BFreeError):
    """An input violated a documented precondition."""


class CapExceeded(BFreeError):
    """A configured resource cap (period, table size, subset count) was hit."""


class InvariantViolation(BFreeError):
    """A machine-checked postcondition failed; indicates an internal bug."""


# bset
class MalformedSpec(PreconditionError):
    pass


class ContainsOne(PreconditionError):
    pass


class PeriodTooLarge(CapExceeded):
    pass


class SubsetBlowup(CapExceeded):
    pass


class TailUnavailable(PreconditionError):
    pass


class EnumerationTooShallow(PreconditionError):
    pass


# sieve / audit
class Blowup(CapExceeded):
    pass


class NonHereditarySource(PreconditionError):
    pass


# codes
class PartialTable(PreconditionError):
    pass


class TooShort(PreconditionError):
    pass


class NonVanishingAtZero(PreconditionError):
    pass


# constructions
class PreconditionB0(PreconditionError):
    pass


class NotAdmissible(PreconditionError):
    pass


class CoprimalityFailure(PreconditionError):
    pass


class WitnessExists(PreconditionError):
    pass
