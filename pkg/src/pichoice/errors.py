"""Exception types shared across the package."""


class PichoiceError(Exception):
    """Base class for all package errors."""


class CapExceeded(PichoiceError):
    """An exhaustive routine was asked to run above its size cap."""


class EmptyFamily(PichoiceError):
    pass


class NotInFamily(PichoiceError):
    pass


class InvalidTable(PichoiceError):
    """An explicit choice table failed validation."""


class OracleInconsistent(PichoiceError):
    """A membership oracle contradicted the invariants of Algorithm 1."""


class NoValidCandidate(PichoiceError):
    pass


class NotPI(PichoiceError):
    pass


class NotPartialOrder(PichoiceError):
    pass


class NotAcceptant(PichoiceError):
    pass


class NotStableInput(PichoiceError):
    pass


class InvalidCycle(PichoiceError):
    pass


class NonPositiveValue(PichoiceError):
    pass


class OverlappingTypes(PichoiceError):
    pass


class ReserveOverflow(PichoiceError):
    pass


class UnknownId(PichoiceError):
    pass


class ParseError(PichoiceError):
    pass
