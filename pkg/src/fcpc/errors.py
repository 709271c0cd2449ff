"""Exception hierarchy shared by every fcpc module."""


class FcpcError(Exception):
    """Base class for domain errors (CLI exit code 1)."""


class NotAPrimePower(FcpcError):
    pass


class TooLarge(FcpcError):
    pass


class DimensionMismatch(FcpcError):
    pass


class SpaceTooLarge(FcpcError):
    pass


class InvalidGroups(FcpcError):
    pass


class InvalidArgs(FcpcError):
    pass


class BadBlockId(FcpcError):
    pass


class NotConsecutive(FcpcError):
    pass


class SizeMismatch(FcpcError):
    pass


class NotLocallyBounded(FcpcError):
    pass


class NotFullSize(FcpcError):
    pass


class CertificateMismatch(FcpcError):
    pass


class BudgetExceeded(FcpcError):
    """A search ran out of its node budget before reaching a verdict.

    ``report`` carries whatever bounds were established before the budget ran
    out (a :class:`fcpc.dcode.SearchReport` for D-code searches).
    """

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class SearchBudgetExceeded(BudgetExceeded):
    """Clique search hit its node cap; this is *not* a nonexistence proof."""
