"""Exception hierarchy shared by every module."""


class NovikovError(Exception):
    """Base class for all library errors."""


class RingMismatchError(NovikovError):
    pass


class UnsupportedOperationError(NovikovError):
    pass


class DomainError(NovikovError):
    pass


class ExpansionError(NovikovError):
    pass


class ShapeError(NovikovError):
    pass


class EmbeddingError(NovikovError):
    pass


class IsotopyError(NovikovError):
    pass


class GlueMismatchError(NovikovError):
    pass


class HomotopyError(NovikovError):
    pass


class ParseError(NovikovError):
    pass


class ValidationError(NovikovError):
    """Raised when input data fail the chain conditions; carries the report."""

    def __init__(self, report):
        self.report = report
        super().__init__(str(report))


class InvariantBreach(NovikovError):
    """A structural identity failed on valid input. Always a bug."""
