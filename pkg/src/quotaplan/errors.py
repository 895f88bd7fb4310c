"""Exception hierarchy shared across the engine.

Everything raised on purpose derives from QuotaplanError so callers (CLI,
service) can map failures to exit codes / HTTP statuses in one place.
"""


class QuotaplanError(Exception):
    """Base class for all deliberate engine errors."""


class DomainError(QuotaplanError):
    """A numeric argument is outside its mathematical domain."""


class ShapeError(QuotaplanError):
    """Structurally mismatched inputs (lengths, interval endpoints)."""


class EmptyDataError(QuotaplanError):
    """An operation that needs data received none."""


class DataError(QuotaplanError):
    """Input data is internally inconsistent (e.g. acceptances > offers)."""


class ValidationError(QuotaplanError):
    """A parsed file or request violates a semantic constraint."""


class ParseError(QuotaplanError):
    """A file could not be parsed at all."""


class SchemaError(QuotaplanError):
    """A parsed file is missing required sections or has unknown ones."""


class MissingOptionError(QuotaplanError):
    """A decision product was requested without a required option."""

    def __init__(self, option: str):
        self.option = option
        super().__init__(f"missing required option: {option}")
