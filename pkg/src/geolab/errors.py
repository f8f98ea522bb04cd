"""Exception types shared across the package."""


class GeolabError(ValueError):
    """Base class for all domain and validation failures."""


class InvalidDiscriminantError(GeolabError):
    """Input is not a valid indefinite non-square discriminant."""


class NonReducedFormError(GeolabError):
    """A reduction-cycle operation was handed a form outside its domain."""


class InsufficientTableError(GeolabError):
    """A trace table does not reach the cutoff demanded by the query."""


class CoverageError(GeolabError):
    """A zero-table query extends past the table's largest entry."""


class DomainError(GeolabError):
    """Numeric argument outside the operation's domain."""


class ZerosParseError(GeolabError):
    """Malformed zeros file; carries the offending line number."""

    def __init__(self, message: str, line: int):
        super().__init__(f"line {line}: {message}")
        self.line = line


class InsufficientDataError(GeolabError):
    """Not enough usable rows for a statistical fit."""
