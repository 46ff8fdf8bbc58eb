"""Exception hierarchy shared by the library, the CLI and the MCP tools."""

from typing import Any


class SlodowyError(Exception):
    """Base class for every error raised by the package.

    Args:
        message: Human readable description
        **details: Witness data carried into JSON reports
    """

    exit_code = 1

    def __init__(self, message: str, **details: Any) -> None:
        super().__init__(message)
        self.details: dict[str, Any] = details


class InputError(SlodowyError):
    """Malformed or out-of-range input (partitions, formats, dimensions)."""

    exit_code = 2


class RelationError(SlodowyError):
    """A pair of partitions is not a dominance cover."""

    exit_code = 2


class DomainError(SlodowyError):
    """Input outside the mathematical domain of an operation (e.g. not nilpotent)."""


class ResourceError(SlodowyError):
    """A truncated linear system would exceed the configured size cap."""


class ConsistencyError(SlodowyError):
    """An internal invariant failed; indicates a bug or a false claim."""


class FixtureError(SlodowyError):
    """Fixture file missing or malformed."""

    exit_code = 3
