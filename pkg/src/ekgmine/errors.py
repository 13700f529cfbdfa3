"""Exception hierarchy shared across the package.

Every error raised on a documented failure path derives from EkgError so the
CLI can map "bad data or bad syntax" to a single exit code.
"""

from __future__ import annotations


class EkgError(Exception):
    """Base class for all errors raised by this package."""


class FrozenGraphError(EkgError):
    """Mutation attempted on a graph that has been sealed for querying."""


class ParseError(EkgError):
    """Malformed input text. Carries a 1-based line/column position."""

    def __init__(self, message: str, line: int = 0, column: int = 0):
        self.line = line
        self.column = column
        super().__init__(f"{message} (line {line}, column {column})" if line else message)


class UnknownPrefixError(ParseError):
    """A prefixed name used a prefix that was never declared."""


class UnsupportedFormError(ParseError):
    """A query form that is recognized but deliberately not evaluated."""


class UnregisteredPrefixError(EkgError):
    """Serialization requested on a graph with no registered prefixes."""


class UnboundVariableError(EkgError):
    """A projection, filter, or order variable never occurs in the pattern."""

    def __init__(self, name: str, where: str = "query"):
        self.name = name
        super().__init__(f"variable ?{name} is not bound by the {where}")


class TypeMismatchError(EkgError):
    """A filter comparison paired terms with no defined ordering."""


class RaggedRowError(EkgError):
    """A CSV data row whose cell count differs from the header."""

    def __init__(self, row_index: int, expected: int, got: int):
        self.row_index = row_index
        super().__init__(
            f"row {row_index} has {got} cells, header has {expected}"
        )


class SchemaMismatchError(EkgError):
    """The table is missing columns the pipeline requires."""


class IncompleteSchemaError(EkgError):
    """A feature needed by the caller has no mapping-schema rule."""

    def __init__(self, feature: str):
        self.feature = feature
        super().__init__(f"no mapping rule for feature {feature!r}")


class InvalidIndexError(EkgError):
    """Student indexes are 1-based; anything below 1 is rejected."""


class DuplicatePathError(EkgError):
    """The same concept path was stated twice in a taxonomy file."""


class UnknownConceptError(EkgError):
    """A dotted concept path does not resolve in the loaded taxonomy."""

    def __init__(self, path: str):
        self.path = path
        super().__init__(f"unknown concept path {path!r}")


class UnknownFeatureError(EkgError):
    """A rule referenced a feature outside the curated-record schema."""

    def __init__(self, feature: str, known: tuple[str, ...] = ()):
        self.feature = feature
        msg = f"unknown feature {feature!r}"
        if known:
            msg += f" (known: {', '.join(known)})"
        super().__init__(msg)


class UncompilableExprError(EkgError):
    """A rule shape that cannot be translated to a graph query."""
