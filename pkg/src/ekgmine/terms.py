"""RDF terms and triples.

Two term variants only: IRIs and typed literals over string, signed 64-bit
integer, and boolean. Blank nodes, language tags, and other datatypes are
outside the supported subset.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

INT64_MIN = -(2**63)
INT64_MAX = 2**63 - 1


@dataclass(frozen=True, slots=True)
class Iri:
    """An absolute IRI, stored as raw text."""

    text: str

    def __post_init__(self):
        if not self.text:
            raise ValueError("IRI text must be non-empty")
        if any(c.isspace() for c in self.text):
            raise ValueError(f"IRI text contains whitespace: {self.text!r}")

    def local_name(self) -> str:
        """Text after the last '/' or '#', used as the ordinal-table key."""
        for sep in ("#", "/"):
            if sep in self.text:
                return self.text.rsplit(sep, 1)[1]
        return self.text

    def __str__(self) -> str:
        return f"<{self.text}>"


@dataclass(frozen=True, slots=True, eq=False)
class Literal:
    """A typed literal; the datatype is implied by the Python value type.

    Equality compares datatype and value, so Literal(True) != Literal(1)
    even though Python's bool is an int subtype.
    """

    value: Union[str, int, bool]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Literal):
            return NotImplemented
        return self.datatype == other.datatype and self.value == other.value

    def __hash__(self) -> int:
        return hash((self.datatype, self.value))

    def __post_init__(self):
        if isinstance(self.value, bool):
            return
        if isinstance(self.value, int):
            if not INT64_MIN <= self.value <= INT64_MAX:
                raise ValueError(f"integer literal out of 64-bit range: {self.value}")
            return
        if isinstance(self.value, str):
            return
        raise TypeError(f"unsupported literal value type: {type(self.value).__name__}")

    @property
    def datatype(self) -> str:
        if isinstance(self.value, bool):
            return "boolean"
        if isinstance(self.value, int):
            return "integer"
        return "string"

    def __str__(self) -> str:
        if isinstance(self.value, bool):
            return "true" if self.value else "false"
        if isinstance(self.value, int):
            return str(self.value)
        return f'"{self.value}"'


Term = Union[Iri, Literal]

# Rank of each literal datatype in the documented total order.
_DATATYPE_RANK = {"boolean": 0, "integer": 1, "string": 2}


def term_key(term: Term) -> tuple:
    """Sort key realizing the documented total order over terms.

    IRIs sort before literals and among themselves by text; literals sort by
    datatype (boolean < integer < string), then by value. The same order
    drives match() output, serialization, and ORDER BY.
    """
    if isinstance(term, Iri):
        return (0, term.text)
    rank = _DATATYPE_RANK[term.datatype]
    if isinstance(term.value, bool):
        return (1, rank, 1 if term.value else 0)
    return (1, rank, term.value)


@dataclass(frozen=True, slots=True)
class Triple:
    """A subject-predicate-object statement; subject and predicate are IRIs."""

    subject: Iri
    predicate: Iri
    object: Term

    def __post_init__(self):
        if not isinstance(self.subject, Iri):
            raise TypeError("triple subject must be an IRI")
        if not isinstance(self.predicate, Iri):
            raise TypeError("triple predicate must be an IRI")
        if not isinstance(self.object, (Iri, Literal)):
            raise TypeError("triple object must be an IRI or a literal")


def triple_key(t: Triple) -> tuple:
    return (term_key(t.subject), term_key(t.predicate), term_key(t.object))
