"""Turn curated records into the educational knowledge graph.

Each record becomes one student entity named Student{index}; each mapped
feature contributes one triple. The subject map is injective by construction
and the build is deterministic: the same records and schema always produce
the same frozen graph.
"""

from __future__ import annotations

import re
from typing import Iterable, Optional

from .curation import CuratedRecord
from .errors import InvalidIndexError
from .graph import Graph
from .mapping import MappingSchema
from .terms import Iri, Triple

_STUDENT_LOCAL = re.compile(r"Student([1-9][0-9]*)$")


def student_iri(index: int, namespace: str) -> Iri:
    """Subject IRI for the 1-based student index; injective over indexes."""
    if index < 1:
        raise InvalidIndexError(f"student index must be >= 1, got {index}")
    return Iri(f"{namespace}Student{index}")


def student_index(iri: Iri, namespace: str) -> Optional[int]:
    """Inverse of student_iri; None when the IRI is not a student subject."""
    if not iri.text.startswith(namespace):
        return None
    m = _STUDENT_LOCAL.fullmatch(iri.text[len(namespace):])
    return int(m.group(1)) if m else None


def build_graph(records: Iterable[CuratedRecord], schema: MappingSchema) -> Graph:
    """A frozen graph with one triple per record per mapped feature."""
    graph = Graph({schema.prefix: schema.namespace})
    for record in records:
        subject = student_iri(record.student_index, schema.namespace)
        for feature in schema.features():
            graph.insert(Triple(
                subject,
                schema.predicate_iri(feature),
                schema.object_term(record, feature),
            ))
    return graph.freeze()
