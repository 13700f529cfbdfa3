"""Apply rules to records, assert pattern tags into the graph, report counts.

Tagging evaluates each rule directly over the curated records (the compiled
query route exists for cross-checking; see rules.compile_rule). A satisfied
rule yields one tag per student and one hasPattern triple in a tagged copy of
the graph. Re-running produces the identical tag list and graph.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from .builder import student_index, student_iri
from .curation import CuratedRecord
from .graph import Graph
from .rules import Rule, eval_rule
from .taxonomy import Taxonomy
from .terms import Iri, Triple

TAG_PREDICATE = "hasPattern"


@dataclass(frozen=True)
class Tag:
    """A student-to-concept link; value False records a checked-and-absent pattern."""

    subject: Iri
    concept: str  # dotted path as written in the rule
    value: bool


@dataclass(frozen=True)
class ReportRow:
    concept: str
    value: bool
    count: int
    students: tuple[int, ...]


def _infer_namespace(graph: Graph, namespace: Optional[str]) -> str:
    if namespace is not None:
        return namespace
    if len(graph.prefixes) == 1:
        return next(iter(graph.prefixes.values()))
    raise ValueError("namespace is ambiguous; pass it explicitly")


def apply_rules(
    graph: Graph,
    records: Sequence[CuratedRecord],
    rules: Sequence[Rule],
    taxonomy: Taxonomy,
    namespace: Optional[str] = None,
) -> tuple[list[Tag], Graph]:
    """Evaluate every rule on every record; return tags and a tagged graph.

    The tag triple is (student, hasPattern, concept-leaf IRI). At most one
    tag is emitted per (student, resolved concept); distinct tagged concepts
    must not share a leaf name, since the leaf names the concept IRI.
    """
    ns = _infer_namespace(graph, namespace)

    leaf_owner: dict[str, str] = {}
    for rule in rules:
        canonical = taxonomy.resolve(rule.tag.concept_path).path
        leaf = rule.tag.concept_path.split(".")[-1]
        if leaf_owner.setdefault(leaf, canonical) != canonical:
            raise ValueError(
                f"tagged concepts {leaf_owner[leaf]!r} and {canonical!r} "
                f"share the leaf name {leaf!r}"
            )

    tags: list[Tag] = []
    seen: set[tuple[str, str]] = set()
    for rule in rules:
        canonical = taxonomy.resolve(rule.tag.concept_path).path
        for record in records:
            if not eval_rule(rule, record):
                continue
            subject = student_iri(record.student_index, ns)
            key = (subject.text, canonical)
            if key in seen:
                continue
            seen.add(key)
            tags.append(Tag(subject, rule.tag.concept_path, rule.tag.value))

    tagged = graph.copy_unfrozen()
    for tag in tags:
        leaf = tag.concept.split(".")[-1]
        tagged.insert(Triple(tag.subject, Iri(ns + TAG_PREDICATE), Iri(ns + leaf)))
    return tags, tagged.freeze()


def report(
    tags: Iterable[Tag],
    taxonomy: Taxonomy,
    namespace: Optional[str] = None,
) -> list[ReportRow]:
    """Per-concept counts with the sorted student index list."""
    grouped: dict[tuple[str, bool], list[Tag]] = {}
    for tag in tags:
        taxonomy.resolve(tag.concept)  # tags must stay taxonomy-safe
        grouped.setdefault((tag.concept, tag.value), []).append(tag)

    rows = []
    for (concept, value), group in sorted(grouped.items()):
        students = []
        for tag in group:
            idx = None
            if namespace is not None:
                idx = student_index(tag.subject, namespace)
            else:
                m = tag.subject.local_name()
                if m.startswith("Student") and m[len("Student"):].isdigit():
                    idx = int(m[len("Student"):])
            if idx is None:
                raise ValueError(f"cannot recover a student index from {tag.subject}")
            students.append(idx)
        students.sort()
        rows.append(ReportRow(concept, value, len(students), tuple(students)))
    return rows


def report_text(rows: Sequence[ReportRow]) -> str:
    """Fixed-width table used by the CLI and written next to the CSV."""
    if not rows:
        return "no tags\n"
    width = max(len(r.concept) for r in rows)
    lines = [f"{'concept'.ljust(width)}  value  count  students"]
    for r in rows:
        ids = " ".join(str(s) for s in r.students)
        lines.append(f"{r.concept.ljust(width)}  {str(r.value).ljust(5)}  {str(r.count).rjust(5)}  {ids}")
    return "\n".join(lines) + "\n"


def report_csv(rows: Sequence[ReportRow]) -> str:
    lines = ["concept,value,count,students"]
    for r in rows:
        ids = " ".join(str(s) for s in r.students)
        lines.append(f"{r.concept},{r.value},{r.count},{ids}")
    return "\n".join(lines) + "\n"


def tags_csv(tags: Sequence[Tag], namespace: str) -> str:
    lines = ["studentIndex,subject,concept,value"]
    for tag in sorted(tags, key=lambda t: (t.concept, student_index(t.subject, namespace) or 0)):
        idx = student_index(tag.subject, namespace)
        lines.append(f"{idx},{tag.subject.text},{tag.concept},{tag.value}")
    return "\n".join(lines) + "\n"


def tags_from_csv(text: str) -> list[Tag]:
    lines = [line for line in text.splitlines() if line.strip()]
    tags = []
    for line in lines[1:]:
        _, subject, concept, value = line.split(",")
        tags.append(Tag(Iri(subject), concept, value == "True"))
    return tags
