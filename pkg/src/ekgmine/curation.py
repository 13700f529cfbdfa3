"""Raw-table ingestion: load the student-activity CSV, clean it, select features.

Cleaning is deliberately conservative: a cell is corrected only when a
canonical alias exists (whitespace trimming, case normalization against the
known vocabularies, numeral canonicalization); otherwise the row is dropped.
Nothing is ever guessed, every action lands in the report, and cleaning the
output again changes nothing.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Union

from .errors import RaggedRowError, SchemaMismatchError

# Canonical raw-file column names. The odd capitalizations are the source
# dataset's own and are preserved so the graph predicates can copy them.
RAW_COLUMNS = (
    "gender",
    "NationalITy",
    "PlaceofBirth",
    "StageID",
    "GradeID",
    "SectionID",
    "Topic",
    "Semester",
    "Relation",
    "raisedhands",
    "VisITedResources",
    "AnnouncementsView",
    "Discussion",
    "ParentAnsweringSurvey",
    "ParentschoolSatisfaction",
    "StudentAbsenceDays",
    "Class",
)

# The class label is derived from overall marks and is counted separately
# from the 16 raw feature columns.
CLASS_LABEL_COLUMN = "Class"

COUNTER_COLUMNS = ("raisedhands", "VisITedResources", "AnnouncementsView", "Discussion")

# Closed vocabularies: an out-of-vocabulary value (after alias normalization)
# drops the row.
CLOSED_VOCABS = {
    "Semester": ("F", "S"),
    "StudentAbsenceDays": ("Under-7", "Above-7"),
    "Class": ("L", "M", "H"),
}

# Known vocabularies: values are case-normalized onto these spellings but
# unknown values pass through trimmed (open world).
KNOWN_VOCABS = {
    "gender": ("M", "F"),
    "StageID": ("lowerlevel", "MiddleSchool", "HighSchool"),
    "Topic": (
        "IT", "Math", "Arabic", "Science", "English", "Quran",
        "Spanish", "French", "History", "Biology", "Chemistry", "Geology",
    ),
    "PlaceofBirth": (
        "KuwaIT", "lebanon", "Egypt", "SaudiArabia", "USA", "Jordan",
        "venzuela", "Iran", "Tunis", "Morocco", "Syria", "Iraq",
        "Palestine", "Lybia",
    ),
}

# Columns the curated record draws on; all must be present after header
# normalization.
REQUIRED_COLUMNS = (
    "gender", "PlaceofBirth", "StageID", "Topic", "Semester",
    "raisedhands", "VisITedResources", "AnnouncementsView", "Discussion",
    "StudentAbsenceDays", "Class",
)

SEMESTER_LEVELS = ("Semester1", "Semester2")
ABSENCE_LEVELS = ("Under-7", "Above-7")
SCORE_LEVELS = ("Low-Level", "Middle-Level", "High-Level")

_SEMESTER_MAP = {"F": "Semester1", "S": "Semester2"}
_SCORE_MAP = {"L": "Low-Level", "M": "Middle-Level", "H": "High-Level"}


@dataclass
class RawTable:
    """A parsed CSV: header names plus rows of raw text cells."""

    header: list[str]
    rows: list[list[str]]

    def column_index(self, name: str) -> int:
        try:
            return self.header.index(name)
        except ValueError:
            raise SchemaMismatchError(f"missing required column {name!r}") from None

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(self.header)
        writer.writerows(self.rows)
        return buf.getvalue()


@dataclass
class CurationIssue:
    row_index: int   # 1-based over data rows
    column: str
    problem: str
    action: str


@dataclass
class CurationReport:
    rows_in: int = 0
    rows_dropped: int = 0
    cells_corrected: int = 0
    issues: list[CurationIssue] = field(default_factory=list)

    @property
    def rows_kept(self) -> int:
        return self.rows_in - self.rows_dropped

    def to_dict(self) -> dict:
        return {
            "rows_in": self.rows_in,
            "rows_kept": self.rows_kept,
            "rows_dropped": self.rows_dropped,
            "cells_corrected": self.cells_corrected,
            "issues": [
                {
                    "row": i.row_index,
                    "column": i.column,
                    "problem": i.problem,
                    "action": i.action,
                }
                for i in self.issues
            ],
        }


@dataclass(frozen=True)
class CuratedRecord:
    """One student's selected features after cleaning.

    student_index is the 1-based position in the source row order; the
    dataset is anonymized, so indexes are the only student identifiers.
    """

    student_index: int
    topic: str
    stage: str
    semester: str
    raised_hands: int
    visited_resources: int
    announcements_view: int
    discussion: int
    absence_days: str
    score_level: str
    gender: str
    place_of_birth: str

    def __post_init__(self):
        if self.student_index < 1:
            raise ValueError("student_index must be >= 1")
        for name in ("raised_hands", "visited_resources", "announcements_view", "discussion"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be non-negative")
        if self.semester not in SEMESTER_LEVELS:
            raise ValueError(f"semester must be one of {SEMESTER_LEVELS}")
        if self.absence_days not in ABSENCE_LEVELS:
            raise ValueError(f"absence_days must be one of {ABSENCE_LEVELS}")
        if self.score_level not in SCORE_LEVELS:
            raise ValueError(f"score_level must be one of {SCORE_LEVELS}")


# Curated-record feature names as rule authors and files spell them, mapped
# to the dataclass attributes.
FEATURE_ATTRS = {
    "topic": "topic",
    "stage": "stage",
    "semester": "semester",
    "raisedHands": "raised_hands",
    "visitedResources": "visited_resources",
    "announcementsView": "announcements_view",
    "discussion": "discussion",
    "absenceDays": "absence_days",
    "scoreLevel": "score_level",
    "gender": "gender",
    "placeOfBirth": "place_of_birth",
}

INTEGER_FEATURES = ("raisedHands", "visitedResources", "announcementsView", "discussion")

# Alternate spellings accepted wherever a feature name is expected: the raw
# column names and the graph predicate names both resolve to the canonical
# feature.
FEATURE_ALIASES = {
    "Topic": "topic",
    "EnrolledIn": "topic",
    "Stage": "stage",
    "StageID": "stage",
    "Semester": "semester",
    "raisedhands": "raisedHands",
    "VisITedResources": "visitedResources",
    "AnnouncementsView": "announcementsView",
    "Discussion": "discussion",
    "StudentAbsenceDays": "absenceDays",
    "Score": "scoreLevel",
    "Class": "scoreLevel",
    "PlaceofBirth": "placeOfBirth",
}


def canonical_feature(name: str) -> Optional[str]:
    if name in FEATURE_ATTRS:
        return name
    return FEATURE_ALIASES.get(name)


def feature_value(record: CuratedRecord, feature: str) -> Union[str, int]:
    return getattr(record, FEATURE_ATTRS[feature])


# ---------------------------------------------------------------------------
# Loading
# ---------------------------------------------------------------------------

def load_csv(path: Union[str, Path]) -> RawTable:
    """Read a comma-separated file with a header row; cells stay raw text.

    Raises OSError when the file cannot be read and RaggedRowError when a
    data row's cell count differs from the header's.
    """
    with open(path, newline="", encoding="utf-8") as handle:
        reader = csv.reader(handle)
        try:
            header = next(reader)
        except StopIteration:
            raise SchemaMismatchError(f"{path}: file is empty, expected a header row") from None
        rows = []
        for index, row in enumerate(reader, start=1):
            if len(row) != len(header):
                raise RaggedRowError(index, len(header), len(row))
            rows.append(row)
    return RawTable(header=header, rows=rows)


def normalize_header(header: list[str]) -> list[str]:
    """Map header spellings onto the canonical raw column names."""
    canonical = {name.lower(): name for name in RAW_COLUMNS}
    return [canonical.get(name.strip().lower(), name.strip()) for name in header]


def feature_column_count(header: list[str]) -> int:
    """Raw feature columns: every column except the class label."""
    normalized = normalize_header(header)
    return len(normalized) - (1 if CLASS_LABEL_COLUMN in normalized else 0)


# ---------------------------------------------------------------------------
# Cleaning
# ---------------------------------------------------------------------------

def _canonicalize_category(cell: str, vocab: tuple[str, ...]) -> Optional[str]:
    lowered = cell.lower()
    for value in vocab:
        if lowered == value.lower():
            return value
    return None


def clean(table: RawTable) -> tuple[RawTable, CurationReport]:
    """Normalize the curated columns; correct via aliases or drop the row.

    Raises SchemaMismatchError when a required column is absent. The output
    table keeps every input column; only the curated columns are rewritten.
    """
    header = normalize_header(table.header)
    missing = [name for name in REQUIRED_COLUMNS if name not in header]
    if missing:
        raise SchemaMismatchError(f"missing required columns: {', '.join(missing)}")

    col = {name: header.index(name) for name in REQUIRED_COLUMNS}
    report = CurationReport(rows_in=len(table.rows))
    kept_rows: list[list[str]] = []

    for row_index, row in enumerate(table.rows, start=1):
        cells = list(row)
        dropped = False

        for name in REQUIRED_COLUMNS:
            idx = col[name]
            raw = cells[idx]
            value = raw.strip()

            if name in COUNTER_COLUMNS:
                try:
                    number = int(value)
                except ValueError:
                    report.issues.append(CurationIssue(
                        row_index, name, f"non-numeric count {raw!r}", "dropped row"))
                    dropped = True
                    break
                if number < 0:
                    report.issues.append(CurationIssue(
                        row_index, name, f"negative count {raw!r}", "dropped row"))
                    dropped = True
                    break
                value = str(number)
            elif name in CLOSED_VOCABS:
                canonical = _canonicalize_category(value, CLOSED_VOCABS[name])
                if canonical is None:
                    report.issues.append(CurationIssue(
                        row_index, name, f"out-of-vocabulary value {raw!r}", "dropped row"))
                    dropped = True
                    break
                value = canonical
            else:
                if not value:
                    report.issues.append(CurationIssue(
                        row_index, name, "empty cell", "dropped row"))
                    dropped = True
                    break
                canonical = _canonicalize_category(value, KNOWN_VOCABS.get(name, ()))
                if canonical is not None:
                    value = canonical

            if value != raw:
                report.cells_corrected += 1
                report.issues.append(CurationIssue(
                    row_index, name, f"non-canonical value {raw!r}", f"corrected to {value!r}"))
                cells[idx] = value

        if dropped:
            report.rows_dropped += 1
        else:
            kept_rows.append(cells)

    return RawTable(header=header, rows=kept_rows), report


# ---------------------------------------------------------------------------
# Feature selection
# ---------------------------------------------------------------------------

def select_features(table: RawTable) -> list[CuratedRecord]:
    """Project the cleaned table onto curated records, one per row in order.

    Student indexes are assigned by row order starting at 1. Semester and
    score-level codes are rewritten to their readable category names
    (F -> Semester1, L/M/H -> Low-/Middle-/High-Level).
    """
    header = normalize_header(table.header)
    missing = [name for name in REQUIRED_COLUMNS if name not in header]
    if missing:
        raise SchemaMismatchError(f"missing required columns: {', '.join(missing)}")
    col = {name: header.index(name) for name in REQUIRED_COLUMNS}

    records = []
    for i, row in enumerate(table.rows, start=1):
        semester_code = row[col["Semester"]]
        score_code = row[col["Class"]]
        if semester_code not in _SEMESTER_MAP:
            raise ValueError(f"row {i}: unclean semester value {semester_code!r}")
        if score_code not in _SCORE_MAP:
            raise ValueError(f"row {i}: unclean class value {score_code!r}")
        records.append(CuratedRecord(
            student_index=i,
            topic=row[col["Topic"]],
            stage=row[col["StageID"]],
            semester=_SEMESTER_MAP[semester_code],
            raised_hands=int(row[col["raisedhands"]]),
            visited_resources=int(row[col["VisITedResources"]]),
            announcements_view=int(row[col["AnnouncementsView"]]),
            discussion=int(row[col["Discussion"]]),
            absence_days=row[col["StudentAbsenceDays"]],
            score_level=_SCORE_MAP[score_code],
            gender=row[col["gender"]],
            place_of_birth=row[col["PlaceofBirth"]],
        ))
    return records


CURATED_HEADER = (
    "studentIndex", "topic", "stage", "semester", "raisedHands",
    "visitedResources", "announcementsView", "discussion", "absenceDays",
    "scoreLevel", "gender", "placeOfBirth",
)


def curated_to_csv(records: list[CuratedRecord]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CURATED_HEADER)
    for r in records:
        writer.writerow([
            r.student_index, r.topic, r.stage, r.semester, r.raised_hands,
            r.visited_resources, r.announcements_view, r.discussion,
            r.absence_days, r.score_level, r.gender, r.place_of_birth,
        ])
    return buf.getvalue()


def gender_counts(records: list[CuratedRecord]) -> dict[str, int]:
    counts: dict[str, int] = {}
    for r in records:
        counts[r.gender] = counts.get(r.gender, 0) + 1
    return dict(sorted(counts.items()))
