"""Deterministic synthetic dataset generator.

Produces raw tables on the real file's schema so that every pipeline stage
can be exercised without the published CSV. Same seed, same bytes.
"""

from __future__ import annotations

import random

from .curation import CLOSED_VOCABS, KNOWN_VOCABS, RAW_COLUMNS, RawTable

_NATIONALITIES = (
    "KW", "lebanon", "Egypt", "SaudiArabia", "USA", "Jordan", "venzuela",
    "Iran", "Tunis", "Morocco", "Syria", "Iraq", "Palestine", "Lybia",
)
_GRADES = ("G-02", "G-04", "G-05", "G-06", "G-07", "G-08", "G-09", "G-10", "G-11", "G-12")
_SECTIONS = ("A", "B", "C")
_RELATIONS = ("Father", "Mum")
_YES_NO = ("Yes", "No")
_SATISFACTION = ("Good", "Bad")


def gen_synthetic(seed: int, n: int) -> RawTable:
    """A raw table of n rows drawn from the closed vocabularies.

    Counters land in [0, 100]. Generation is deterministic for a given seed
    and independent of n for the shared prefix (row k is the same whether 10
    or 480 rows are requested).
    """
    if n < 0:
        raise ValueError("row count must be >= 0")
    rows = []
    for i in range(n):
        rng = random.Random((seed, i))
        rows.append([
            rng.choice(KNOWN_VOCABS["gender"]),
            rng.choice(_NATIONALITIES),
            rng.choice(KNOWN_VOCABS["PlaceofBirth"]),
            rng.choice(KNOWN_VOCABS["StageID"]),
            rng.choice(_GRADES),
            rng.choice(_SECTIONS),
            rng.choice(KNOWN_VOCABS["Topic"]),
            rng.choice(CLOSED_VOCABS["Semester"]),
            rng.choice(_RELATIONS),
            str(rng.randint(0, 100)),
            str(rng.randint(0, 100)),
            str(rng.randint(0, 100)),
            str(rng.randint(0, 100)),
            rng.choice(_YES_NO),
            rng.choice(_SATISFACTION),
            rng.choice(CLOSED_VOCABS["StudentAbsenceDays"]),
            rng.choice(CLOSED_VOCABS["Class"]),
        ])
    return RawTable(header=list(RAW_COLUMNS), rows=rows)
