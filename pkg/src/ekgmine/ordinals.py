"""Ordinal ranking of domain categories for filter comparisons.

Letter grades and score levels are categories with a conventional order that
plain string comparison gets wrong ("A" < "B" lexicographically, yet A is the
better grade). An ordinal table maps category keys to ranks inside named
groups; two terms compare by rank when both keys fall in the same group.

The key of a term is its string value for string literals and its local name
for IRIs, so ns1:High-Level and "High-Level" rank identically.
"""

from __future__ import annotations

from typing import Optional

from .terms import Iri, Literal, Term

DEFAULT_GROUPS: dict[str, dict[str, int]] = {
    "grades": {"F": 0, "D": 1, "C": 2, "B": 3, "A": 4},
    "score_levels": {"Low-Level": 0, "Middle-Level": 1, "High-Level": 2},
}


class OrdinalTable:
    """Named groups of category-to-rank mappings."""

    def __init__(self, groups: Optional[dict[str, dict[str, int]]] = None):
        self.groups = {name: dict(ranks) for name, ranks in (groups or {}).items()}
        self._key_to_group: dict[str, str] = {}
        for name, ranks in self.groups.items():
            for key in ranks:
                if key in self._key_to_group and self._key_to_group[key] != name:
                    raise ValueError(
                        f"ordinal key {key!r} appears in groups "
                        f"{self._key_to_group[key]!r} and {name!r}"
                    )
                self._key_to_group[key] = name

    @classmethod
    def default(cls) -> "OrdinalTable":
        return cls(DEFAULT_GROUPS)

    def with_overrides(self, overrides: dict[str, dict[str, int]]) -> "OrdinalTable":
        """New table with whole groups replaced or added."""
        merged = {name: dict(ranks) for name, ranks in self.groups.items()}
        for name, ranks in overrides.items():
            merged[name] = dict(ranks)
        return OrdinalTable(merged)

    @staticmethod
    def key_of(term: Term) -> Optional[str]:
        if isinstance(term, Iri):
            return term.local_name()
        if isinstance(term, Literal) and isinstance(term.value, str):
            return term.value
        return None

    def rank_pair(self, a: Term, b: Term) -> Optional[tuple[int, int]]:
        """Ranks of both terms if their keys share a group, else None."""
        ka, kb = self.key_of(a), self.key_of(b)
        if ka is None or kb is None:
            return None
        ga = self._key_to_group.get(ka)
        if ga is None or self._key_to_group.get(kb) != ga:
            return None
        ranks = self.groups[ga]
        return ranks[ka], ranks[kb]
