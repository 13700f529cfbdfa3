"""Indexed in-memory triple store.

The graph is two-phase: a mutable build phase accepting inserts, then an
immutable query phase entered through freeze(). Frozen graphs are safe to
share across concurrent readers; every query operation is a pure read.
"""

from __future__ import annotations

from typing import Iterable, Iterator, Optional

from .errors import FrozenGraphError
from .terms import Iri, Term, Triple, triple_key


class Graph:
    """A set of triples indexed by subject, predicate, and object."""

    def __init__(self, prefixes: Optional[dict[str, str]] = None):
        self._triples: set[Triple] = set()
        self._by_subject: dict[Iri, set[Triple]] = {}
        self._by_predicate: dict[Iri, set[Triple]] = {}
        self._by_object: dict[Term, set[Triple]] = {}
        self._frozen = False
        self.prefixes: dict[str, str] = dict(prefixes or {})

    @classmethod
    def from_triples(
        cls,
        triples: Iterable[Triple],
        prefixes: Optional[dict[str, str]] = None,
        frozen: bool = True,
    ) -> "Graph":
        g = cls(prefixes)
        for t in triples:
            g.insert(t)
        if frozen:
            g.freeze()
        return g

    @property
    def frozen(self) -> bool:
        return self._frozen

    def freeze(self) -> "Graph":
        """Seal the graph; later inserts raise FrozenGraphError."""
        self._frozen = True
        return self

    def register_prefix(self, name: str, base: str) -> None:
        if self._frozen:
            raise FrozenGraphError("cannot register a prefix on a frozen graph")
        self.prefixes[name] = base

    def insert(self, t: Triple) -> bool:
        """Add a triple; returns True iff it was not already present."""
        if self._frozen:
            raise FrozenGraphError("graph is frozen; build a copy to modify it")
        if t in self._triples:
            return False
        self._triples.add(t)
        self._by_subject.setdefault(t.subject, set()).add(t)
        self._by_predicate.setdefault(t.predicate, set()).add(t)
        self._by_object.setdefault(t.object, set()).add(t)
        return True

    def match(
        self,
        s: Optional[Iri] = None,
        p: Optional[Iri] = None,
        o: Optional[Term] = None,
    ) -> list[Triple]:
        """Triples agreeing with every bound position, in total-order sort.

        None is a wildcard. The result is sorted by (subject, predicate,
        object) so repeated calls are reproducible.
        """
        candidates = None
        # Seed from the smallest applicable index.
        pools = []
        if s is not None:
            pools.append(self._by_subject.get(s, set()))
        if p is not None:
            pools.append(self._by_predicate.get(p, set()))
        if o is not None:
            pools.append(self._by_object.get(o, set()))
        if pools:
            candidates = min(pools, key=len)
        else:
            candidates = self._triples
        out = [
            t
            for t in candidates
            if (s is None or t.subject == s)
            and (p is None or t.predicate == p)
            and (o is None or t.object == o)
        ]
        out.sort(key=triple_key)
        return out

    def match_count(
        self,
        s: Optional[Iri] = None,
        p: Optional[Iri] = None,
        o: Optional[Term] = None,
    ) -> int:
        """Number of matching triples, without materializing the sort."""
        if s is None and p is None and o is None:
            return len(self._triples)
        return len(self.match(s, p, o))

    def copy_unfrozen(self) -> "Graph":
        """A mutable copy carrying the same triples and prefixes."""
        g = Graph(self.prefixes)
        for t in self._triples:
            g.insert(t)
        return g

    def triples_sorted(self) -> list[Triple]:
        return sorted(self._triples, key=triple_key)

    def __len__(self) -> int:
        return len(self._triples)

    def __iter__(self) -> Iterator[Triple]:
        return iter(self._triples)

    def __contains__(self, t: Triple) -> bool:
        return t in self._triples

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return self._triples == other._triples and self.prefixes == other.prefixes

    def __repr__(self) -> str:
        state = "frozen" if self._frozen else "building"
        return f"<Graph {len(self._triples)} triples, {state}>"
