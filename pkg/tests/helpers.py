"""Shared test utilities: random-instance generators and independent oracles.

The oracles here deliberately avoid the engine's own indexes, planner, and
pipeline: the BGP oracle is a plain nested-loop scan in given pattern order,
and the record-filter oracle re-reads curated records field by field.
"""

from __future__ import annotations

import random
from typing import Optional

from ekgmine.curation import (
    CLOSED_VOCABS,
    KNOWN_VOCABS,
    CuratedRecord,
    clean,
    select_features,
)
from ekgmine.graph import Graph
from ekgmine.mapping import MappingSchema
from ekgmine.query_ast import BasicGraphPattern, TriplePattern, Variable
from ekgmine.rules import Atom, Rule, RuleAnd, RuleExpr, RuleNot, RuleOr, TagSpec
from ekgmine.synth import gen_synthetic
from ekgmine.terms import Iri, Literal, Term, Triple

EX = "http://test.example/"


# ---------------------------------------------------------------------------
# Random graphs
# ---------------------------------------------------------------------------

def random_term(rng: random.Random) -> Term:
    kind = rng.random()
    if kind < 0.45:
        return Iri(f"{EX}o{rng.randrange(12)}")
    if kind < 0.7:
        return Literal(rng.randrange(-50, 500))
    if kind < 0.9:
        return Literal(rng.choice(["alpha", "beta", "gamma", "x y", 'quo"te', "tab\t"]))
    return Literal(rng.random() < 0.5)


def random_graph(rng: random.Random, n_triples: int, frozen: bool = True) -> Graph:
    g = Graph({"ex": EX})
    while len(g) < n_triples:
        g.insert(Triple(
            Iri(f"{EX}s{rng.randrange(max(2, n_triples // 4))}"),
            Iri(f"{EX}p{rng.randrange(8)}"),
            random_term(rng),
        ))
    if frozen:
        g.freeze()
    return g


def graph_terms(g: Graph) -> list[Term]:
    seen: dict[tuple, Term] = {}
    for t in g:
        for term in (t.subject, t.predicate, t.object):
            seen.setdefault(str(term), term)
    return list(seen.values())


# ---------------------------------------------------------------------------
# Random BGPs and the nested-loop oracle
# ---------------------------------------------------------------------------

_VAR_POOL = ("x", "y", "z", "w")


def random_bgp(rng: random.Random, g: Graph, max_patterns: int = 4) -> BasicGraphPattern:
    triples = list(g)
    patterns = []
    for _ in range(rng.randrange(max_patterns + 1)):
        seed = rng.choice(triples) if triples else Triple(Iri(EX + "s"), Iri(EX + "p"), Literal(1))
        parts = []
        for position, value in (("s", seed.subject), ("p", seed.predicate), ("o", seed.object)):
            roll = rng.random()
            if roll < 0.4:
                parts.append(Variable(rng.choice(_VAR_POOL)))
            elif roll < 0.9:
                parts.append(value)  # a constant that occurs in the graph
            else:
                parts.append(Iri(f"{EX}nohit{rng.randrange(3)}") if position != "o"
                             else random_term(rng))
        patterns.append(TriplePattern(*parts))
    return BasicGraphPattern(tuple(patterns))


def _unify(pattern: TriplePattern, triple: Triple, binding: dict) -> Optional[dict]:
    out = dict(binding)
    for part, value in (
        (pattern.subject, triple.subject),
        (pattern.predicate, triple.predicate),
        (pattern.object, triple.object),
    ):
        if isinstance(part, Variable):
            if part.name in out:
                if out[part.name] != value:
                    return None
            else:
                out[part.name] = value
        elif part != value:
            return None
    return out


def nested_loop_bgp(g: Graph, bgp: BasicGraphPattern) -> list[dict]:
    """Join in the given pattern order by scanning every triple; no indexes."""
    solutions = [{}]
    for pattern in bgp.patterns:
        solutions = [
            extended
            for binding in solutions
            for triple in g
            if (extended := _unify(pattern, triple, binding)) is not None
        ]
    return solutions


def solution_multiset(solutions) -> dict:
    counts: dict = {}
    for mapping in solutions:
        key = frozenset((name, str(term)) for name, term in mapping.items())
        counts[key] = counts.get(key, 0) + 1
    return counts


# ---------------------------------------------------------------------------
# Synthetic records and random rules
# ---------------------------------------------------------------------------

def synthetic_records(seed: int, n: int) -> list[CuratedRecord]:
    cleaned, _ = clean(gen_synthetic(seed, n))
    return select_features(cleaned)


_CATEGORY_VALUES = {
    "topic": KNOWN_VOCABS["Topic"],
    "stage": KNOWN_VOCABS["StageID"],
    "semester": ("Semester1", "Semester2"),
    "absenceDays": CLOSED_VOCABS["StudentAbsenceDays"],
    "scoreLevel": ("Low-Level", "Middle-Level", "High-Level"),
}
_INT_FEATURES = ("raisedHands", "visitedResources", "announcementsView", "discussion")
_INT_OPS = ("eq", "lt", "le", "gt", "ge", "between")


def random_atom(rng: random.Random, schema: MappingSchema) -> Atom:
    feature = rng.choice(schema.features())
    if feature in _INT_FEATURES:
        op = rng.choice(_INT_OPS)
        if op == "between":
            lo = rng.randrange(0, 90)
            return Atom("Student", feature, op, (lo, lo + rng.randrange(0, 40)))
        return Atom("Student", feature, op, (rng.randrange(0, 101),))
    return Atom("Student", feature, "is", (rng.choice(_CATEGORY_VALUES[feature]),))


def random_rule_expr(rng: random.Random, schema: MappingSchema, depth: int = 3) -> RuleExpr:
    if depth == 0 or rng.random() < 0.4:
        return random_atom(rng, schema)
    roll = rng.random()
    if roll < 0.4:
        return RuleAnd(random_rule_expr(rng, schema, depth - 1),
                       random_rule_expr(rng, schema, depth - 1))
    if roll < 0.8:
        return RuleOr(random_rule_expr(rng, schema, depth - 1),
                      random_rule_expr(rng, schema, depth - 1))
    return RuleNot(random_rule_expr(rng, schema, depth - 1))


def random_rule(rng: random.Random, schema: MappingSchema, name: str = "generated") -> Rule:
    return Rule(
        name=name,
        condition=random_rule_expr(rng, schema),
        tag=TagSpec("Student", "Creativity.Cognitive.strongMemory", True),
    )


def record_filter(records, predicate) -> set[int]:
    """Flat spreadsheet-style filter: the independent record-level oracle."""
    return {r.student_index for r in records if predicate(r)}
