import random

import pytest

from ekgmine.errors import FrozenGraphError
from ekgmine.graph import Graph
from ekgmine.terms import Iri, Literal, Triple, triple_key

from helpers import EX, random_graph

S1 = Iri(EX + "s1")
P = Iri(EX + "p")


def t(s, p, o):
    return Triple(Iri(EX + s), Iri(EX + p), o)


def test_insert_into_empty_graph():
    g = Graph()
    assert g.insert(t("s1", "p", Literal("x"))) is True
    assert len(g) == 1


def test_insert_is_idempotent():
    g = Graph()
    triple = t("s1", "p", Literal("x"))
    assert g.insert(triple) is True
    assert g.insert(triple) is False
    assert len(g) == 1


def test_frozen_graph_rejects_insert():
    g = Graph()
    g.insert(t("s1", "p", Literal(1)))
    g.freeze()
    with pytest.raises(FrozenGraphError):
        g.insert(t("s1", "p", Literal(2)))


def test_match_on_empty_graph():
    assert Graph().match() == []


def test_match_bound_positions():
    g = Graph()
    a = t("s1", "p", Literal(1))
    b = t("s1", "q", Literal(2))
    c = t("s2", "p", Literal(1))
    for x in (a, b, c):
        g.insert(x)
    assert g.match(s=Iri(EX + "s1")) == sorted([a, b], key=triple_key)
    assert g.match(p=Iri(EX + "p")) == sorted([a, c], key=triple_key)
    assert g.match(o=Literal(1)) == sorted([a, c], key=triple_key)
    assert g.match(s=Iri(EX + "s1"), p=Iri(EX + "p")) == [a]
    assert g.match(s=Iri(EX + "missing")) == []


def test_match_equals_linear_scan_on_random_graph():
    rng = random.Random(42)
    g = random_graph(rng, 200)
    triples = list(g)
    subjects = {x.subject for x in triples}
    predicates = {x.predicate for x in triples}
    objects = {x.object for x in triples}
    probes = [
        (s, p, o)
        for s in list(sorted(subjects, key=lambda i: i.text))[:4] + [None]
        for p in list(sorted(predicates, key=lambda i: i.text))[:4] + [None]
        for o in sorted(objects, key=str)[:4] + [None]
    ]
    for s, p, o in probes:
        expected = sorted(
            (
                x
                for x in triples
                if (s is None or x.subject == s)
                and (p is None or x.predicate == p)
                and (o is None or x.object == o)
            ),
            key=triple_key,
        )
        assert g.match(s, p, o) == expected


def test_index_coherence_all_eight_combinations():
    rng = random.Random(7)
    g = random_graph(rng, 60)
    for triple in g:
        for use_s in (None, triple.subject):
            for use_p in (None, triple.predicate):
                for use_o in (None, triple.object):
                    assert triple in g.match(use_s, use_p, use_o)


def test_copy_unfrozen_is_independent():
    g = random_graph(random.Random(1), 20)
    copy = g.copy_unfrozen()
    assert not copy.frozen
    extra = t("snew", "pnew", Literal(99))
    copy.insert(extra)
    assert extra not in g
    assert len(copy) == len(g) + 1
