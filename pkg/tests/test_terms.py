import pytest

from ekgmine.terms import Iri, Literal, Triple, term_key


def test_iri_rejects_empty_and_whitespace():
    with pytest.raises(ValueError):
        Iri("")
    with pytest.raises(ValueError):
        Iri("http://x y")


def test_integer_literal_bounds():
    Literal(2**63 - 1)
    Literal(-(2**63))
    with pytest.raises(ValueError):
        Literal(2**63)


def test_term_equality_is_structural():
    assert Iri("http://a/x") == Iri("http://a/x")
    assert Literal(1) != Literal("1")
    assert Literal(True) != Literal(1)  # datatypes differ even though 1 == True
    assert Literal("true") != Literal(True)


def test_triple_requires_iri_subject_and_predicate():
    s, p = Iri("http://a/s"), Iri("http://a/p")
    Triple(s, p, Literal(5))
    with pytest.raises(TypeError):
        Triple(Literal("s"), p, Literal(5))
    with pytest.raises(TypeError):
        Triple(s, Literal("p"), Literal(5))


def test_total_order_iris_before_literals_and_datatype_ranks():
    ordered = sorted(
        [Literal("a"), Literal(3), Literal(False), Iri("http://b"), Iri("http://a")],
        key=term_key,
    )
    assert ordered == [
        Iri("http://a"), Iri("http://b"), Literal(False), Literal(3), Literal("a"),
    ]


def test_local_name():
    assert Iri("http://www.example.org/Student1").local_name() == "Student1"
    assert Iri("http://x/a#frag").local_name() == "frag"
    assert Iri("urn:thing").local_name() == "urn:thing"
