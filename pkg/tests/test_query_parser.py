import random

import pytest

from ekgmine.errors import ParseError, UnboundVariableError, UnknownPrefixError, UnsupportedFormError
from ekgmine.query_ast import (
    And,
    AskForm,
    BasicGraphPattern,
    BoolConst,
    Comparison,
    ConstructForm,
    Not,
    Or,
    Query,
    SelectForm,
    TriplePattern,
    Variable,
)
from ekgmine.query_parser import parse_query, print_query
from ekgmine.terms import Iri, Literal

from helpers import EX

# Shaped like the motivating example: names of students who submitted an
# assessment and got a grade above B, name-ordered, at most five rows.
GRADES_QUERY = """
PREFIX dc: <http://purl.org/dc/elements/1.1/>
PREFIX ex: <http://test.example/>
SELECT ?name
WHERE {
  ?x dc:name ?name .
  ?x ex:submitted ?a .
  ?a ex:grade ?g .
  FILTER (?g > "B")
}
ORDER BY ?name
LIMIT 5
"""


def test_parse_grades_query_shape():
    q = parse_query(GRADES_QUERY)
    assert isinstance(q.form, SelectForm)
    assert q.form.projection == (Variable("name"),)
    assert len(q.where.patterns) == 3
    assert len(q.filters) == 1
    assert q.filters[0] == Comparison(Variable("g"), ">", Literal("B"))
    assert q.order_by == (Variable("name"), "asc")
    assert q.limit == 5


def test_parse_minimal_ask():
    q = parse_query("ASK WHERE { }")
    assert isinstance(q.form, AskForm)
    assert q.where.patterns == ()


def test_keywords_are_case_insensitive():
    q = parse_query("select ?s where { ?s <http://test.example/p> 1 . } limit 2")
    assert isinstance(q.form, SelectForm)
    assert q.limit == 2


def test_distinct_and_desc_order():
    q = parse_query(
        "PREFIX ex: <http://test.example/>\n"
        "SELECT DISTINCT ?s WHERE { ?s ex:p ?v } ORDER BY DESC(?v) LIMIT 3"
    )
    assert q.form.distinct is True
    assert q.order_by == (Variable("v"), "desc")


def test_construct_query():
    q = parse_query(
        "PREFIX ex: <http://test.example/>\n"
        "CONSTRUCT { ?s ex:flagged true . } WHERE { ?s ex:p ?v . FILTER (?v >= 2) }"
    )
    assert isinstance(q.form, ConstructForm)
    assert q.form.template == (
        TriplePattern(Variable("s"), Iri(EX + "flagged"), Literal(True)),
    )


def test_describe_is_rejected():
    with pytest.raises(UnsupportedFormError):
        parse_query("DESCRIBE <http://test.example/s>")


def test_unbound_projection_variable():
    with pytest.raises(UnboundVariableError):
        parse_query("SELECT ?nope WHERE { ?s <http://test.example/p> ?v }")


def test_unbound_filter_variable():
    with pytest.raises(UnboundVariableError):
        parse_query("SELECT ?s WHERE { ?s <http://test.example/p> ?v . FILTER (?other > 1) }")


def test_unbound_order_variable():
    with pytest.raises(UnboundVariableError):
        parse_query("SELECT ?s WHERE { ?s <http://test.example/p> ?v } ORDER BY ?w")


def test_unbound_template_variable():
    with pytest.raises(UnboundVariableError):
        parse_query(
            "CONSTRUCT { ?s <http://test.example/q> ?w } "
            "WHERE { ?s <http://test.example/p> ?v }"
        )


def test_undeclared_prefix():
    with pytest.raises(UnknownPrefixError):
        parse_query("SELECT ?s WHERE { ?s ex:p ?v }")


def test_parse_error_position():
    with pytest.raises(ParseError) as err:
        parse_query("SELECT ?s WHERE { ?s }")
    assert err.value.line == 1
    assert err.value.column >= 20


def test_filter_connectives_and_negation():
    q = parse_query(
        "SELECT ?s WHERE { ?s <http://test.example/p> ?v . "
        "FILTER ((?v > 1 && ?v < 9) || !(?v = 5)) }"
    )
    expr = q.filters[0]
    assert isinstance(expr, Or)
    assert isinstance(expr.left, And)
    assert isinstance(expr.right, Not)


# --- printer round-trip over generated ASTs --------------------------------

_PREFIXES = {"ex": EX, "dc": "http://purl.org/dc/elements/1.1/"}
_VARS = ("s", "p", "o", "v", "w")


def _random_term(rng, allow_var=True, iri_only=False):
    roll = rng.random()
    if allow_var and roll < 0.4:
        return Variable(rng.choice(_VARS))
    if iri_only or roll < 0.7:
        base = rng.choice(list(_PREFIXES.values()))
        return Iri(f"{base}t{rng.randrange(9)}")
    roll = rng.random()
    if roll < 0.4:
        return Literal(rng.randrange(-20, 100))
    if roll < 0.8:
        return Literal(rng.choice(["alpha", "B", "with space", 'q"uote']))
    return Literal(rng.random() < 0.5)


def _random_pattern(rng):
    subject = _random_term(rng)
    if not isinstance(subject, (Variable, Iri)):
        subject = Variable(rng.choice(_VARS))
    predicate = _random_term(rng, iri_only=True)
    return TriplePattern(subject, predicate, _random_term(rng))


def _random_filter(rng, bound, depth=2):
    if depth == 0 or rng.random() < 0.5:
        if rng.random() < 0.1 or not bound:
            return BoolConst(rng.random() < 0.5)
        lhs = Variable(rng.choice(bound))
        op = rng.choice(("=", "!=", "<", "<=", ">", ">="))
        rhs = Variable(rng.choice(bound)) if rng.random() < 0.3 else _random_term(rng, allow_var=False)
        return Comparison(lhs, op, rhs)
    roll = rng.random()
    if roll < 0.4:
        return And(_random_filter(rng, bound, depth - 1), _random_filter(rng, bound, depth - 1))
    if roll < 0.8:
        return Or(_random_filter(rng, bound, depth - 1), _random_filter(rng, bound, depth - 1))
    return Not(_random_filter(rng, bound, depth - 1))


def _random_query(rng) -> Query:
    patterns = tuple(_random_pattern(rng) for _ in range(rng.randrange(1, 4)))
    where = BasicGraphPattern(patterns)
    bound = sorted(where.variables())
    filters = tuple(_random_filter(rng, bound) for _ in range(rng.randrange(0, 3)))
    order_by = None
    limit = rng.randrange(0, 20) if rng.random() < 0.4 else None
    roll = rng.random()
    if roll < 0.6 and bound:
        k = rng.randrange(1, len(bound) + 1)
        projection = tuple(Variable(name) for name in rng.sample(bound, k))
        if rng.random() < 0.5:
            order_by = (Variable(rng.choice(bound)), rng.choice(("asc", "desc")))
        form = SelectForm(projection, distinct=rng.random() < 0.4)
    elif roll < 0.8:
        template = []
        for _ in range(rng.randrange(1, 3)):
            s = Variable(rng.choice(bound)) if bound and rng.random() < 0.6 else Iri(EX + "c")
            o = Variable(rng.choice(bound)) if bound and rng.random() < 0.6 else Literal(1)
            template.append(TriplePattern(s, Iri(EX + "made"), o))
        form = ConstructForm(tuple(template))
    else:
        form = AskForm()
        order_by, limit = None, None
    return Query(
        form=form, where=where, filters=filters,
        order_by=order_by if isinstance(form, SelectForm) else None,
        limit=limit if not isinstance(form, AskForm) else None,
        prefixes=dict(_PREFIXES),
    ).validate()


def test_print_parse_roundtrip_500_generated_queries():
    rng = random.Random(90125)
    for i in range(500):
        query = _random_query(rng)
        printed = print_query(query)
        reparsed = parse_query(printed)
        assert reparsed == query, f"round-trip diverged for instance {i}:\n{printed}"
