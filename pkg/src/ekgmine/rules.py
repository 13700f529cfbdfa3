"""The pattern-rule language: parse, evaluate on records, compile to queries.

A rule names a boolean condition over curated features and the taxonomy
concept it tags:

    RULE strongMemory:
      IF Student.scoreLevel.is(High-Level) AND Student.visitedResources.lt(20)
      THEN TAG[Student, Creativity.Cognitive.strongMemory(True)]

Atom predicates: is(category) on categorical features; eq/lt/le/gt/ge(n) and
between(lo,hi) on the integer counters. Conditions combine atoms with AND,
OR, unary NOT, and parentheses. Keywords are case-insensitive; feature names
accept both the record spellings (visitedResources) and the raw/graph
spellings (VisITedResources).

Every rule evaluates two ways: eval_rule() reads the curated record directly;
compile_rule() translates the same condition into a SELECT query over the
graph. On a graph built from the same records the two routes select the same
students; that agreement is the engine's core correctness property.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Union

from .curation import (
    CuratedRecord,
    FEATURE_ATTRS,
    INTEGER_FEATURES,
    canonical_feature,
    feature_value,
)
from .errors import (
    ParseError,
    UncompilableExprError,
    UnknownFeatureError,
)
from .mapping import MappingSchema
from .query_ast import (
    And,
    BasicGraphPattern,
    Comparison,
    FilterExpr,
    Not,
    Or,
    Query,
    SelectForm,
    TriplePattern,
    Variable,
)
from .taxonomy import Taxonomy
from .terms import Iri, Literal

ATOM_OPS = ("is", "eq", "lt", "le", "gt", "ge", "between")
_COMPARISON_OF = {"eq": "=", "lt": "<", "le": "<=", "gt": ">", "ge": ">="}


# ---------------------------------------------------------------------------
# AST
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Atom:
    dataset: str
    feature: str        # canonical feature name
    op: str
    args: tuple


@dataclass(frozen=True)
class RuleAnd:
    left: "RuleExpr"
    right: "RuleExpr"


@dataclass(frozen=True)
class RuleOr:
    left: "RuleExpr"
    right: "RuleExpr"


@dataclass(frozen=True)
class RuleNot:
    expr: "RuleExpr"


RuleExpr = Union[Atom, RuleAnd, RuleOr, RuleNot]


@dataclass(frozen=True)
class TagSpec:
    dataset: str
    concept_path: str
    value: bool


@dataclass(frozen=True)
class Rule:
    name: str
    condition: RuleExpr
    tag: TagSpec


def expr_features(expr: RuleExpr) -> list[str]:
    """Features referenced by the condition, first-use order, deduplicated."""
    out: list[str] = []

    def walk(node: RuleExpr):
        if isinstance(node, Atom):
            if node.feature not in out:
                out.append(node.feature)
        elif isinstance(node, (RuleAnd, RuleOr)):
            walk(node.left)
            walk(node.right)
        else:
            walk(node.expr)

    walk(expr)
    return out


# ---------------------------------------------------------------------------
# Parsing
# ---------------------------------------------------------------------------

_KEYWORDS = {"RULE", "IF", "THEN", "TAG", "AND", "OR", "NOT"}
_WORD = re.compile(r"[A-Za-z_][A-Za-z0-9_\-]*")


class _Token:
    __slots__ = ("kind", "value", "line", "column")

    def __init__(self, kind, value, line, column):
        self.kind = kind
        self.value = value
        self.line = line
        self.column = column


def _tokenize(text: str) -> list[_Token]:
    tokens = []
    line, col = 1, 1
    i, n = 0, len(text)
    while i < n:
        c = text[i]
        if c == "\n":
            line += 1
            col = 1
            i += 1
            continue
        if c in " \t\r":
            col += 1
            i += 1
            continue
        if c == "#":
            while i < n and text[i] != "\n":
                i += 1
            continue
        sl, sc = line, col
        if c in ".:,()[]":
            tokens.append(_Token(c, c, sl, sc))
            i += 1
            col += 1
            continue
        m = re.match(r"-?[0-9]+", text[i:])
        if m:
            tokens.append(_Token("INT", int(m.group()), sl, sc))
            i += len(m.group())
            col += len(m.group())
            continue
        m = _WORD.match(text, i)
        if m:
            word = m.group()
            upper = word.upper()
            if upper in _KEYWORDS and "-" not in word:
                tokens.append(_Token("KEYWORD", upper, sl, sc))
            else:
                tokens.append(_Token("WORD", word, sl, sc))
            i += len(word)
            col += len(word)
            continue
        raise ParseError(f"unexpected character {c!r}", sl, sc)
    tokens.append(_Token("EOF", None, line, col))
    return tokens


class _RuleParser:
    def __init__(self, text: str, taxonomy: Taxonomy):
        self.tokens = _tokenize(text)
        self.pos = 0
        self.taxonomy = taxonomy

    def peek(self) -> _Token:
        return self.tokens[self.pos]

    def next(self) -> _Token:
        tok = self.tokens[self.pos]
        if tok.kind != "EOF":
            self.pos += 1
        return tok

    def error(self, expected: str, tok=None):
        tok = tok or self.peek()
        raise ParseError(f"expected {expected}", tok.line, tok.column)

    def expect(self, kind: str, expected: str) -> _Token:
        tok = self.next()
        if tok.kind != kind:
            self.error(expected, tok)
        return tok

    def expect_keyword(self, word: str):
        tok = self.next()
        if tok.kind != "KEYWORD" or tok.value != word:
            self.error(f"keyword {word}", tok)

    def parse_rules(self) -> list[Rule]:
        rules = []
        while self.peek().kind != "EOF":
            rules.append(self.parse_rule())
        return rules

    def parse_rule(self) -> Rule:
        self.expect_keyword("RULE")
        name = self.expect("WORD", "a rule name").value
        self.expect(":", "':'")
        self.expect_keyword("IF")
        condition = self.parse_or()
        self.expect_keyword("THEN")
        self.expect_keyword("TAG")
        self.expect("[", "'['")
        dataset = self.expect("WORD", "a dataset name").value
        self.expect(",", "','")
        segments = [self.expect("WORD", "a concept path segment").value]
        while self.peek().kind == ".":
            self.next()
            segments.append(self.expect("WORD", "a concept path segment").value)
        concept_path = ".".join(segments)
        self.expect("(", "'('")
        value_tok = self.expect("WORD", "True or False")
        if value_tok.value.lower() not in ("true", "false"):
            self.error("True or False", value_tok)
        self.expect(")", "')'")
        self.expect("]", "']'")
        # fail fast on misspelled concepts
        self.taxonomy.resolve(concept_path)
        return Rule(name, condition, TagSpec(dataset, concept_path, value_tok.value.lower() == "true"))

    def parse_or(self) -> RuleExpr:
        expr = self.parse_and()
        while self.peek().kind == "KEYWORD" and self.peek().value == "OR":
            self.next()
            expr = RuleOr(expr, self.parse_and())
        return expr

    def parse_and(self) -> RuleExpr:
        expr = self.parse_unary()
        while self.peek().kind == "KEYWORD" and self.peek().value == "AND":
            self.next()
            expr = RuleAnd(expr, self.parse_unary())
        return expr

    def parse_unary(self) -> RuleExpr:
        tok = self.peek()
        if tok.kind == "KEYWORD" and tok.value == "NOT":
            self.next()
            return RuleNot(self.parse_unary())
        if tok.kind == "(":
            self.next()
            expr = self.parse_or()
            self.expect(")", "')'")
            return expr
        return self.parse_atom()

    def parse_atom(self) -> Atom:
        dataset = self.expect("WORD", "a dataset name").value
        self.expect(".", "'.'")
        feature_tok = self.expect("WORD", "a feature name")
        feature = canonical_feature(feature_tok.value)
        if feature is None:
            raise UnknownFeatureError(feature_tok.value, tuple(FEATURE_ATTRS))
        self.expect(".", "'.'")
        op_tok = self.expect("WORD", "a predicate")
        op = op_tok.value
        if op not in ATOM_OPS:
            self.error(f"one of {', '.join(ATOM_OPS)}", op_tok)
        self.expect("(", "'('")
        if op == "is":
            if feature in INTEGER_FEATURES:
                raise ParseError(
                    f"is() applies to categorical features, not {feature!r}",
                    op_tok.line, op_tok.column)
            arg = self.expect("WORD", "a category value").value
            args = (arg,)
        elif op == "between":
            if feature not in INTEGER_FEATURES:
                raise ParseError(
                    f"between() applies to integer features, not {feature!r}",
                    op_tok.line, op_tok.column)
            lo = self.expect("INT", "an integer").value
            self.expect(",", "','")
            hi = self.expect("INT", "an integer").value
            args = (lo, hi)
        else:
            if feature not in INTEGER_FEATURES:
                raise ParseError(
                    f"{op}() applies to integer features, not {feature!r}",
                    op_tok.line, op_tok.column)
            args = (self.expect("INT", "an integer").value,)
        self.expect(")", "')'")
        return Atom(dataset, feature, op, args)


def parse_rule(text: str, taxonomy: Taxonomy) -> Rule:
    """Parse a single rule; unknown features or concepts are rejected."""
    parser = _RuleParser(text, taxonomy)
    rule = parser.parse_rule()
    tok = parser.peek()
    if tok.kind != "EOF":
        raise ParseError("expected end of rule", tok.line, tok.column)
    return rule


def parse_rules(text: str, taxonomy: Taxonomy) -> list[Rule]:
    """Parse a rules file: any number of RULE blocks."""
    return _RuleParser(text, taxonomy).parse_rules()


def print_rule(rule: Rule) -> str:
    """Canonical text; parse_rule(print_rule(r), taxonomy) == r."""
    value = "True" if rule.tag.value else "False"
    return (
        f"RULE {rule.name}: IF {print_expr(rule.condition)} "
        f"THEN TAG[{rule.tag.dataset}, {rule.tag.concept_path}({value})]"
    )


def print_expr(expr: RuleExpr) -> str:
    if isinstance(expr, Atom):
        args = ", ".join(str(a) for a in expr.args)
        return f"{expr.dataset}.{expr.feature}.{expr.op}({args})"
    if isinstance(expr, RuleAnd):
        return f"({print_expr(expr.left)} AND {print_expr(expr.right)})"
    if isinstance(expr, RuleOr):
        return f"({print_expr(expr.left)} OR {print_expr(expr.right)})"
    if isinstance(expr, RuleNot):
        return f"(NOT {print_expr(expr.expr)})"
    raise TypeError(f"unknown rule node {type(expr).__name__}")


# ---------------------------------------------------------------------------
# Direct evaluation over records
# ---------------------------------------------------------------------------

def eval_rule(rule: Rule, record: CuratedRecord) -> bool:
    """Standard boolean semantics over one record's feature values."""
    return _eval_expr(rule.condition, record)


def _eval_expr(expr: RuleExpr, record: CuratedRecord) -> bool:
    if isinstance(expr, Atom):
        return _eval_atom(expr, record)
    if isinstance(expr, RuleAnd):
        return _eval_expr(expr.left, record) and _eval_expr(expr.right, record)
    if isinstance(expr, RuleOr):
        return _eval_expr(expr.left, record) or _eval_expr(expr.right, record)
    return not _eval_expr(expr.expr, record)


def _eval_atom(atom: Atom, record: CuratedRecord) -> bool:
    value = feature_value(record, atom.feature)
    if atom.op == "is":
        return value == atom.args[0]
    if atom.op == "between":
        lo, hi = atom.args
        return lo <= value <= hi
    n = atom.args[0]
    if atom.op == "eq":
        return value == n
    if atom.op == "lt":
        return value < n
    if atom.op == "le":
        return value <= n
    if atom.op == "gt":
        return value > n
    return value >= n  # ge


# ---------------------------------------------------------------------------
# Compilation to a graph query
# ---------------------------------------------------------------------------

STUDENT_VAR = Variable("student")


def compile_rule(rule: Rule, schema: MappingSchema) -> Query:
    """Translate the rule into a SELECT query binding ?student.

    Positive is() atoms in the top-level conjunction become ground triple
    patterns; every other condition becomes a FILTER over variables bound by
    one pattern per referenced feature. NOT never needs a graph absence test
    because each mapped feature is asserted exactly once per student.
    """
    _reject_unmapped_not_disjunctions(rule.condition, schema)
    for feature in expr_features(rule.condition):
        schema.rule_for(feature)  # IncompleteSchemaError on unmapped features

    conjuncts = _flatten_and(rule.condition)
    ground: list[TriplePattern] = []
    filter_exprs: list[FilterExpr] = []
    bound_features: list[str] = []

    for conjunct in conjuncts:
        if isinstance(conjunct, Atom) and conjunct.op == "is":
            ground.append(TriplePattern(
                STUDENT_VAR,
                schema.predicate_iri(conjunct.feature),
                Iri(schema.namespace + conjunct.args[0]),
            ))
        else:
            filter_exprs.append(_to_filter(conjunct, schema, bound_features))

    patterns = ground + [
        TriplePattern(STUDENT_VAR, schema.predicate_iri(f), Variable(f))
        for f in bound_features
    ]
    query = Query(
        form=SelectForm((STUDENT_VAR,), distinct=True),
        where=BasicGraphPattern(tuple(patterns)),
        filters=tuple(filter_exprs),
        order_by=(STUDENT_VAR, "asc"),
        prefixes={schema.prefix: schema.namespace},
    )
    return query.validate()


def _flatten_and(expr: RuleExpr) -> list[RuleExpr]:
    if isinstance(expr, RuleAnd):
        return _flatten_and(expr.left) + _flatten_and(expr.right)
    return [expr]


def _to_filter(expr: RuleExpr, schema: MappingSchema, bound: list[str]) -> FilterExpr:
    if isinstance(expr, Atom):
        if expr.feature not in bound:
            bound.append(expr.feature)
        var = Variable(expr.feature)
        if expr.op == "is":
            return Comparison(var, "=", Iri(schema.namespace + expr.args[0]))
        if expr.op == "between":
            lo, hi = expr.args
            return And(
                Comparison(var, ">=", Literal(lo)),
                Comparison(var, "<=", Literal(hi)),
            )
        return Comparison(var, _COMPARISON_OF[expr.op], Literal(expr.args[0]))
    if isinstance(expr, RuleAnd):
        return And(_to_filter(expr.left, schema, bound), _to_filter(expr.right, schema, bound))
    if isinstance(expr, RuleOr):
        return Or(_to_filter(expr.left, schema, bound), _to_filter(expr.right, schema, bound))
    return Not(_to_filter(expr.expr, schema, bound))


def _reject_unmapped_not_disjunctions(expr: RuleExpr, schema: MappingSchema):
    """NOT over a disjunction mentioning an unmapped feature has no sound
    graph translation; such rules are rejected, not guessed."""
    def contains_or(node: RuleExpr) -> bool:
        if isinstance(node, RuleOr):
            return True
        if isinstance(node, (RuleAnd,)):
            return contains_or(node.left) or contains_or(node.right)
        if isinstance(node, RuleNot):
            return contains_or(node.expr)
        return False

    def walk(node: RuleExpr):
        if isinstance(node, RuleNot):
            if contains_or(node.expr):
                unmapped = [f for f in expr_features(node.expr) if f not in schema.rules]
                if unmapped:
                    raise UncompilableExprError(
                        "NOT over a disjunction referencing unmapped features "
                        f"({', '.join(unmapped)}) cannot compile to a graph query"
                    )
            walk(node.expr)
        elif isinstance(node, (RuleAnd, RuleOr)):
            walk(node.left)
            walk(node.right)

    walk(expr)
