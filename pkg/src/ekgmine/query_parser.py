"""Recursive-descent parser and pretty-printer for the query language.

Surface syntax, with case-insensitive keywords:

  PREFIX ns: <iri>                        (repeatable)
  SELECT [DISTINCT] ?v1 ?v2 ... WHERE { ... } [ORDER BY ...] [LIMIT n]
  CONSTRUCT { t1 . t2 . } WHERE { ... } [ORDER BY ...] [LIMIT n]
  ASK WHERE { ... }

The WHERE block holds triple patterns ('.'-separated, the final dot optional)
and FILTER(expr) constraints. Filter expressions combine comparisons
(=, !=, <, <=, >, >=) with &&, || and ! plus parentheses. DESCRIBE is
recognized and rejected. print_query() emits canonical text such that
parse_query(print_query(q)) == q.
"""

from __future__ import annotations

import re
from typing import Optional, Union

from .errors import ParseError, UnknownPrefixError, UnsupportedFormError
from .query_ast import (
    And,
    AskForm,
    BasicGraphPattern,
    BoolConst,
    Comparison,
    ConstructForm,
    FilterExpr,
    Not,
    Or,
    Query,
    SelectForm,
    TriplePattern,
    Variable,
)
from .terms import Iri, Literal, Term
from .turtle import format_term

_KEYWORDS = {
    "SELECT", "DISTINCT", "CONSTRUCT", "ASK", "DESCRIBE",
    "WHERE", "PREFIX", "FILTER", "ORDER", "BY", "ASC", "DESC", "LIMIT",
}
_LOCAL_NAME = re.compile(r"[A-Za-z_][A-Za-z0-9_\-]*")
_IRIREF = re.compile(r"<[A-Za-z][^\s<>]*>")
_PUNCT = ("&&", "||", "!=", "<=", ">=", "{", "}", "(", ")", ".", "=", "<", ">", "!")


class _Token:
    __slots__ = ("kind", "value", "line", "column")

    def __init__(self, kind: str, value, line: int, column: int):
        self.kind = kind
        self.value = value
        self.line = line
        self.column = column


def _tokenize(text: str) -> list[_Token]:
    tokens: list[_Token] = []
    line, col = 1, 1
    i, n = 0, len(text)

    def advance(count: int):
        nonlocal i, line, col
        for _ in range(count):
            if text[i] == "\n":
                line += 1
                col = 1
            else:
                col += 1
            i += 1

    while i < n:
        c = text[i]
        if c in " \t\r\n":
            advance(1)
            continue
        if c == "#":
            while i < n and text[i] != "\n":
                advance(1)
            continue
        sl, sc = line, col
        if c == "?":
            m = re.match(r"\?([A-Za-z_][A-Za-z0-9_]*)", text[i:])
            if not m:
                raise ParseError("expected a variable name after '?'", sl, sc)
            tokens.append(_Token("VAR", m.group(1), sl, sc))
            advance(len(m.group()))
            continue
        if c == "<":
            m = _IRIREF.match(text, i)
            if m:
                tokens.append(_Token("IRIREF", m.group()[1:-1], sl, sc))
                advance(len(m.group()))
                continue
            # falls through to the '<' / '<=' operators
        if c == '"':
            value = []
            j = i + 1
            while True:
                if j >= n or text[j] == "\n":
                    raise ParseError("unterminated string literal", sl, sc)
                ch = text[j]
                if ch == "\\":
                    unescaped = {"\\": "\\", '"': '"', "n": "\n", "r": "\r", "t": "\t"}
                    if j + 1 >= n or text[j + 1] not in unescaped:
                        raise ParseError("unsupported string escape", sl, sc)
                    value.append(unescaped[text[j + 1]])
                    j += 2
                    continue
                if ch == '"':
                    break
                value.append(ch)
                j += 1
            tokens.append(_Token("STRING", "".join(value), sl, sc))
            advance(j + 1 - i)
            continue
        m = re.match(r"-?[0-9]+", text[i:])
        if m:
            tokens.append(_Token("INTEGER", int(m.group()), sl, sc))
            advance(len(m.group()))
            continue
        m = re.match(r"[A-Za-z_][A-Za-z0-9_]*", text[i:])
        if m:
            word = m.group()
            after = i + len(word)
            if after < n and text[after] == ":":
                lm = _LOCAL_NAME.match(text, after + 1)
                local = lm.group() if lm else ""
                kind = "PNAME" if local else "PNAME_NS"
                tokens.append(_Token(kind, (word, local), sl, sc))
                advance(len(word) + 1 + len(local))
                continue
            if word in ("true", "false"):
                tokens.append(_Token("BOOLEAN", word == "true", sl, sc))
                advance(len(word))
                continue
            if word.upper() in _KEYWORDS:
                tokens.append(_Token("KEYWORD", word.upper(), sl, sc))
                advance(len(word))
                continue
            raise ParseError(f"unexpected bare word {word!r}", sl, sc)
        for punct in _PUNCT:
            if text.startswith(punct, i):
                tokens.append(_Token(punct, punct, sl, sc))
                advance(len(punct))
                break
        else:
            raise ParseError(f"unexpected character {c!r}", sl, sc)
    tokens.append(_Token("EOF", None, line, col))
    return tokens


_TERM_KINDS = {"VAR", "PNAME", "IRIREF", "STRING", "INTEGER", "BOOLEAN"}


class _QueryParser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.pos = 0
        self.prefixes: dict[str, str] = {}

    # --- token plumbing ---

    def peek(self, ahead: int = 0) -> _Token:
        return self.tokens[min(self.pos + ahead, len(self.tokens) - 1)]

    def next(self) -> _Token:
        tok = self.tokens[self.pos]
        if tok.kind != "EOF":
            self.pos += 1
        return tok

    def error(self, expected: str, tok: Optional[_Token] = None):
        tok = tok or self.peek()
        raise ParseError(f"expected {expected}", tok.line, tok.column)

    def accept_keyword(self, word: str) -> bool:
        tok = self.peek()
        if tok.kind == "KEYWORD" and tok.value == word:
            self.next()
            return True
        return False

    def expect_keyword(self, word: str):
        if not self.accept_keyword(word):
            self.error(f"keyword {word}")

    def expect(self, kind: str, expected: str) -> _Token:
        tok = self.next()
        if tok.kind != kind:
            self.error(expected, tok)
        return tok

    # --- grammar ---

    def parse(self) -> Query:
        while self.accept_keyword("PREFIX"):
            tok = self.next()
            if tok.kind not in ("PNAME_NS", "PNAME") or tok.value[1]:
                self.error("a prefix name ending in ':'", tok)
            iri = self.expect("IRIREF", "an IRI reference")
            self.prefixes[tok.value[0]] = iri.value

        tok = self.peek()
        if tok.kind != "KEYWORD":
            self.error("SELECT, CONSTRUCT, or ASK", tok)
        if tok.value == "DESCRIBE":
            raise UnsupportedFormError(
                "DESCRIBE is recognized but not supported", tok.line, tok.column
            )
        if tok.value == "SELECT":
            query = self.parse_select()
        elif tok.value == "CONSTRUCT":
            query = self.parse_construct()
        elif tok.value == "ASK":
            query = self.parse_ask()
        else:
            self.error("SELECT, CONSTRUCT, or ASK", tok)
        end = self.peek()
        if end.kind != "EOF":
            self.error("end of query", end)
        return query.validate()

    def parse_select(self) -> Query:
        self.expect_keyword("SELECT")
        distinct = self.accept_keyword("DISTINCT")
        projection = []
        while self.peek().kind == "VAR":
            projection.append(Variable(self.next().value))
        if not projection:
            self.error("at least one projection variable")
        where, filters = self.parse_where()
        order_by, limit = self.parse_modifiers()
        return Query(
            form=SelectForm(tuple(projection), distinct),
            where=where,
            filters=filters,
            order_by=order_by,
            limit=limit,
            prefixes=dict(self.prefixes),
        )

    def parse_construct(self) -> Query:
        self.expect_keyword("CONSTRUCT")
        template = self.parse_pattern_block(allow_filters=False)[0]
        where, filters = self.parse_where()
        order_by, limit = self.parse_modifiers()
        return Query(
            form=ConstructForm(template.patterns),
            where=where,
            filters=filters,
            order_by=order_by,
            limit=limit,
            prefixes=dict(self.prefixes),
        )

    def parse_ask(self) -> Query:
        self.expect_keyword("ASK")
        where, filters = self.parse_where()
        return Query(
            form=AskForm(),
            where=where,
            filters=filters,
            prefixes=dict(self.prefixes),
        )

    def parse_where(self) -> tuple[BasicGraphPattern, tuple[FilterExpr, ...]]:
        self.expect_keyword("WHERE")
        return self.parse_pattern_block(allow_filters=True)

    def parse_pattern_block(
        self, allow_filters: bool
    ) -> tuple[BasicGraphPattern, tuple[FilterExpr, ...]]:
        self.expect("{", "'{'")
        patterns: list[TriplePattern] = []
        filters: list[FilterExpr] = []
        while True:
            tok = self.peek()
            if tok.kind == "}":
                self.next()
                break
            if tok.kind == "KEYWORD" and tok.value == "FILTER":
                if not allow_filters:
                    self.error("a triple pattern (FILTER not allowed here)", tok)
                self.next()
                self.expect("(", "'('")
                filters.append(self.parse_expr())
                self.expect(")", "')'")
                continue
            if tok.kind in _TERM_KINDS:
                subject = self.parse_pattern_term("subject")
                predicate = self.parse_pattern_term("predicate")
                if not isinstance(predicate, (Iri, Variable)):
                    self.error("an IRI or variable in predicate position", tok)
                obj = self.parse_pattern_term("object")
                patterns.append(TriplePattern(subject, predicate, obj))
                if self.peek().kind == ".":
                    self.next()
                continue
            self.error("a triple pattern, FILTER, or '}'", tok)
        return BasicGraphPattern(tuple(patterns)), tuple(filters)

    def parse_pattern_term(self, position: str) -> Union[Term, Variable]:
        tok = self.next()
        if tok.kind == "VAR":
            return Variable(tok.value)
        if tok.kind == "PNAME":
            prefix, local = tok.value
            if prefix not in self.prefixes:
                raise UnknownPrefixError(f"undeclared prefix {prefix!r}", tok.line, tok.column)
            return Iri(self.prefixes[prefix] + local)
        if tok.kind == "IRIREF":
            return Iri(tok.value)
        if tok.kind == "STRING":
            return Literal(tok.value)
        if tok.kind == "INTEGER":
            return Literal(tok.value)
        if tok.kind == "BOOLEAN":
            return Literal(tok.value)
        self.error(f"a term in {position} position", tok)

    def parse_modifiers(self) -> tuple[Optional[tuple[Variable, str]], Optional[int]]:
        order_by = None
        limit = None
        if self.accept_keyword("ORDER"):
            self.expect_keyword("BY")
            tok = self.peek()
            if tok.kind == "KEYWORD" and tok.value in ("ASC", "DESC"):
                self.next()
                direction = tok.value.lower()
                self.expect("(", "'('")
                var = self.expect("VAR", "a variable")
                self.expect(")", "')'")
                order_by = (Variable(var.value), direction)
            elif tok.kind == "VAR":
                self.next()
                order_by = (Variable(tok.value), "asc")
            else:
                self.error("a variable or ASC(...)/DESC(...)", tok)
        if self.accept_keyword("LIMIT"):
            tok = self.expect("INTEGER", "a non-negative integer")
            if tok.value < 0:
                raise ParseError("LIMIT must be non-negative", tok.line, tok.column)
            limit = tok.value
        return order_by, limit

    # --- filter expressions ---

    def parse_expr(self) -> FilterExpr:
        expr = self.parse_and_expr()
        while self.peek().kind == "||":
            self.next()
            expr = Or(expr, self.parse_and_expr())
        return expr

    def parse_and_expr(self) -> FilterExpr:
        expr = self.parse_not_expr()
        while self.peek().kind == "&&":
            self.next()
            expr = And(expr, self.parse_not_expr())
        return expr

    def parse_not_expr(self) -> FilterExpr:
        if self.peek().kind == "!":
            self.next()
            return Not(self.parse_not_expr())
        return self.parse_primary_expr()

    def parse_primary_expr(self) -> FilterExpr:
        tok = self.peek()
        if tok.kind == "(":
            self.next()
            expr = self.parse_expr()
            self.expect(")", "')'")
            return expr
        if tok.kind == "BOOLEAN" and self.peek(1).kind not in ("=", "!=", "<", "<=", ">", ">="):
            self.next()
            return BoolConst(tok.value)
        lhs = self.parse_operand()
        op_tok = self.next()
        if op_tok.kind not in ("=", "!=", "<", "<=", ">", ">="):
            self.error("a comparison operator", op_tok)
        rhs = self.parse_operand()
        return Comparison(lhs, op_tok.kind, rhs)

    def parse_operand(self) -> Union[Variable, Term]:
        tok = self.peek()
        if tok.kind in _TERM_KINDS:
            return self.parse_pattern_term("operand")
        self.error("a variable or constant", tok)


def parse_query(text: str) -> Query:
    """Parse query text into a validated AST.

    Raises ParseError with position info, UnsupportedFormError for DESCRIBE,
    UnknownPrefixError for undeclared prefixes, and UnboundVariableError when
    projection, filter, template, or order variables never occur in WHERE.
    """
    return _QueryParser(text).parse()


# ---------------------------------------------------------------------------
# Pretty-printer
# ---------------------------------------------------------------------------

def _print_term(term: Union[Term, Variable], prefixes: dict[str, str]) -> str:
    if isinstance(term, Variable):
        return f"?{term.name}"
    return format_term(term, prefixes)


def _print_expr(expr: FilterExpr, prefixes: dict[str, str]) -> str:
    if isinstance(expr, BoolConst):
        return "true" if expr.value else "false"
    if isinstance(expr, Comparison):
        lhs = _print_term(expr.lhs, prefixes)
        rhs = _print_term(expr.rhs, prefixes)
        return f"({lhs} {expr.op} {rhs})"
    if isinstance(expr, And):
        return f"({_print_expr(expr.left, prefixes)} && {_print_expr(expr.right, prefixes)})"
    if isinstance(expr, Or):
        return f"({_print_expr(expr.left, prefixes)} || {_print_expr(expr.right, prefixes)})"
    if isinstance(expr, Not):
        return f"(! {_print_expr(expr.expr, prefixes)})"
    raise TypeError(f"unknown filter node {type(expr).__name__}")


def _print_patterns(patterns, filters, prefixes: dict[str, str]) -> list[str]:
    lines = ["{"]
    for pat in patterns:
        s = _print_term(pat.subject, prefixes)
        p = _print_term(pat.predicate, prefixes)
        o = _print_term(pat.object, prefixes)
        lines.append(f"  {s} {p} {o} .")
    for f in filters:
        lines.append(f"  FILTER ({_print_expr(f, prefixes)})")
    lines.append("}")
    return lines


def print_query(query: Query) -> str:
    """Canonical text form; parse_query(print_query(q)) == q."""
    prefixes = query.prefixes
    lines = [f"PREFIX {name}: <{base}>" for name, base in sorted(prefixes.items())]
    if isinstance(query.form, SelectForm):
        head = "SELECT"
        if query.form.distinct:
            head += " DISTINCT"
        head += " " + " ".join(f"?{v.name}" for v in query.form.projection)
        lines.append(head)
        lines.append("WHERE " + "\n".join(_print_patterns(query.where.patterns, query.filters, prefixes)))
    elif isinstance(query.form, ConstructForm):
        lines.append("CONSTRUCT " + "\n".join(_print_patterns(query.form.template, (), prefixes)))
        lines.append("WHERE " + "\n".join(_print_patterns(query.where.patterns, query.filters, prefixes)))
    else:
        lines.append("ASK")
        lines.append("WHERE " + "\n".join(_print_patterns(query.where.patterns, query.filters, prefixes)))
    if query.order_by is not None:
        var, direction = query.order_by
        if direction == "desc":
            lines.append(f"ORDER BY DESC(?{var.name})")
        else:
            lines.append(f"ORDER BY ?{var.name}")
    if query.limit is not None:
        lines.append(f"LIMIT {query.limit}")
    return "\n".join(lines) + "\n"
