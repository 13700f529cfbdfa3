"""Turtle-subset reader and writer.

The supported grammar (documented in the README and locked by golden tests):

  doc        :=  (prefixDecl | tripleLines)*
  prefixDecl :=  '@prefix' PNAME_NS IRIREF '.'
  tripleLines:=  subject predicate object (';' continuation)* '.'
  continuation := predicate object                # subject carried over
                | subject predicate object        # subject restated

Terms are prefixed names, absolute '<...>' IRIs, bare integers, 'true' /
'false', and double-quoted strings with \\ \" \n \r \t escapes. '#' starts
a comment. Both continuation shapes parse to the same triples; the writer
emits the restated-subject shape, one full triple per line, with ';' between
triples of the same subject and '.' closing each subject group.

Writer ordering is total and byte-deterministic: prefix declarations sorted
by prefix name, subject groups by absolute subject IRI, triples within a
group by predicate IRI then object term order.
"""

from __future__ import annotations

import re
from typing import Optional

from .errors import ParseError, UnknownPrefixError, UnregisteredPrefixError
from .graph import Graph
from .terms import Iri, Literal, Term, Triple, term_key

_PREFIX_NAME = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")
_LOCAL_NAME = re.compile(r"[A-Za-z_][A-Za-z0-9_\-]*")

_ESCAPES = {"\\": "\\\\", '"': '\\"', "\n": "\\n", "\r": "\\r", "\t": "\\t"}
_UNESCAPES = {"\\": "\\", '"': '"', "n": "\n", "r": "\r", "t": "\t"}


# ---------------------------------------------------------------------------
# Serialization
# ---------------------------------------------------------------------------

def _escape_string(value: str) -> str:
    return "".join(_ESCAPES.get(c, c) for c in value)


def format_iri(iri: Iri, prefixes: dict[str, str]) -> str:
    """Prefixed name when a registered base matches, else '<absolute>'.

    The longest matching base wins; the remainder must be a valid local
    name or the IRI is written absolute.
    """
    best: Optional[tuple[str, str]] = None
    for name, base in prefixes.items():
        if iri.text.startswith(base) and (best is None or len(base) > len(best[1])):
            best = (name, base)
    if best is not None:
        local = iri.text[len(best[1]):]
        if local and _LOCAL_NAME.fullmatch(local):
            return f"{best[0]}:{local}"
    return f"<{iri.text}>"


def format_term(term: Term, prefixes: dict[str, str]) -> str:
    if isinstance(term, Iri):
        return format_iri(term, prefixes)
    if isinstance(term.value, bool):
        return "true" if term.value else "false"
    if isinstance(term.value, int):
        return str(term.value)
    return f'"{_escape_string(term.value)}"'


def serialize_turtle(graph: Graph) -> str:
    """Render the graph as Turtle-subset text; byte-deterministic."""
    if not graph.prefixes:
        raise UnregisteredPrefixError(
            "graph has no registered prefixes; register a default prefix first"
        )
    lines = [
        f"@prefix {name}: <{base}> ."
        for name, base in sorted(graph.prefixes.items())
    ]
    lines.append("")

    by_subject: dict[Iri, list[Triple]] = {}
    for t in graph:
        by_subject.setdefault(t.subject, []).append(t)

    for subject in sorted(by_subject, key=lambda s: s.text):
        group = sorted(
            by_subject[subject],
            key=lambda t: (t.predicate.text, term_key(t.object)),
        )
        s_text = format_iri(subject, graph.prefixes)
        for i, t in enumerate(group):
            terminator = ";" if i < len(group) - 1 else "."
            p_text = format_iri(t.predicate, graph.prefixes)
            o_text = format_term(t.object, graph.prefixes)
            lines.append(f"{s_text} {p_text} {o_text} {terminator}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# Parsing
# ---------------------------------------------------------------------------

class _Token:
    __slots__ = ("kind", "value", "line", "column")

    def __init__(self, kind: str, value, line: int, column: int):
        self.kind = kind  # PREFIX, PNAME, PNAME_NS, IRIREF, STRING, INTEGER, BOOLEAN, DOT, SEMI, EOF
        self.value = value
        self.line = line
        self.column = column

    def __repr__(self) -> str:
        return f"Token({self.kind}, {self.value!r})"


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
        start_line, start_col = line, col
        if text.startswith("@prefix", i):
            tokens.append(_Token("PREFIX", "@prefix", start_line, start_col))
            advance(len("@prefix"))
            continue
        if c == ".":
            tokens.append(_Token("DOT", ".", start_line, start_col))
            advance(1)
            continue
        if c == ";":
            tokens.append(_Token("SEMI", ";", start_line, start_col))
            advance(1)
            continue
        if c == "<":
            end = text.find(">", i + 1)
            if end == -1:
                raise ParseError("unterminated IRI reference", start_line, start_col)
            iri_text = text[i + 1 : end]
            if not iri_text or any(ch.isspace() for ch in iri_text):
                raise ParseError("invalid IRI reference", start_line, start_col)
            tokens.append(_Token("IRIREF", iri_text, start_line, start_col))
            advance(end + 1 - i)
            continue
        if c == '"':
            value = []
            j = i + 1
            while True:
                if j >= n or text[j] == "\n":
                    raise ParseError("unterminated string literal", start_line, start_col)
                ch = text[j]
                if ch == "\\":
                    if j + 1 >= n or text[j + 1] not in _UNESCAPES:
                        raise ParseError("unsupported string escape", start_line, start_col)
                    value.append(_UNESCAPES[text[j + 1]])
                    j += 2
                    continue
                if ch == '"':
                    break
                value.append(ch)
                j += 1
            tokens.append(_Token("STRING", "".join(value), start_line, start_col))
            advance(j + 1 - i)
            continue
        m = re.match(r"-?[0-9]+", text[i:])
        if m:
            tokens.append(_Token("INTEGER", int(m.group()), start_line, start_col))
            advance(len(m.group()))
            continue
        m = re.match(r"[A-Za-z_][A-Za-z0-9_]*", text[i:])
        if m:
            word = m.group()
            after = i + len(word)
            if after < n and text[after] == ":":
                # prefixed name: optional local part follows the colon
                lm = _LOCAL_NAME.match(text, after + 1)
                local = lm.group() if lm else ""
                kind = "PNAME" if local else "PNAME_NS"
                tokens.append(_Token(kind, (word, local), start_line, start_col))
                advance(len(word) + 1 + len(local))
                continue
            if word in ("true", "false"):
                tokens.append(_Token("BOOLEAN", word == "true", start_line, start_col))
                advance(len(word))
                continue
            raise ParseError(f"unexpected bare word {word!r}", start_line, start_col)
        raise ParseError(f"unexpected character {c!r}", start_line, start_col)
    tokens.append(_Token("EOF", None, line, col))
    return tokens


_TERM_STARTERS = {"PNAME", "IRIREF", "STRING", "INTEGER", "BOOLEAN"}


class _Parser:
    def __init__(self, tokens: list[_Token]):
        self.tokens = tokens
        self.pos = 0
        self.prefixes: dict[str, str] = {}

    def peek(self, ahead: int = 0) -> _Token:
        return self.tokens[min(self.pos + ahead, len(self.tokens) - 1)]

    def next(self) -> _Token:
        tok = self.tokens[self.pos]
        if tok.kind != "EOF":
            self.pos += 1
        return tok

    def expect(self, kind: str, what: str) -> _Token:
        tok = self.next()
        if tok.kind != kind:
            raise ParseError(f"expected {what}", tok.line, tok.column)
        return tok

    def resolve_pname(self, tok: _Token) -> Iri:
        prefix, local = tok.value
        if prefix not in self.prefixes:
            raise UnknownPrefixError(
                f"undeclared prefix {prefix!r}", tok.line, tok.column
            )
        return Iri(self.prefixes[prefix] + local)

    def parse_term(self) -> Term:
        tok = self.next()
        if tok.kind == "PNAME":
            return self.resolve_pname(tok)
        if tok.kind == "IRIREF":
            return Iri(tok.value)
        if tok.kind == "STRING":
            return Literal(tok.value)
        if tok.kind == "INTEGER":
            return Literal(tok.value)
        if tok.kind == "BOOLEAN":
            return Literal(tok.value)
        raise ParseError("expected an IRI or literal", tok.line, tok.column)

    def parse_iri(self, what: str) -> Iri:
        tok = self.peek()
        term = self.parse_term()
        if not isinstance(term, Iri):
            raise ParseError(f"{what} must be an IRI", tok.line, tok.column)
        return term

    def parse_prefix_decl(self):
        self.expect("PREFIX", "'@prefix'")
        tok = self.next()
        if tok.kind not in ("PNAME_NS", "PNAME"):
            raise ParseError("expected a prefix name ending in ':'", tok.line, tok.column)
        prefix, local = tok.value
        if local:
            raise ParseError("prefix declaration must not carry a local part", tok.line, tok.column)
        iri = self.expect("IRIREF", "an IRI reference")
        self.expect("DOT", "'.'")
        self.prefixes[prefix] = iri.value

    def _continuation_is_full_triple(self) -> bool:
        """After ';', three term tokens before the next ';'/'.'/EOF mean the
        subject is restated; two mean it is carried over."""
        count = 0
        ahead = 0
        while count < 3:
            kind = self.peek(ahead).kind
            if kind not in _TERM_STARTERS:
                break
            count += 1
            ahead += 1
        return count >= 3

    def parse_triple_lines(self, graph: Graph):
        subject = self.parse_iri("subject")
        predicate = self.parse_iri("predicate")
        obj = self.parse_term()
        graph.insert(Triple(subject, predicate, obj))
        while True:
            tok = self.next()
            if tok.kind == "DOT":
                return
            if tok.kind != "SEMI":
                raise ParseError("expected ';' or '.'", tok.line, tok.column)
            if self._continuation_is_full_triple():
                subject = self.parse_iri("subject")
            predicate = self.parse_iri("predicate")
            obj = self.parse_term()
            graph.insert(Triple(subject, predicate, obj))


def parse_turtle(text: str) -> Graph:
    """Parse Turtle-subset text into an unfrozen graph.

    Raises ParseError with a 1-based position for malformed input, and
    UnknownPrefixError for prefixed names whose prefix was never declared.
    """
    parser = _Parser(_tokenize(text))
    graph = Graph()
    while parser.peek().kind != "EOF":
        if parser.peek().kind == "PREFIX":
            parser.parse_prefix_decl()
        else:
            parser.parse_triple_lines(graph)
    graph.prefixes = dict(parser.prefixes)
    return graph
