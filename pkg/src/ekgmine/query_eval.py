"""Query evaluation over a frozen graph.

Basic graph patterns evaluate with a left-deep index-nested-loop join seeded
by the most selective pattern; at the graph sizes this engine targets no
further planning is warranted. The SELECT pipeline is, in order:

  match patterns -> apply filters -> DISTINCT -> ORDER BY -> LIMIT -> project

DISTINCT deduplicates on the projected variables (keeping the first
occurrence), ORDER BY is a stable sort under the documented total order over
terms, and evaluation is pure: concurrent queries need no coordination.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, Sequence, Union

from .errors import TypeMismatchError, UnboundVariableError
from .graph import Graph
from .ordinals import OrdinalTable
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
    SolutionMapping,
    TriplePattern,
    Variable,
)
from .terms import Iri, Literal, Term, Triple, term_key


# ---------------------------------------------------------------------------
# Basic graph patterns
# ---------------------------------------------------------------------------

def _resolve(part, mapping: SolutionMapping) -> Optional[Term]:
    """Constant or bound-variable value; None means wildcard."""
    if isinstance(part, Variable):
        return mapping.get(part.name)
    return part


def _extend(mapping: SolutionMapping, pattern: TriplePattern, triple: Triple):
    out = dict(mapping)
    for part, value in (
        (pattern.subject, triple.subject),
        (pattern.predicate, triple.predicate),
        (pattern.object, triple.object),
    ):
        if isinstance(part, Variable):
            bound = out.get(part.name)
            if bound is None:
                out[part.name] = value
            elif bound != value:
                return None
    return out


def _plan(graph: Graph, patterns: Sequence[TriplePattern]) -> list[TriplePattern]:
    """Order patterns most-selective-first, preferring connected joins."""
    counts = []
    for i, pat in enumerate(patterns):
        s = pat.subject if isinstance(pat.subject, Iri) else None
        p = pat.predicate if isinstance(pat.predicate, Iri) else None
        o = pat.object if not isinstance(pat.object, Variable) else None
        counts.append((graph.match_count(s, p, o), i, pat))
    remaining = sorted(counts)
    ordered: list[TriplePattern] = []
    bound: set[str] = set()
    while remaining:
        # Prefer a pattern already connected to the bound variables so the
        # nested loop stays an index join instead of a cross product.
        pick = None
        for entry in remaining:
            if not ordered or entry[2].variables() & bound:
                pick = entry
                break
        if pick is None:
            pick = remaining[0]
        remaining.remove(pick)
        ordered.append(pick[2])
        bound |= pick[2].variables()
    return ordered


def eval_bgp(graph: Graph, bgp: BasicGraphPattern) -> list[SolutionMapping]:
    """All variable bindings under which every pattern is a graph triple.

    The empty BGP yields one empty mapping (the join identity). Each returned
    mapping binds exactly the variables occurring in the BGP, and the result
    is independent of pattern order.
    """
    solutions: list[SolutionMapping] = [{}]
    for pattern in _plan(graph, bgp.patterns):
        next_solutions: list[SolutionMapping] = []
        for mapping in solutions:
            s = _resolve(pattern.subject, mapping)
            p = _resolve(pattern.predicate, mapping)
            o = _resolve(pattern.object, mapping)
            if p is not None and not isinstance(p, Iri):
                continue  # a literal bound into predicate position matches nothing
            if s is not None and not isinstance(s, Iri):
                continue
            for triple in graph.match(s, p, o):
                extended = _extend(mapping, pattern, triple)
                if extended is not None:
                    next_solutions.append(extended)
        solutions = next_solutions
        if not solutions:
            break
    return solutions


# ---------------------------------------------------------------------------
# Filters
# ---------------------------------------------------------------------------

def _terms_equal(a: Term, b: Term, ordinals: OrdinalTable) -> bool:
    if isinstance(a, Iri) and isinstance(b, Iri):
        return a.text == b.text
    if isinstance(a, Literal) and isinstance(b, Literal) and a.datatype == b.datatype:
        return a.value == b.value
    pair = ordinals.rank_pair(a, b)
    if pair is not None:
        return pair[0] == pair[1]
    raise TypeMismatchError(
        f"cannot test equality between {a} and {b}: incomparable datatypes"
    )


def compare_terms(a: Term, op: str, b: Term, ordinals: OrdinalTable) -> bool:
    """Comparison semantics used by FILTER.

    Equality needs like kinds (or a shared ordinal group). Order comparisons
    work on integer pairs, ordinal-ranked pairs, then plain string pairs;
    anything else (booleans, mixed kinds) raises TypeMismatchError.
    """
    if op == "=":
        return _terms_equal(a, b, ordinals)
    if op == "!=":
        return not _terms_equal(a, b, ordinals)

    if (
        isinstance(a, Literal)
        and isinstance(b, Literal)
        and a.datatype == "integer"
        and b.datatype == "integer"
    ):
        va, vb = a.value, b.value
    else:
        pair = ordinals.rank_pair(a, b)
        if pair is not None:
            va, vb = pair
        elif (
            isinstance(a, Literal)
            and isinstance(b, Literal)
            and a.datatype == "string"
            and b.datatype == "string"
        ):
            va, vb = a.value, b.value
        else:
            raise TypeMismatchError(
                f"cannot order {a} against {b}: incomparable datatypes"
            )
    if op == "<":
        return va < vb
    if op == "<=":
        return va <= vb
    if op == ">":
        return va > vb
    if op == ">=":
        return va >= vb
    raise ValueError(f"unknown comparison operator {op!r}")


def _operand_value(operand, mapping: SolutionMapping) -> Term:
    if isinstance(operand, Variable):
        value = mapping.get(operand.name)
        if value is None:
            raise UnboundVariableError(operand.name, "solution")
        return value
    return operand


def eval_expr(expr: FilterExpr, mapping: SolutionMapping, ordinals: OrdinalTable) -> bool:
    if isinstance(expr, BoolConst):
        return expr.value
    if isinstance(expr, Comparison):
        lhs = _operand_value(expr.lhs, mapping)
        rhs = _operand_value(expr.rhs, mapping)
        return compare_terms(lhs, expr.op, rhs, ordinals)
    if isinstance(expr, And):
        return eval_expr(expr.left, mapping, ordinals) and eval_expr(expr.right, mapping, ordinals)
    if isinstance(expr, Or):
        return eval_expr(expr.left, mapping, ordinals) or eval_expr(expr.right, mapping, ordinals)
    if isinstance(expr, Not):
        return not eval_expr(expr.expr, mapping, ordinals)
    raise TypeError(f"unknown filter node {type(expr).__name__}")


def eval_filter(
    solutions: Iterable[SolutionMapping],
    expr: FilterExpr,
    ordinals: Optional[OrdinalTable] = None,
) -> list[SolutionMapping]:
    """Keep exactly the solutions where the expression evaluates true."""
    table = ordinals if ordinals is not None else OrdinalTable.default()
    return [mapping for mapping in solutions if eval_expr(expr, mapping, table)]


# ---------------------------------------------------------------------------
# Result forms
# ---------------------------------------------------------------------------

@dataclass
class SelectResult:
    """A result table: named columns in projection order, rows of terms."""

    variables: tuple[str, ...]
    rows: list[tuple[Term, ...]]

    def column(self, name: str) -> list[Term]:
        idx = self.variables.index(name)
        return [row[idx] for row in self.rows]

    def __len__(self) -> int:
        return len(self.rows)


def _surviving_solutions(
    graph: Graph, query: Query, ordinals: OrdinalTable
) -> list[SolutionMapping]:
    solutions = eval_bgp(graph, query.where)
    for expr in query.filters:
        solutions = eval_filter(solutions, expr, ordinals)
    return solutions


def eval_select(
    graph: Graph, query: Query, ordinals: Optional[OrdinalTable] = None
) -> SelectResult:
    if not isinstance(query.form, SelectForm):
        raise ValueError("eval_select requires a SELECT query")
    table = ordinals if ordinals is not None else OrdinalTable.default()
    solutions = _surviving_solutions(graph, query, table)

    names = tuple(v.name for v in query.form.projection)
    if query.form.distinct:
        seen = set()
        deduped = []
        for mapping in solutions:
            key = tuple(term_key(mapping[name]) for name in names)
            if key not in seen:
                seen.add(key)
                deduped.append(mapping)
        solutions = deduped
    if query.order_by is not None:
        var, direction = query.order_by
        solutions = sorted(
            solutions,
            key=lambda mapping: term_key(mapping[var.name]),
            reverse=(direction == "desc"),
        )
    if query.limit is not None:
        solutions = solutions[: query.limit]
    rows = [tuple(mapping[name] for name in names) for mapping in solutions]
    return SelectResult(names, rows)


def eval_construct(
    graph: Graph, query: Query, ordinals: Optional[OrdinalTable] = None
) -> Graph:
    """Instantiate the template once per surviving solution; dedup as a graph.

    Instantiations that would be ill-formed (an unbound template variable, or
    a literal landing in subject/predicate position) contribute nothing.
    """
    if not isinstance(query.form, ConstructForm):
        raise ValueError("eval_construct requires a CONSTRUCT query")
    table = ordinals if ordinals is not None else OrdinalTable.default()
    solutions = _surviving_solutions(graph, query, table)

    prefixes = dict(graph.prefixes)
    for name, base in query.prefixes.items():
        prefixes.setdefault(name, base)
    out = Graph(prefixes)
    for mapping in solutions:
        for pattern in query.form.template:
            s = _resolve(pattern.subject, mapping)
            p = _resolve(pattern.predicate, mapping)
            o = _resolve(pattern.object, mapping)
            if s is None or p is None or o is None:
                continue
            if not isinstance(s, Iri) or not isinstance(p, Iri):
                continue
            out.insert(Triple(s, p, o))
    return out.freeze()


def eval_ask(
    graph: Graph, query: Query, ordinals: Optional[OrdinalTable] = None
) -> bool:
    if not isinstance(query.form, AskForm):
        raise ValueError("eval_ask requires an ASK query")
    table = ordinals if ordinals is not None else OrdinalTable.default()
    return bool(_surviving_solutions(graph, query, table))


def eval_query(
    graph: Graph, query: Query, ordinals: Optional[OrdinalTable] = None
) -> Union[SelectResult, Graph, bool]:
    """Dispatch on the query form."""
    if isinstance(query.form, SelectForm):
        return eval_select(graph, query, ordinals)
    if isinstance(query.form, ConstructForm):
        return eval_construct(graph, query, ordinals)
    return eval_ask(graph, query, ordinals)
