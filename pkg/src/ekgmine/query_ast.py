"""Query AST: filtered basic graph patterns with solution modifiers.

Three result forms (SELECT, CONSTRUCT, ASK) over one WHERE block of triple
patterns, a conjunctive list of filter expressions, and optional ORDER BY /
LIMIT. Constructed ASTs are validated so that every projection, filter,
order, and template variable is bound by the WHERE patterns.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Union

from .errors import UnboundVariableError
from .terms import Iri, Literal, Term


@dataclass(frozen=True, slots=True)
class Variable:
    name: str

    def __post_init__(self):
        if not self.name:
            raise ValueError("variable name must be non-empty")

    def __str__(self) -> str:
        return f"?{self.name}"


PatternTerm = Union[Term, Variable]


@dataclass(frozen=True, slots=True)
class TriplePattern:
    subject: PatternTerm
    predicate: Union[Iri, Variable]
    object: PatternTerm

    def variables(self) -> set[str]:
        out = set()
        for part in (self.subject, self.predicate, self.object):
            if isinstance(part, Variable):
                out.add(part.name)
        return out


@dataclass(frozen=True)
class BasicGraphPattern:
    """An ordered sequence of patterns; order is only an evaluation hint."""

    patterns: tuple[TriplePattern, ...] = ()

    def variables(self) -> set[str]:
        out: set[str] = set()
        for p in self.patterns:
            out |= p.variables()
        return out


# --- filter expressions -----------------------------------------------------

COMPARISON_OPS = ("=", "!=", "<=", ">=", "<", ">")


@dataclass(frozen=True)
class Comparison:
    lhs: Union[Variable, Term]
    op: str
    rhs: Union[Variable, Term]

    def __post_init__(self):
        if self.op not in COMPARISON_OPS:
            raise ValueError(f"unknown comparison operator {self.op!r}")


@dataclass(frozen=True)
class And:
    left: "FilterExpr"
    right: "FilterExpr"


@dataclass(frozen=True)
class Or:
    left: "FilterExpr"
    right: "FilterExpr"


@dataclass(frozen=True)
class Not:
    expr: "FilterExpr"


@dataclass(frozen=True)
class BoolConst:
    value: bool


FilterExpr = Union[Comparison, And, Or, Not, BoolConst]


def filter_variables(expr: FilterExpr) -> set[str]:
    if isinstance(expr, Comparison):
        out = set()
        if isinstance(expr.lhs, Variable):
            out.add(expr.lhs.name)
        if isinstance(expr.rhs, Variable):
            out.add(expr.rhs.name)
        return out
    if isinstance(expr, (And, Or)):
        return filter_variables(expr.left) | filter_variables(expr.right)
    if isinstance(expr, Not):
        return filter_variables(expr.expr)
    return set()


# --- result forms -----------------------------------------------------------

@dataclass(frozen=True)
class SelectForm:
    projection: tuple[Variable, ...]
    distinct: bool = False


@dataclass(frozen=True)
class ConstructForm:
    template: tuple[TriplePattern, ...]


@dataclass(frozen=True)
class AskForm:
    pass


QueryForm = Union[SelectForm, ConstructForm, AskForm]

ASC = "asc"
DESC = "desc"


@dataclass(frozen=True)
class Query:
    form: QueryForm
    where: BasicGraphPattern = BasicGraphPattern()
    filters: tuple[FilterExpr, ...] = ()
    order_by: Optional[tuple[Variable, str]] = None
    limit: Optional[int] = None
    prefixes: dict[str, str] = field(default_factory=dict)

    def validate(self) -> "Query":
        """Check that every referenced variable is bound by the WHERE block."""
        bound = self.where.variables()
        if isinstance(self.form, SelectForm):
            for v in self.form.projection:
                if v.name not in bound:
                    raise UnboundVariableError(v.name, "WHERE patterns")
        if isinstance(self.form, ConstructForm):
            for pat in self.form.template:
                for name in pat.variables():
                    if name not in bound:
                        raise UnboundVariableError(name, "WHERE patterns")
        for f in self.filters:
            for name in filter_variables(f):
                if name not in bound:
                    raise UnboundVariableError(name, "WHERE patterns")
        if self.order_by is not None and self.order_by[0].name not in bound:
            raise UnboundVariableError(self.order_by[0].name, "WHERE patterns")
        return self


# Mapping from variable name to term; a BGP solution binds exactly the
# variables occurring in that BGP.
SolutionMapping = dict[str, Term]
