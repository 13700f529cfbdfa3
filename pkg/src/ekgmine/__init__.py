"""Educational knowledge-graph construction, query, and pattern mining.

The pipeline turns a tabular student-activity dataset into an RDF graph,
evaluates a query language over it, and applies a rule language that links
students to concepts in a creativity taxonomy.
"""

from .builder import build_graph, student_index, student_iri
from .curation import (
    CuratedRecord,
    CurationReport,
    RawTable,
    clean,
    load_csv,
    select_features,
)
from .graph import Graph
from .mapping import MappingSchema
from .mining import Tag, apply_rules, report
from .ordinals import OrdinalTable
from .query_eval import eval_ask, eval_bgp, eval_construct, eval_filter, eval_select
from .query_parser import parse_query, print_query
from .rules import Rule, compile_rule, eval_rule, parse_rule, parse_rules, print_rule
from .synth import gen_synthetic
from .taxonomy import Taxonomy, default_taxonomy, load_taxonomy
from .terms import Iri, Literal, Triple
from .turtle import parse_turtle, serialize_turtle

__version__ = "0.1.0"

__all__ = [
    "CuratedRecord",
    "CurationReport",
    "Graph",
    "Iri",
    "Literal",
    "MappingSchema",
    "OrdinalTable",
    "RawTable",
    "Rule",
    "Tag",
    "Taxonomy",
    "Triple",
    "apply_rules",
    "build_graph",
    "clean",
    "compile_rule",
    "default_taxonomy",
    "eval_ask",
    "eval_bgp",
    "eval_construct",
    "eval_filter",
    "eval_rule",
    "eval_select",
    "gen_synthetic",
    "load_csv",
    "load_taxonomy",
    "parse_query",
    "parse_rule",
    "parse_rules",
    "parse_turtle",
    "print_query",
    "print_rule",
    "report",
    "select_features",
    "serialize_turtle",
    "student_index",
    "student_iri",
]
