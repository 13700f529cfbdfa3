"""Feature-to-predicate mapping schema.

A small declarative file decides which curated features become graph triples:
one line per feature with the predicate's local name and the object kind
('int' for integer literals, 'iri' for category IRIs). The bundled default
maps nine features; its predicate spellings copy the source listing verbatim,
original capitalizations included, so exported Turtle is directly comparable.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Union

from .curation import CuratedRecord, INTEGER_FEATURES, canonical_feature, feature_value
from .errors import IncompleteSchemaError, ParseError
from .terms import Iri, Literal, Term

DEFAULT_NAMESPACE = "http://www.example.org/"
DEFAULT_PREFIX = "ns1"

_LOCAL_NAME = re.compile(r"[A-Za-z_][A-Za-z0-9_\-]*")

OBJECT_KINDS = ("int", "iri")


@dataclass(frozen=True)
class FeatureRule:
    feature: str    # canonical feature name
    predicate: str  # local name appended to the namespace
    kind: str       # 'int' or 'iri'


class MappingSchema:
    """Namespace plus one rule per mapped feature."""

    def __init__(
        self,
        rules: list[FeatureRule],
        namespace: str = DEFAULT_NAMESPACE,
        prefix: str = DEFAULT_PREFIX,
    ):
        self.namespace = namespace
        self.prefix = prefix
        self.rules: dict[str, FeatureRule] = {}
        for rule in rules:
            if rule.feature in self.rules:
                raise ParseError(f"duplicate mapping rule for feature {rule.feature!r}")
            self.rules[rule.feature] = rule

    def __len__(self) -> int:
        return len(self.rules)

    def features(self) -> tuple[str, ...]:
        return tuple(self.rules)

    def rule_for(self, feature: str) -> FeatureRule:
        rule = self.rules.get(feature)
        if rule is None:
            raise IncompleteSchemaError(feature)
        return rule

    def predicate_iri(self, feature: str) -> Iri:
        return Iri(self.namespace + self.rule_for(feature).predicate)

    def object_term(self, record: CuratedRecord, feature: str) -> Term:
        rule = self.rule_for(feature)
        value = feature_value(record, feature)
        if rule.kind == "int":
            return Literal(int(value))
        return Iri(self.namespace + str(value))

    def without(self, *features: str) -> "MappingSchema":
        """A reduced schema, e.g. for reproducing a subgraph listing."""
        kept = [r for f, r in self.rules.items() if f not in features]
        return MappingSchema(kept, self.namespace, self.prefix)

    @classmethod
    def parse(
        cls,
        text: str,
        namespace: str = DEFAULT_NAMESPACE,
        prefix: str = DEFAULT_PREFIX,
    ) -> "MappingSchema":
        """Parse 'feature predicate kind' lines; '#' starts a comment."""
        rules = []
        for lineno, raw in enumerate(text.splitlines(), start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.split()
            if len(parts) != 3:
                raise ParseError("expected: <feature> <predicate> <int|iri>", lineno, 1)
            name, predicate, kind = parts
            feature = canonical_feature(name)
            if feature is None:
                raise ParseError(f"unknown feature {name!r}", lineno, 1)
            if not _LOCAL_NAME.fullmatch(predicate):
                raise ParseError(f"invalid predicate local name {predicate!r}", lineno, 1)
            if kind not in OBJECT_KINDS:
                raise ParseError(f"object kind must be one of {OBJECT_KINDS}", lineno, 1)
            if kind == "int" and feature not in INTEGER_FEATURES:
                raise ParseError(f"feature {feature!r} is categorical, not int", lineno, 1)
            if kind == "iri" and feature in INTEGER_FEATURES:
                raise ParseError(f"feature {feature!r} is an integer counter", lineno, 1)
            rules.append(FeatureRule(feature, predicate, kind))
        return cls(rules, namespace, prefix)

    @classmethod
    def load(
        cls,
        path: Union[str, Path],
        namespace: str = DEFAULT_NAMESPACE,
        prefix: str = DEFAULT_PREFIX,
    ) -> "MappingSchema":
        return cls.parse(Path(path).read_text(encoding="utf-8"), namespace, prefix)

    @classmethod
    def default(
        cls,
        namespace: str = DEFAULT_NAMESPACE,
        prefix: str = DEFAULT_PREFIX,
    ) -> "MappingSchema":
        text = resources.files("ekgmine").joinpath("defaults/schema.map").read_text("utf-8")
        return cls.parse(text, namespace, prefix)
