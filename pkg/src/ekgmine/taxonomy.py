"""Creativity knowledge-base taxonomy: a concept tree addressed by dotted paths.

File format, one concept per line:

    Creativity.General Cognitive Thinking Skills alias=Cognitive

Segments are separated by dots (names may contain spaces), '#' starts a
comment, and an optional 'alias=' suffix attaches a short name that resolves
interchangeably with the stated one. Parents may be implied by their
children. The tree is immutable after load and freely shareable.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Optional, Union

from .errors import DuplicatePathError, ParseError, UnknownConceptError


@dataclass
class Concept:
    name: str
    path: str
    alias: Optional[str] = None
    children: list["Concept"] = field(default_factory=list)

    def child(self, segment: str) -> Optional["Concept"]:
        for c in self.children:
            if c.name == segment or (c.alias is not None and c.alias == segment):
                return c
        return None

    def is_leaf(self) -> bool:
        return not self.children


class Taxonomy:
    """A single-rooted concept tree with a path index."""

    def __init__(self, root: Concept):
        self.root = root
        self.index: dict[str, Concept] = {}
        self._reindex(root)

    def _reindex(self, node: Concept):
        self.index[node.path] = node
        for c in node.children:
            self._reindex(c)

    def resolve(self, path: str) -> Concept:
        """Concept at a dotted path; each segment may be a name or an alias."""
        segments = [s.strip() for s in path.split(".")]
        if not segments or not all(segments):
            raise UnknownConceptError(path)
        first = segments[0]
        if first != self.root.name and first != (self.root.alias or ""):
            raise UnknownConceptError(path)
        node = self.root
        for segment in segments[1:]:
            child = node.child(segment)
            if child is None:
                raise UnknownConceptError(path)
            node = child
        return node

    def paths(self) -> list[str]:
        """Every canonical path, in preorder."""
        out: list[str] = []

        def walk(node: Concept):
            out.append(node.path)
            for c in node.children:
                walk(c)

        walk(self.root)
        return out

    def to_text(self) -> str:
        """Printable form that load_taxonomy() reads back into an equal tree."""
        lines = []
        for path in self.paths():
            node = self.index[path]
            lines.append(f"{path} alias={node.alias}" if node.alias else path)
        return "\n".join(lines) + "\n"

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Taxonomy):
            return NotImplemented
        if self.index.keys() != other.index.keys():
            return False
        return all(self.index[p].alias == other.index[p].alias for p in self.index)

    def __len__(self) -> int:
        return len(self.index)


def load_taxonomy(text: str) -> Taxonomy:
    """Build the tree from dotted-path lines.

    Raises ParseError for malformed lines or alias clashes, and
    DuplicatePathError when the same path is stated twice.
    """
    root: Optional[Concept] = None
    stated: set[str] = set()

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        alias: Optional[str] = None
        if " alias=" in line:
            line, alias_part = line.split(" alias=", 1)
            alias = alias_part.strip()
            line = line.strip()
            if not alias:
                raise ParseError("empty alias", lineno, 1)
        segments = [s.strip() for s in line.split(".")]
        if not all(segments):
            raise ParseError("empty path segment", lineno, 1)

        if root is None:
            root = Concept(name=segments[0], path=segments[0])
        elif segments[0] != root.name:
            raise ParseError(
                f"taxonomy must have a single root; got {segments[0]!r} "
                f"after {root.name!r}", lineno, 1,
            )

        node = root
        for segment in segments[1:]:
            existing = next((c for c in node.children if c.name == segment), None)
            if existing is None:
                existing = Concept(name=segment, path=f"{node.path}.{segment}")
                node.children.append(existing)
            node = existing

        if node.path in stated:
            raise DuplicatePathError(f"path stated twice: {node.path}")
        stated.add(node.path)

        if alias is not None:
            if node.alias is not None and node.alias != alias:
                raise ParseError(
                    f"conflicting aliases for {node.path}: "
                    f"{node.alias!r} vs {alias!r}", lineno, 1,
                )
            node.alias = alias

    if root is None:
        raise ParseError("taxonomy file contains no concepts")

    _check_alias_clashes(root)
    return Taxonomy(root)


def _check_alias_clashes(node: Concept):
    seen: dict[str, str] = {}
    for c in node.children:
        for key in filter(None, (c.name, c.alias)):
            if key in seen and seen[key] != c.path:
                raise ParseError(f"ambiguous sibling name or alias {key!r} under {node.path}")
            seen[key] = c.path
        _check_alias_clashes(c)


def load_taxonomy_file(path: Union[str, Path]) -> Taxonomy:
    return load_taxonomy(Path(path).read_text(encoding="utf-8"))


def default_taxonomy() -> Taxonomy:
    """The bundled creativity knowledge base."""
    text = resources.files("ekgmine").joinpath("defaults/taxonomy.txt").read_text("utf-8")
    return load_taxonomy(text)
