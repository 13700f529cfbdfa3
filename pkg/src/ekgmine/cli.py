"""Command-line pipeline: ingest -> build -> query/mine -> report.

Subcommands:

  ingest         clean the raw CSV, select features, write curated data
  build          construct the knowledge graph and export Turtle
  query FILE     evaluate a query file against the graph
  mine           apply pattern rules, tag the graph, write the report
  report         re-render report artifacts from a saved tags.csv
  gen-synthetic  write a deterministic synthetic raw CSV

Configuration comes from an optional JSON file (--config) with flag
overrides; flags win. Human-readable output goes to stdout, artifacts to the
output directory only, written atomically. Exit codes: 0 success, 1 usage
error, 2 data or parse error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Optional, Sequence

from . import builder, curation, figures, mining, results, rules as rules_mod, synth, turtle
from .errors import EkgError
from .graph import Graph
from .mapping import DEFAULT_NAMESPACE, DEFAULT_PREFIX, MappingSchema
from .ordinals import OrdinalTable
from .query_ast import AskForm, ConstructForm, SelectForm
from .query_eval import eval_query
from .query_parser import parse_query
from .taxonomy import Taxonomy, default_taxonomy, load_taxonomy_file


class UsageError(Exception):
    """Bad invocation: unknown flags, malformed config, missing files."""


@dataclass
class PipelineConfig:
    input: Optional[Path] = None
    taxonomy: Optional[Path] = None
    rules: Optional[Path] = None
    schema: Optional[Path] = None
    namespace: str = DEFAULT_NAMESPACE
    prefix: str = DEFAULT_PREFIX
    out: Path = Path("out")
    ordinals: dict = field(default_factory=dict)
    synthetic: Optional[tuple[int, int]] = None

    @classmethod
    def load(cls, path: Optional[Path], args: argparse.Namespace) -> "PipelineConfig":
        config = cls()
        if path is not None:
            if not path.exists():
                raise UsageError(f"config file not found: {path}")
            try:
                raw = json.loads(path.read_text(encoding="utf-8"))
            except json.JSONDecodeError as exc:
                raise UsageError(f"config file is not valid JSON: {exc}") from exc
            if not isinstance(raw, dict):
                raise UsageError("config file must hold a JSON object")
            known = {"input", "taxonomy", "rules", "schema", "namespace",
                     "prefix", "out", "ordinals", "synthetic"}
            unknown = set(raw) - known
            if unknown:
                raise UsageError(f"unknown config keys: {', '.join(sorted(unknown))}")
            for key in ("input", "taxonomy", "rules", "schema", "out"):
                if raw.get(key) is not None:
                    setattr(config, key, Path(raw[key]))
            if raw.get("namespace"):
                config.namespace = raw["namespace"]
            if raw.get("prefix"):
                config.prefix = raw["prefix"]
            if raw.get("ordinals"):
                config.ordinals = raw["ordinals"]
            if raw.get("synthetic"):
                spec = raw["synthetic"]
                try:
                    config.synthetic = (int(spec["seed"]), int(spec["n"]))
                except (TypeError, KeyError, ValueError) as exc:
                    raise UsageError('config "synthetic" must be {"seed": int, "n": int}') from exc

        # flags override the file
        for key in ("input", "taxonomy", "rules", "schema", "out"):
            value = getattr(args, key.replace("-", "_"), None)
            if value is not None:
                setattr(config, key, Path(value))
        if getattr(args, "namespace", None):
            config.namespace = args.namespace
        if getattr(args, "prefix", None):
            config.prefix = args.prefix
        if getattr(args, "synthetic", None):
            config.synthetic = _parse_synthetic_flag(args.synthetic)
        config.validate()
        return config

    def validate(self):
        if not self.namespace or any(c.isspace() for c in self.namespace) or ":" not in self.namespace:
            raise UsageError(f"namespace is not a valid IRI: {self.namespace!r}")
        for name in ("input", "taxonomy", "rules", "schema"):
            path = getattr(self, name)
            if path is not None and not Path(path).exists():
                raise UsageError(f"{name} path not found: {path}")

    # --- resolved pipeline pieces ---

    def ordinal_table(self) -> OrdinalTable:
        table = OrdinalTable.default()
        if self.ordinals:
            table = table.with_overrides(self.ordinals)
        return table

    def load_taxonomy(self) -> Taxonomy:
        if self.taxonomy is not None:
            return load_taxonomy_file(self.taxonomy)
        return default_taxonomy()

    def load_schema(self) -> MappingSchema:
        if self.schema is not None:
            return MappingSchema.load(self.schema, self.namespace, self.prefix)
        return MappingSchema.default(self.namespace, self.prefix)

    def load_rules(self, taxonomy: Taxonomy) -> list[rules_mod.Rule]:
        if self.rules is not None:
            text = Path(self.rules).read_text(encoding="utf-8")
        else:
            text = resources.files("ekgmine").joinpath("defaults/rules.rules").read_text("utf-8")
        return rules_mod.parse_rules(text, taxonomy)

    def raw_table(self) -> curation.RawTable:
        if self.synthetic is not None:
            seed, n = self.synthetic
            return synth.gen_synthetic(seed, n)
        if self.input is None:
            raise UsageError("no input: pass --input CSV or --synthetic seed,n")
        return curation.load_csv(self.input)


def _parse_synthetic_flag(value: str) -> tuple[int, int]:
    try:
        seed_text, n_text = value.split(",")
        return int(seed_text), int(n_text)
    except ValueError as exc:
        raise UsageError(f"--synthetic wants 'seed,n', got {value!r}") from exc


def _write_atomic(path: Path, text: str):
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_suffix(path.suffix + ".tmp")
    tmp.write_text(text, encoding="utf-8")
    os.replace(tmp, path)


def _curate(config: PipelineConfig):
    raw = config.raw_table()
    cleaned, report = curation.clean(raw)
    records = curation.select_features(cleaned)
    return raw, cleaned, report, records


def _load_graph(config: PipelineConfig):
    """Graph plus (possibly empty) records; .ttl inputs skip the pipeline."""
    if config.synthetic is None and config.input is not None and config.input.suffix == ".ttl":
        graph = turtle.parse_turtle(config.input.read_text(encoding="utf-8"))
        return graph.freeze(), None
    _, _, _, records = _curate(config)
    return builder.build_graph(records, config.load_schema()), records


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------

def cmd_ingest(config: PipelineConfig) -> int:
    raw, _, report, records = _curate(config)
    summary = {
        "rows_in": report.rows_in,
        "raw_feature_columns": curation.feature_column_count(raw.header),
        "total_columns": len(raw.header),
        "gender_counts": curation.gender_counts(records),
        **report.to_dict(),
    }
    _write_atomic(config.out / "curated.csv", curation.curated_to_csv(records))
    _write_atomic(
        config.out / "ingest_report.json",
        json.dumps(summary, indent=2, sort_keys=True) + "\n",
    )
    counters = {
        "raisedHands": [r.raised_hands for r in records],
        "visitedResources": [r.visited_resources for r in records],
        "announcementsView": [r.announcements_view for r in records],
        "discussion": [r.discussion for r in records],
    }
    config.out.mkdir(parents=True, exist_ok=True)
    figures.render_counter_histograms(counters, config.out / "counters.png")

    print(f"{report.rows_in} rows in")
    print(f"{summary['raw_feature_columns']} raw feature columns "
          f"({summary['total_columns']} total with the class label)")
    print(f"{report.rows_dropped} rows dropped, {report.cells_corrected} cells corrected")
    genders = " ".join(f"{k}={v}" for k, v in summary["gender_counts"].items())
    print(f"gender counts: {genders}")
    print(f"wrote {config.out / 'curated.csv'}")
    return 0


def cmd_build(config: PipelineConfig) -> int:
    _, _, _, records = _curate(config)
    graph = builder.build_graph(records, config.load_schema())
    _write_atomic(config.out / "graph.ttl", turtle.serialize_turtle(graph))
    print(f"built graph: {len(graph)} triples from {len(records)} records")
    print(f"wrote {config.out / 'graph.ttl'}")
    return 0


def cmd_query(config: PipelineConfig, query_path: Path) -> int:
    if not query_path.exists():
        raise UsageError(f"query file not found: {query_path}")
    query = parse_query(query_path.read_text(encoding="utf-8"))
    graph, _ = _load_graph(config)
    ordinals = config.ordinal_table()
    outcome = eval_query(graph, query, ordinals)

    if isinstance(query.form, SelectForm):
        prefixes = dict(graph.prefixes)
        for name, base in query.prefixes.items():
            prefixes.setdefault(name, base)
        text = results.result_text(outcome, prefixes)
        _write_atomic(config.out / "results.txt", text)
        _write_atomic(config.out / "results.csv", results.result_csv(outcome, prefixes))
        print(text, end="")
    elif isinstance(query.form, ConstructForm):
        _write_atomic(config.out / "constructed.ttl", turtle.serialize_turtle(outcome))
        print(f"constructed graph: {len(outcome)} triples")
        print(f"wrote {config.out / 'constructed.ttl'}")
    else:
        assert isinstance(query.form, AskForm)
        print("true" if outcome else "false")
    return 0


def cmd_mine(config: PipelineConfig) -> int:
    _, _, _, records = _curate(config)
    schema = config.load_schema()
    graph = builder.build_graph(records, schema)
    taxonomy = config.load_taxonomy()
    ruleset = config.load_rules(taxonomy)
    tags, tagged = mining.apply_rules(graph, records, ruleset, taxonomy, config.namespace)
    rows = mining.report(tags, taxonomy, config.namespace)

    _write_atomic(config.out / "tags.csv", mining.tags_csv(tags, config.namespace))
    _write_atomic(config.out / "tagged.ttl", turtle.serialize_turtle(tagged))
    _write_report(config, rows)
    print(mining.report_text(rows), end="")
    print(f"wrote {config.out / 'tags.csv'}")
    return 0


def cmd_report(config: PipelineConfig, tags_path: Optional[Path]) -> int:
    tags_path = tags_path or (config.out / "tags.csv")
    if not tags_path.exists():
        raise UsageError(f"tags file not found: {tags_path} (run mine first)")
    tags = mining.tags_from_csv(tags_path.read_text(encoding="utf-8"))
    taxonomy = config.load_taxonomy()
    rows = mining.report(tags, taxonomy, config.namespace)
    _write_report(config, rows)
    print(mining.report_text(rows), end="")
    return 0


def _write_report(config: PipelineConfig, rows):
    _write_atomic(config.out / "report.txt", mining.report_text(rows))
    _write_atomic(config.out / "report.csv", mining.report_csv(rows))
    config.out.mkdir(parents=True, exist_ok=True)
    figures.render_pattern_counts(rows, config.out / "report.png")


def cmd_gen_synthetic(config: PipelineConfig) -> int:
    if config.synthetic is None:
        raise UsageError("gen-synthetic needs --synthetic seed,n")
    seed, n = config.synthetic
    table = synth.gen_synthetic(seed, n)
    _write_atomic(config.out / "synthetic.csv", table.to_csv())
    print(f"wrote {n} synthetic rows (seed {seed}) to {config.out / 'synthetic.csv'}")
    return 0


# ---------------------------------------------------------------------------
# Entry point
# ---------------------------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):  # usage errors exit 1, not argparse's 2
        raise UsageError(message)


def _build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="ekgmine", description=__doc__,
                     formatter_class=argparse.RawDescriptionHelpFormatter)
    parser.add_argument("--config", type=Path, help="JSON config file")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p):
        p.add_argument("--input", type=Path, help="raw CSV (or .ttl for query)")
        p.add_argument("--taxonomy", type=Path, help="taxonomy file")
        p.add_argument("--rules", type=Path, help="rules file")
        p.add_argument("--schema", type=Path, help="mapping schema file")
        p.add_argument("--out", type=Path, help="output directory (default: out)")
        p.add_argument("--namespace", help=f"graph namespace IRI (default: {DEFAULT_NAMESPACE})")
        p.add_argument("--prefix", help=f"namespace prefix (default: {DEFAULT_PREFIX})")
        p.add_argument("--synthetic", metavar="SEED,N",
                       help="use generated data instead of --input")

    add_common(sub.add_parser("ingest", help="clean the CSV and select features"))
    add_common(sub.add_parser("build", help="build the graph and export Turtle"))
    query_parser = sub.add_parser("query", help="evaluate a query file")
    query_parser.add_argument("query_file", type=Path)
    add_common(query_parser)
    add_common(sub.add_parser("mine", help="apply rules and emit tags + report"))
    report_parser = sub.add_parser("report", help="re-render the report from tags.csv")
    report_parser.add_argument("--tags", type=Path, help="tags.csv path (default: OUT/tags.csv)")
    add_common(report_parser)
    add_common(sub.add_parser("gen-synthetic", help="write a synthetic raw CSV"))
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        config = PipelineConfig.load(args.config, args)
        if args.command == "ingest":
            return cmd_ingest(config)
        if args.command == "build":
            return cmd_build(config)
        if args.command == "query":
            return cmd_query(config, args.query_file)
        if args.command == "mine":
            return cmd_mine(config)
        if args.command == "report":
            return cmd_report(config, args.tags)
        if args.command == "gen-synthetic":
            return cmd_gen_synthetic(config)
        raise UsageError(f"unknown command {args.command!r}")
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    except (EkgError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
