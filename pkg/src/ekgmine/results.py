"""Rendering of SELECT result tables: fixed-width text and delimited CSV.

Terms are written in their Turtle surface form (prefixed names where a
registered prefix matches, bare integers and booleans, quoted strings).
Column names are the projection variables, in projection order.
"""

from __future__ import annotations

import csv
import io

from .query_eval import SelectResult
from .turtle import format_term


def result_text(result: SelectResult, prefixes: dict[str, str]) -> str:
    header = [f"?{name}" for name in result.variables]
    rendered = [
        [format_term(term, prefixes) for term in row]
        for row in result.rows
    ]
    widths = [len(h) for h in header]
    for row in rendered:
        for i, cell in enumerate(row):
            widths[i] = max(widths[i], len(cell))
    lines = ["  ".join(h.ljust(w) for h, w in zip(header, widths)).rstrip()]
    lines.append("  ".join("-" * w for w in widths))
    for row in rendered:
        lines.append("  ".join(c.ljust(w) for c, w in zip(row, widths)).rstrip())
    lines.append(f"({len(result.rows)} row{'s' if len(result.rows) != 1 else ''})")
    return "\n".join(lines) + "\n"


def result_csv(result: SelectResult, prefixes: dict[str, str]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(result.variables)
    for row in result.rows:
        writer.writerow([format_term(term, prefixes) for term in row])
    return buf.getvalue()
