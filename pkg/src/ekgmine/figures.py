"""Matplotlib rendering for the report path.

Figures are written to files next to the delimited output; the Agg backend
keeps this headless-safe.
"""

from __future__ import annotations

from pathlib import Path
from typing import Sequence, Union

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .mining import ReportRow


def render_pattern_counts(rows: Sequence[ReportRow], path: Union[str, Path]) -> Path:
    """Bar chart of tagged-student counts per concept."""
    path = Path(path)
    fig, ax = plt.subplots(figsize=(7, 4))
    if rows:
        labels = [f"{r.concept.split('.')[-1]}\n({r.value})" for r in rows]
        counts = [r.count for r in rows]
        bars = ax.bar(range(len(rows)), counts, color="#4878a8")
        ax.set_xticks(range(len(rows)))
        ax.set_xticklabels(labels, fontsize=9)
        ax.bar_label(bars, padding=2)
    else:
        ax.text(0.5, 0.5, "no tags", ha="center", va="center", transform=ax.transAxes)
    ax.set_ylabel("students")
    ax.set_title("students per creativity pattern")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path


def render_counter_histograms(
    counters: dict[str, Sequence[int]], path: Union[str, Path]
) -> Path:
    """Histogram per behavioral counter, drawn after ingest."""
    path = Path(path)
    names = list(counters)
    fig, axes = plt.subplots(1, max(len(names), 1), figsize=(3.2 * max(len(names), 1), 3))
    if len(names) <= 1:
        axes = [axes]
    for ax, name in zip(axes, names):
        ax.hist(counters[name], bins=20, color="#4878a8")
        ax.set_title(name, fontsize=9)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path
