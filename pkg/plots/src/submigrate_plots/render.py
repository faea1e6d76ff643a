"""Render charts from submigrate experiment CSV output.

The input format is the harness CSV contract: one row per (family, model,
swept value, trial) with greedy and additive utilities and the relative
improvement of greedy over additive (empty when the additive utility is
zero).  Two chart kinds are supported:

- ``improvement-scatter``: relative improvement (in percent) against the
  swept value, one dot per trial.  Rows with a null improvement are dropped
  and counted in a summary line on stderr.  Extreme values are clipped to a
  fixed axis window and the clip count is annotated on the chart.
- ``absolute-utility``: mean greedy and additive utility against the swept
  value, as paired curves.

Rendering is a pure function of the CSV: fixed style, no timestamps, so
identical input produces identical image bytes.  Input files are never
modified.
"""
from __future__ import annotations

import csv
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Sequence, Tuple

import matplotlib

matplotlib.use("Agg")
matplotlib.rcParams["svg.hashsalt"] = "submigrate-plots"

import matplotlib.pyplot as plt

REQUIRED_COLUMNS = ("family", "model", "x", "trial", "seed",
                    "greedy_utility", "additive_utility", "rel_improvement",
                    "greedy_ms", "additive_ms")
KINDS = ("improvement-scatter", "absolute-utility")

# improvement axis window, in percent; dots outside are clipped and counted
CLIP_WINDOW = (-50.0, 200.0)

_STYLE = {
    "figure.figsize": (5.0, 3.4),
    "figure.dpi": 100,
    "font.size": 9,
    "axes.grid": True,
    "grid.alpha": 0.3,
}


@dataclass(frozen=True)
class PlotSpec:
    input_csv: str
    out_path: str
    kind: str = "improvement-scatter"
    facet_by_model: bool = True

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"kind must be one of {KINDS}, got {self.kind!r}")


@dataclass
class RenderSummary:
    """What was written: output files with their dot counts, plus how many
    rows were dropped for having a null improvement."""

    files: List[str] = field(default_factory=list)
    points: Dict[str, int] = field(default_factory=dict)
    dropped_null: int = 0


def load_rows(path: str) -> List[dict]:
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        header = reader.fieldnames or []
        missing = [c for c in REQUIRED_COLUMNS if c not in header]
        if missing:
            raise ValueError(f"{path}: missing required columns {missing}")
        rows = list(reader)
    if not rows:
        raise ValueError(f"{path}: no records")
    return rows


def _x_positions(rows: Sequence[dict]) -> Tuple[List[float], List[str], bool]:
    """Map the swept-value column to plot positions.

    Numeric sweeps keep their values; anything else (e.g. "25/75" pairs)
    becomes categorical positions in first-appearance order.
    """
    raw = [r["x"] for r in rows]
    try:
        return [float(v) for v in raw], [], True
    except ValueError:
        order: List[str] = []
        for v in raw:
            if v not in order:
                order.append(v)
        pos = {v: i for i, v in enumerate(order)}
        return [float(pos[v]) for v in raw], order, False


def _apply_categorical_ticks(ax, labels: List[str]) -> None:
    if labels:
        ax.set_xticks(range(len(labels)))
        ax.set_xticklabels(labels)


def _facet_path(out_path: str, model: str, multi: bool) -> str:
    if not multi:
        return out_path
    p = Path(out_path)
    return str(p.with_name(f"{p.stem}_{model}{p.suffix}"))


def _save(fig, path: str) -> None:
    Path(path).parent.mkdir(parents=True, exist_ok=True)
    if path.endswith(".svg"):
        fig.savefig(path, metadata={"Date": None})
    else:
        fig.savefig(path)
    plt.close(fig)


def _draw_improvement(ax, rows: Sequence[dict]) -> int:
    xs, labels, _ = _x_positions(rows)
    ys = [100.0 * float(r["rel_improvement"]) for r in rows]
    lo, hi = CLIP_WINDOW
    clipped = sum(1 for y in ys if y < lo or y > hi)
    ys = [min(max(y, lo), hi) for y in ys]
    ax.scatter(xs, ys, s=12, alpha=0.7, color="#1f77b4", edgecolors="none")
    ax.axhline(0.0, color="gray", lw=0.8)
    _apply_categorical_ticks(ax, labels)
    ax.set_ylabel("improvement over additive (%)")
    if clipped:
        ax.annotate(f"{clipped} clipped", xy=(0.98, 0.97),
                    xycoords="axes fraction", ha="right", va="top", fontsize=8)
    return len(rows)


def _draw_utility(ax, rows: Sequence[dict]) -> int:
    xs, labels, _ = _x_positions(rows)
    by_x: Dict[float, List[Tuple[float, float]]] = {}
    for x, r in zip(xs, rows):
        by_x.setdefault(x, []).append(
            (float(r["greedy_utility"]), float(r["additive_utility"])))
    pts = sorted(by_x)
    greedy = [sum(g for g, _ in by_x[x]) / len(by_x[x]) for x in pts]
    additive = [sum(a for _, a in by_x[x]) / len(by_x[x]) for x in pts]
    ax.plot(pts, greedy, marker="o", ms=3, label="greedy")
    ax.plot(pts, additive, marker="s", ms=3, label="additive")
    _apply_categorical_ticks(ax, labels)
    ax.set_ylabel("expected employment")
    ax.legend()
    return 2 * len(pts)


def render(spec: PlotSpec) -> RenderSummary:
    """Render one chart per model facet; returns what was written."""
    rows = load_rows(spec.input_csv)
    summary = RenderSummary()

    if spec.kind == "improvement-scatter":
        kept = [r for r in rows if r["rel_improvement"] != ""]
        summary.dropped_null = len(rows) - len(kept)
        if summary.dropped_null:
            print(f"dropped {summary.dropped_null} record(s) with null improvement",
                  file=sys.stderr)
        rows = kept
        if not rows:
            raise ValueError("no records left after dropping null improvements")

    models = sorted({r["model"] for r in rows})
    facets = ([(m, [r for r in rows if r["model"] == m]) for m in models]
              if spec.facet_by_model else [("all", rows)])

    with plt.rc_context(_STYLE):
        for model, facet_rows in facets:
            facet_rows = sorted(facet_rows,
                                key=lambda r: (r["x"], int(r["trial"]), r["seed"]))
            fig, ax = plt.subplots()
            if spec.kind == "improvement-scatter":
                n = _draw_improvement(ax, facet_rows)
            else:
                n = _draw_utility(ax, facet_rows)
            family = facet_rows[0]["family"]
            ax.set_xlabel(family.replace("_", " "))
            ax.set_title(model if spec.facet_by_model else "all models")
            fig.tight_layout()
            path = _facet_path(spec.out_path, model,
                               multi=spec.facet_by_model and len(facets) > 1)
            _save(fig, path)
            summary.files.append(path)
            summary.points[path] = n
    return summary
