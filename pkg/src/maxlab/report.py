"""Deterministic CSV, JSON and SVG output for experiment results.

Floats are written with 15 significant digits; exact rationals also get a
fraction string. Nothing time- or host-dependent goes into any file, so two
runs with the same inputs produce identical bytes.
"""

from __future__ import annotations

import csv
import io
import json
import math
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Optional, Sequence

EXPERIMENT_COLUMNS = ("experiment", "p", "t_or_seed", "value", "bound", "margin", "exact")


def fmt(x) -> str:
    """15 significant digits for numbers, fraction strings left alone, '' for None."""
    if x is None:
        return ""
    if isinstance(x, bool):
        return str(x).lower()
    if isinstance(x, Fraction):
        return format(float(x), ".15g")
    if isinstance(x, (int, float)) or hasattr(x, "__float__"):
        x = float(x)
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        return format(x, ".15g")
    return str(x)


def experiment_row(experiment: str, p=None, t_or_seed=None, value=None, bound=None, margin=None,
                   exact: Optional[Fraction] = None) -> dict:
    return {"experiment": experiment, "p": p, "t_or_seed": t_or_seed, "value": value, "bound": bound,
            "margin": margin, "exact": str(exact) if exact is not None else None}


def to_csv(rows: Sequence[dict], columns: Optional[Sequence[str]] = None) -> str:
    columns = list(columns or (rows[0].keys() if rows else EXPERIMENT_COLUMNS))
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([fmt(row.get(c)) for c in columns])
    return buf.getvalue()


def _jsonable(x):
    if isinstance(x, dict):
        return {k: _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if x is None or isinstance(x, (bool, str)):
        return x
    return fmt(x)


def to_json(payload) -> str:
    return json.dumps(_jsonable(payload), indent=2) + "\n"


def write_text(text: str, path: Path):
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text)


def line_plot(path: Path, series: Iterable[tuple], title: str, xlabel: str, ylabel: str,
              logx: bool = False):
    """SVG line plot of ``(label, xs, ys)`` series with a fixed hash salt and no date stamp."""
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    with matplotlib.rc_context({"svg.hashsalt": "maxlab", "svg.fonttype": "none"}):
        fig, ax = plt.subplots(figsize=(6, 4))
        for label, xs, ys in series:
            ax.plot(xs, ys, label=label, drawstyle="default")
        if logx:
            ax.set_xscale("log")
        ax.set_title(title)
        ax.set_xlabel(xlabel)
        ax.set_ylabel(ylabel)
        ax.legend()
        path.parent.mkdir(parents=True, exist_ok=True)
        fig.savefig(path, format="svg", metadata={"Date": None})
        plt.close(fig)
