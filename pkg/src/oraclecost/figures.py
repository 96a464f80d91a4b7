"""Figure rendering for the command-line report path.

Every subcommand that writes a report also renders one PNG beside it.
Figures use the Agg backend, a fixed dpi, and fixed file metadata so
rendering never depends on the display environment.  The JSON and CSV
reports remain the canonical outputs; figures are a reading aid, and
the determinism contract for reports does not extend to PNG bytes.
"""

from __future__ import annotations

from pathlib import Path
from typing import Mapping, Sequence

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .reports import TOOL_NAME

FIGURE_DPI = 150


def _save(fig, path: Path) -> Path:
    """Write one PNG with fixed metadata and close the figure."""
    path.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(path, dpi=FIGURE_DPI, metadata={"Software": TOOL_NAME})
    plt.close(fig)
    return path


def curves_figure(
    x: Sequence[float],
    curves: Mapping[str, Sequence[float]],
    *,
    xlabel: str,
    ylabel: str,
    title: str,
    path: Path,
    logx: bool = False,
    logy: bool = False,
) -> Path:
    """One or more labeled curves over a shared x axis."""
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    for label, values in curves.items():
        ax.plot(np.asarray(x, dtype=float), np.asarray(values, dtype=float),
                marker="o", markersize=3.5, linewidth=1.2, label=label)
    if logx:
        ax.set_xscale("log")
    if logy:
        ax.set_yscale("log")
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    ax.set_title(title)
    if len(curves) > 1:
        ax.legend()
    ax.grid(True, which="both", alpha=0.3)
    fig.tight_layout()
    return _save(fig, path)


def bar_figure(
    labels: Sequence[str],
    values: Sequence[float],
    *,
    ylabel: str,
    title: str,
    path: Path,
) -> Path:
    """Labeled bar chart, one bar per category."""
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    positions = np.arange(len(labels))
    ax.bar(positions, np.asarray(values, dtype=float), width=0.6)
    ax.set_xticks(positions)
    ax.set_xticklabels(labels)
    ax.set_ylabel(ylabel)
    ax.set_title(title)
    ax.grid(True, axis="y", alpha=0.3)
    fig.tight_layout()
    return _save(fig, path)
