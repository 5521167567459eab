"""Evaluation report writers: tab-separated tables, per-fold detail JSON,
and a grouped bar chart of the same numbers."""

from __future__ import annotations

import json
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .evaluation import FoldResult, Metrics

METRIC_NAMES = ("precision", "recall", "accuracy", "f1")


def format_table(rows: list[tuple[str, Metrics]]) -> str:
    lines = ["\t".join(("mask", "precision", "recall", "accuracy", "f1"))]
    for name, m in rows:
        lines.append("\t".join(
            [name] + [f"{getattr(m, col):.4f}" for col in METRIC_NAMES]))
    return "\n".join(lines) + "\n"


def write_table(rows: list[tuple[str, Metrics]], path: str | Path) -> None:
    Path(path).write_text(format_table(rows), encoding="utf-8")


def write_detail(rows: list[tuple[str, Metrics, list[FoldResult]]],
                 config_echo: dict, path: str | Path) -> None:
    doc = {
        "config": config_echo,
        "rows": [
            {
                "mask": name,
                "mean": {c: getattr(mean, c) for c in METRIC_NAMES},
                "folds": [
                    {"fold": fr.fold, "n_test": fr.n_test,
                     **{c: getattr(fr.metrics, c) for c in METRIC_NAMES}}
                    for fr in detail
                ],
            }
            for name, mean, detail in rows
        ],
    }
    Path(path).write_text(json.dumps(doc, indent=2), encoding="utf-8")


def render_metrics_figure(rows: list[tuple[str, Metrics]],
                          path: str | Path, title: str = "") -> None:
    names = [name for name, _ in rows]
    width = 0.2
    x = np.arange(len(names))
    fig, ax = plt.subplots(figsize=(max(6, 1.6 * len(names)), 4))
    for mi, metric in enumerate(METRIC_NAMES):
        vals = [getattr(m, metric) for _, m in rows]
        ax.bar(x + (mi - 1.5) * width, vals, width, label=metric)
    ax.set_xticks(x)
    ax.set_xticklabels(names, rotation=20, ha="right")
    ax.set_ylim(0, 1.05)
    ax.set_ylabel("score")
    if title:
        ax.set_title(title)
    ax.legend(loc="lower right", fontsize="small")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
