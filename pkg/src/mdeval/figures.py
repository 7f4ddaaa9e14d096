"""Render corpus-report summary figures to image files (Agg backend only)."""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .corpus import CorpusReport


def save_report_figures(report: CorpusReport, out_dir: Path | str) -> list[Path]:
    """Write a column-means bar chart and a per-metric distribution plot.

    Returns the written paths. Metrics with no applicable documents are
    left out of both figures.
    """
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    metrics = [m for m in report.metrics if m in report.column_means]
    written: list[Path] = []

    fig, ax = plt.subplots(figsize=(8, 4.5))
    means = [report.column_means[m] * 100 for m in metrics]
    ax.bar(range(len(metrics)), means, color="#4878a8")
    ax.set_xticks(range(len(metrics)))
    ax.set_xticklabels(metrics, rotation=45, ha="right")
    ax.set_ylim(0, 100)
    ax.set_ylabel("score (%)")
    ax.set_title(f"Column means ({report.preset} preset, {report.counts['documents']} docs)")
    if report.average is not None:
        ax.axhline(report.average * 100, color="#a84848", linestyle="--", linewidth=1)
        ax.text(
            0.99,
            report.average * 100,
            f" avg {report.average * 100:.2f}",
            transform=ax.get_yaxis_transform(),
            ha="right",
            va="bottom",
            color="#a84848",
            fontsize=8,
        )
    path = out_dir / "column_means.png"
    fig.savefig(path, dpi=150, bbox_inches="tight")
    plt.close(fig)
    written.append(path)

    fig, ax = plt.subplots(figsize=(8, 4.5))
    data = []
    for m in metrics:
        vals = [
            v * 100
            for score in report.per_document.values()
            if (v := getattr(score, m)) is not None
        ]
        data.append(vals)
    if data:
        ax.boxplot(data, tick_labels=metrics)
        ax.set_xticklabels(metrics, rotation=45, ha="right")
    ax.set_ylim(-2, 102)
    ax.set_ylabel("score (%)")
    ax.set_title("Per-document score distributions")
    path = out_dir / "metric_distributions.png"
    fig.savefig(path, dpi=150, bbox_inches="tight")
    plt.close(fig)
    written.append(path)
    return written
