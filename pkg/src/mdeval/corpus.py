"""Directory-level harness: pair files by stem, score, aggregate, emit.

Results are independent of worker count and directory enumeration order;
documents are processed and reported in sorted doc-id order.
"""

from __future__ import annotations

import csv
import io
import json
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path

from .scoring import (
    METRIC_NAMES,
    PRESETS,
    DocumentScore,
    ScoringConfig,
    score_document,
    zero_score_for,
)

WORKERS_ENV = "MDEVAL_WORKERS"
FORMATS = ("json", "csv", "md-table")
AVERAGE_MODES = ("columns", "per-document")


class CorpusError(Exception):
    """Configuration or input-layout problem that prevents a run."""


class NoMatchedPairs(CorpusError):
    """No document stem occurs in both directories."""


@dataclass(frozen=True)
class HarnessConfig:
    pred_dir: Path
    gt_dir: Path
    preset: str = "arxiv"
    metrics: frozenset[str] | None = None  # only for preset="custom"
    workers: int | None = None  # None: MDEVAL_WORKERS env var, else 1
    average_mode: str = "columns"
    relabel: str = "graded"

    def __post_init__(self):
        object.__setattr__(self, "pred_dir", Path(self.pred_dir))
        object.__setattr__(self, "gt_dir", Path(self.gt_dir))
        if self.average_mode not in AVERAGE_MODES:
            raise ValueError(f"unknown average mode: {self.average_mode!r}")
        if self.preset == "custom":
            if not self.metrics:
                raise ValueError("preset 'custom' needs an explicit metric set")
        elif self.preset not in PRESETS:
            raise ValueError(
                f"unknown preset {self.preset!r}; expected one of "
                f"{sorted(PRESETS) + ['custom']}"
            )

    def scoring_config(self) -> ScoringConfig:
        if self.preset == "custom":
            return ScoringConfig(enabled_metrics=self.metrics, relabel=self.relabel)
        return ScoringConfig.from_preset(self.preset, relabel=self.relabel)

    def resolved_workers(self) -> int:
        if self.workers is not None:
            n = self.workers
        else:
            raw = os.environ.get(WORKERS_ENV, "").strip()
            try:
                n = int(raw) if raw else 1
            except ValueError:
                raise CorpusError(f"{WORKERS_ENV} must be an integer, got {raw!r}")
        if n < 1:
            raise CorpusError(f"worker count must be >= 1, got {n}")
        return n


@dataclass(frozen=True)
class CorpusReport:
    preset: str
    average_mode: str
    metrics: tuple[str, ...]
    per_document: dict[str, DocumentScore]
    column_means: dict[str, float]
    applicable_counts: dict[str, int]
    average: float | None
    counts: dict[str, int]
    errors: tuple[str, ...]
    pred_only: tuple[str, ...]

    def to_dict(self) -> dict:
        return {
            "preset": self.preset,
            "average_mode": self.average_mode,
            "metrics": list(self.metrics),
            "columns": {m: self.column_means.get(m) for m in self.metrics},
            "applicable": {m: self.applicable_counts.get(m, 0) for m in self.metrics},
            "average": self.average,
            "counts": dict(self.counts),
            "documents": {k: v.to_dict() for k, v in self.per_document.items()},
            "errors": list(self.errors),
            "pred_only": list(self.pred_only),
        }


def _stems(directory: Path) -> dict[str, Path]:
    if not directory.is_dir():
        raise CorpusError(f"not a directory: {directory}")
    out: dict[str, Path] = {}
    for p in sorted(directory.iterdir()):
        if not p.is_file():
            continue
        if p.stem in out:
            raise CorpusError(f"duplicate document stem {p.stem!r} in {directory}")
        out[p.stem] = p
    return out


def pair_files(
    pred_dir: Path | str, gt_dir: Path | str
) -> tuple[list[tuple[str, Path | None, Path]], list[str]]:
    """Pair documents by filename stem against the ground-truth side.

    Returns (entries, pred_only): one entry per gt file as
    (doc_id, pred_path or None, gt_path) sorted by doc_id, plus the sorted
    stems that exist only under pred_dir.
    """
    preds = _stems(Path(pred_dir))
    gts = _stems(Path(gt_dir))
    entries = [(stem, preds.get(stem), path) for stem, path in sorted(gts.items())]
    pred_only = sorted(set(preds) - set(gts))
    return entries, pred_only


def _read(path: Path) -> str:
    return path.read_text(encoding="utf-8")


def _score_one(job: tuple[str, str, str, ScoringConfig]) -> tuple[str, DocumentScore | None, str | None]:
    doc_id, pred_path, gt_path, cfg = job
    try:
        pred_text = _read(Path(pred_path))
        gt_text = _read(Path(gt_path))
    except (OSError, UnicodeDecodeError) as exc:
        return doc_id, None, f"{doc_id}: {exc}"
    return doc_id, score_document(pred_text, gt_text, cfg), None


def run(config: HarnessConfig) -> CorpusReport:
    """Score every gt document and aggregate into a CorpusReport."""
    cfg = config.scoring_config()
    workers = config.resolved_workers()
    entries, pred_only = pair_files(config.pred_dir, config.gt_dir)

    matched = [(d, p, g) for d, p, g in entries if p is not None]
    if not matched:
        raise NoMatchedPairs(
            f"no document stems shared between {config.pred_dir} and {config.gt_dir}"
        )

    errors: list[str] = []
    scores: dict[str, DocumentScore] = {}

    jobs = [(d, str(p), str(g), cfg) for d, p, g in matched]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_score_one, jobs, chunksize=8))
    else:
        results = [_score_one(job) for job in jobs]
    for doc_id, score, error in results:
        if error is not None:
            errors.append(error)
        else:
            scores[doc_id] = score

    missing = 0
    for doc_id, pred_path, gt_path in entries:
        if pred_path is not None:
            continue
        try:
            gt_text = _read(gt_path)
        except (OSError, UnicodeDecodeError) as exc:
            errors.append(f"{doc_id}: {exc}")
            continue
        scores[doc_id] = zero_score_for(gt_text, cfg)
        missing += 1

    per_document = dict(sorted(scores.items()))
    enabled = tuple(m for m in METRIC_NAMES if m in cfg.enabled_metrics)

    column_values: dict[str, list[float]] = {m: [] for m in enabled}
    for score in per_document.values():
        for m in enabled:
            v = getattr(score, m)
            if v is not None:
                column_values[m].append(v)
    column_means = {
        m: sum(vs) / len(vs) for m, vs in column_values.items() if vs
    }
    applicable_counts = {m: len(vs) for m, vs in column_values.items()}

    if config.average_mode == "columns":
        means = list(column_means.values())
        average = sum(means) / len(means) if means else None
    else:
        doc_means = []
        for score in per_document.values():
            vals = [v for m in enabled if (v := getattr(score, m)) is not None]
            if vals:
                doc_means.append(sum(vals) / len(vals))
        average = sum(doc_means) / len(doc_means) if doc_means else None

    counts = {
        "documents": len(per_document),
        "matched": sum(1 for d, _, _ in matched if d in scores),
        "missing_pred": missing,
        "pred_only": len(pred_only),
        "errors": len(errors),
    }

    return CorpusReport(
        preset=config.preset,
        average_mode=config.average_mode,
        metrics=enabled,
        per_document=per_document,
        column_means=column_means,
        applicable_counts=applicable_counts,
        average=average,
        counts=counts,
        errors=tuple(errors),
        pred_only=tuple(pred_only),
    )


def _pct(value: float | None) -> str:
    return "" if value is None else f"{value * 100:.2f}"


def _doc_average(score: DocumentScore, metrics: tuple[str, ...]) -> float | None:
    vals = [v for m in metrics if (v := getattr(score, m)) is not None]
    return sum(vals) / len(vals) if vals else None


def emit_report(report: CorpusReport, fmt: str) -> bytes:
    """Render a report as UTF-8 bytes: json (0-1 floats, null for absent)
    or csv / md-table (percentages with two decimals, blank for absent)."""
    if fmt == "json":
        return (json.dumps(report.to_dict(), indent=2) + "\n").encode("utf-8")
    header = ["doc_id", *report.metrics, "average"]
    rows = []
    for doc_id, score in report.per_document.items():
        rows.append(
            [doc_id]
            + [_pct(getattr(score, m)) for m in report.metrics]
            + [_pct(_doc_average(score, report.metrics))]
        )
    summary = (
        ["mean"]
        + [_pct(report.column_means.get(m)) for m in report.metrics]
        + [_pct(report.average)]
    )
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)
        writer.writerow(summary)
        return buf.getvalue().encode("utf-8")
    if fmt == "md-table":
        lines = [
            "| " + " | ".join(header) + " |",
            "| " + " | ".join("---" for _ in header) + " |",
        ]
        for row in rows + [summary]:
            lines.append("| " + " | ".join(c or "-" for c in row) + " |")
        return ("\n".join(lines) + "\n").encode("utf-8")
    raise ValueError(f"unknown report format {fmt!r}; expected one of {FORMATS}")
