"""Ten-metric scoring of a predicted document against its ground truth.

Each metric is a float in [0, 1] or None (absent). A metric is absent when
its family is disabled, the ground truth has no units of the relevant kind,
or (for the order metrics) no blocks/tokens could be matched at all. A
ground truth that has the kind while the prediction does not scores 0.0.
"""

from __future__ import annotations

import re
from collections import Counter, deque
from dataclasses import dataclass, field
from typing import Iterable

from .metrics import AlignedRanking, eds, ktds, max_weight_assignment, teds, vocab_f1
from .segment import SegmentedDoc, SemanticUnit, UnitKind, segment
from .standardize import StandardMarkdown, standardize
from .structures import build_toc, parse_latex_table
from .textnorm import normalize_text, tokenize

METRIC_NAMES = (
    "text_concat",
    "text_vocab",
    "heading_concat",
    "heading_tree",
    "formula_embed",
    "formula_isolate",
    "table_concat",
    "table_tree",
    "order_block",
    "order_token",
)

PRESETS: dict[str, frozenset[str]] = {
    "arxiv": frozenset(METRIC_NAMES),
    "github": frozenset(
        {
            "text_concat",
            "text_vocab",
            "heading_concat",
            "heading_tree",
            "order_block",
            "order_token",
        }
    ),
}
PRESETS["zenodo"] = PRESETS["github"] | {"table_concat", "table_tree"}


@dataclass(frozen=True)
class ScoringConfig:
    enabled_metrics: frozenset[str] = frozenset(METRIC_NAMES)
    tokenizer: str = "unicode_word"
    relabel: str = "graded"
    block_match: str = "exact_normalized"

    def __post_init__(self):
        object.__setattr__(self, "enabled_metrics", frozenset(self.enabled_metrics))
        unknown = self.enabled_metrics - set(METRIC_NAMES)
        if unknown:
            raise ValueError(f"unknown metric names: {sorted(unknown)}")
        if self.tokenizer != "unicode_word":
            raise ValueError(f"unknown tokenizer: {self.tokenizer!r}")
        if self.relabel not in ("graded", "exact"):
            raise ValueError(f"unknown relabel mode: {self.relabel!r}")
        if self.block_match != "exact_normalized":
            raise ValueError(f"unknown block match mode: {self.block_match!r}")

    @classmethod
    def from_preset(cls, name: str, **overrides) -> "ScoringConfig":
        try:
            enabled = PRESETS[name]
        except KeyError:
            raise ValueError(
                f"unknown preset {name!r}; expected one of {sorted(PRESETS)}"
            ) from None
        return cls(enabled_metrics=enabled, **overrides)


@dataclass
class DocumentScore:
    text_concat: float | None = None
    text_vocab: float | None = None
    heading_concat: float | None = None
    heading_tree: float | None = None
    formula_embed: float | None = None
    formula_isolate: float | None = None
    table_concat: float | None = None
    table_tree: float | None = None
    order_block: float | None = None
    order_token: float | None = None
    warnings: tuple[str, ...] = ()

    def values(self) -> dict[str, float | None]:
        return {name: getattr(self, name) for name in METRIC_NAMES}

    def present(self) -> dict[str, float]:
        return {n: v for n, v in self.values().items() if v is not None}

    def to_dict(self) -> dict:
        out: dict = dict(self.values())
        out["warnings"] = list(self.warnings)
        return out


def _concat(units: Iterable[SemanticUnit]) -> str:
    """Newline-join the units' whitespace-collapsed texts."""
    return "\n".join(normalize_text(u.text) for u in units)


def score_text(pred: SegmentedDoc, gt: SegmentedDoc) -> tuple[float | None, float | None]:
    """(text_concat, text_vocab) over plain-text units; absent if gt has none."""
    gt_units = gt.of_kind(UnitKind.PLAIN_TEXT)
    if not gt_units:
        return None, None
    pred_units = pred.of_kind(UnitKind.PLAIN_TEXT)
    if not pred_units:
        return 0.0, 0.0
    concat = eds(_concat(pred_units), _concat(gt_units))
    vocab = vocab_f1(
        Counter(t for u in pred_units for t in tokenize(u.text)),
        Counter(t for u in gt_units for t in tokenize(u.text)),
    )
    return concat, vocab


def score_headings(
    pred: SegmentedDoc, gt: SegmentedDoc, config: "ScoringConfig | None" = None
) -> tuple[float | None, float | None]:
    """(heading_concat, heading_tree); absent if gt has no headings."""
    relabel = config.relabel if config else "graded"
    gt_units = gt.of_kind(UnitKind.HEADING)
    if not gt_units:
        return None, None
    pred_units = pred.of_kind(UnitKind.HEADING)
    if not pred_units:
        return 0.0, 0.0
    concat = eds(_concat(pred_units), _concat(gt_units))
    pred_toc = build_toc((u.level, u.text) for u in pred_units)
    gt_toc = build_toc((u.level, u.text) for u in gt_units)
    return concat, teds(pred_toc, gt_toc, relabel=relabel)


def score_formulas(pred: SegmentedDoc, gt: SegmentedDoc) -> tuple[float | None, float | None]:
    """(formula_embed, formula_isolate); each absent if gt lacks that kind."""

    def one(kind: UnitKind) -> float | None:
        gt_units = gt.of_kind(kind)
        if not gt_units:
            return None
        pred_units = pred.of_kind(kind)
        if not pred_units:
            return 0.0
        return eds(_concat(pred_units), _concat(gt_units))

    return one(UnitKind.FORMULA_EMBEDDED), one(UnitKind.FORMULA_ISOLATED)


def score_tables(
    pred: SegmentedDoc, gt: SegmentedDoc, config: "ScoringConfig | None" = None
) -> tuple[float | None, float | None]:
    """(table_concat, table_tree); absent if gt has no tables.

    table_tree matches table trees across the two documents with a
    maximum-weight assignment on pairwise similarities, normalized by the
    larger table count, so extra and missing tables both cost.
    """
    relabel = config.relabel if config else "graded"
    gt_units = gt.of_kind(UnitKind.TABLE)
    if not gt_units:
        return None, None
    pred_units = pred.of_kind(UnitKind.TABLE)
    if not pred_units:
        return 0.0, 0.0
    concat = eds(_concat(pred_units), _concat(gt_units))
    pred_trees = [parse_latex_table(u.text) for u in pred_units]
    gt_trees = [parse_latex_table(u.text) for u in gt_units]
    weights = [[teds(p, g, relabel=relabel) for g in gt_trees] for p in pred_trees]
    mapping = max_weight_assignment(weights)
    total = sum(weights[r][c] for r, c in mapping.items())
    return concat, total / max(len(pred_trees), len(gt_trees))


_PARA_SPLIT = re.compile(r"\n[ \t]*\n")


def build_blocks(doc: SegmentedDoc) -> list[str]:
    """Reading-order blocks: one per heading/table/isolated formula, and one
    per blank-line-separated paragraph, with embedded formulas kept inline
    as ``\\(body\\)``. Block content is the unit's canonical markup,
    whitespace-normalized; empty blocks are dropped."""
    blocks: list[str] = []
    buf: list[str] = []

    def flush():
        if buf:
            content = normalize_text("".join(buf))
            if content:
                blocks.append(content)
            buf.clear()

    for u in doc.units:
        if u.kind is UnitKind.FORMULA_EMBEDDED:
            buf.append(f"\\({u.text}\\)")
        elif u.kind is UnitKind.PLAIN_TEXT:
            parts = _PARA_SPLIT.split(u.text)
            buf.append(parts[0])
            for part in parts[1:]:
                flush()
                buf.append(part)
        else:
            flush()
            if u.kind is UnitKind.HEADING:
                source = "#" * (u.level or 1) + " " + u.text
            elif u.kind is UnitKind.TABLE:
                source = "\\begin{tabular}" + u.text + "\\end{tabular}"
            else:  # isolated formula
                source = "\\[" + u.text + "\\]"
            content = normalize_text(source)
            if content:
                blocks.append(content)
    flush()
    return blocks


def _match_blocks(pred_blocks: list[str], gt_blocks: list[str]) -> list[tuple[int, int]]:
    """Exact-content matches as (gt_index, pred_index), duplicates consumed in order."""
    pool: dict[str, deque[int]] = {}
    for i, b in enumerate(pred_blocks):
        pool.setdefault(b, deque()).append(i)
    pairs = []
    for g, b in enumerate(gt_blocks):
        q = pool.get(b)
        if q:
            pairs.append((g, q.popleft()))
    return pairs


def _first_appearance(tokens: Iterable[str]) -> dict[str, int]:
    first: dict[str, int] = {}
    for i, t in enumerate(tokens):
        first.setdefault(t, i)
    return first


def score_reading_order(
    pred: SegmentedDoc, gt: SegmentedDoc, warnings: list[str] | None = None
) -> tuple[float | None, float | None]:
    """(order_block, order_token); each absent when nothing matches (n = 0).

    When some blocks go unmatched, the matched fraction is appended to
    ``warnings`` as a diagnostic.
    """
    pred_blocks, gt_blocks = build_blocks(pred), build_blocks(gt)
    pairs = _match_blocks(pred_blocks, gt_blocks)
    if warnings is not None and len(pairs) < max(len(pred_blocks), len(gt_blocks)):
        warnings.append(
            f"order_block: matched {len(pairs)} of {len(gt_blocks)} ground-truth "
            f"blocks ({len(pred_blocks)} predicted)"
        )
    block = ktds(AlignedRanking(tuple(pairs))) if pairs else None

    pred_first = _first_appearance(tokenize(pred.source.content))
    gt_first = _first_appearance(tokenize(gt.source.content))
    shared = sorted(set(pred_first) & set(gt_first), key=gt_first.__getitem__)
    token = (
        ktds(AlignedRanking.from_sequences(
            [gt_first[t] for t in shared], [pred_first[t] for t in shared]
        ))
        if shared
        else None
    )
    return block, token


_KIND_LABEL = {
    UnitKind.PLAIN_TEXT: "plain text",
    UnitKind.HEADING: "heading",
    UnitKind.FORMULA_EMBEDDED: "embedded formula",
    UnitKind.FORMULA_ISOLATED: "isolated formula",
    UnitKind.TABLE: "table",
}


def _as_segmented(doc: SegmentedDoc | StandardMarkdown | str) -> SegmentedDoc:
    if isinstance(doc, SegmentedDoc):
        return doc
    return segment(doc if isinstance(doc, StandardMarkdown) else standardize(doc))


def score_document(
    pred: SegmentedDoc | StandardMarkdown | str,
    gt: SegmentedDoc | StandardMarkdown | str,
    config: ScoringConfig | None = None,
) -> DocumentScore:
    """Standardize, segment, and score one document pair."""
    config = config or ScoringConfig()
    pred_seg = _as_segmented(pred)
    gt_seg = _as_segmented(gt)

    warnings = [f"pred: {w}" for w in pred_seg.source.warnings + pred_seg.warnings]
    warnings += [f"gt: {w}" for w in gt_seg.source.warnings + gt_seg.warnings]
    for kind, label in _KIND_LABEL.items():
        n_pred, n_gt = len(pred_seg.of_kind(kind)), len(gt_seg.of_kind(kind))
        if n_pred and not n_gt:
            warnings.append(
                f"prediction has {n_pred} {label} unit(s) but ground truth has none"
            )

    enabled = config.enabled_metrics
    out: dict[str, float | None] = {name: None for name in METRIC_NAMES}

    if {"text_concat", "text_vocab"} & enabled:
        c, v = score_text(pred_seg, gt_seg)
        out["text_concat"] = c if "text_concat" in enabled else None
        out["text_vocab"] = v if "text_vocab" in enabled else None
    if {"heading_concat", "heading_tree"} & enabled:
        c, t = score_headings(pred_seg, gt_seg, config)
        out["heading_concat"] = c if "heading_concat" in enabled else None
        out["heading_tree"] = t if "heading_tree" in enabled else None
    if {"formula_embed", "formula_isolate"} & enabled:
        e, i = score_formulas(pred_seg, gt_seg)
        out["formula_embed"] = e if "formula_embed" in enabled else None
        out["formula_isolate"] = i if "formula_isolate" in enabled else None
    if {"table_concat", "table_tree"} & enabled:
        c, t = score_tables(pred_seg, gt_seg, config)
        out["table_concat"] = c if "table_concat" in enabled else None
        out["table_tree"] = t if "table_tree" in enabled else None
    if {"order_block", "order_token"} & enabled:
        b, t = score_reading_order(pred_seg, gt_seg, warnings)
        out["order_block"] = b if "order_block" in enabled else None
        out["order_token"] = t if "order_token" in enabled else None

    return DocumentScore(**out, warnings=tuple(warnings))


def zero_score_for(
    gt: SegmentedDoc | StandardMarkdown | str, config: ScoringConfig | None = None
) -> DocumentScore:
    """All-zero score for a missing prediction: every enabled metric the
    ground truth makes applicable scores 0.0; the rest stay absent."""
    config = config or ScoringConfig()
    gt_seg = _as_segmented(gt)
    applicable = {
        "text_concat": bool(gt_seg.of_kind(UnitKind.PLAIN_TEXT)),
        "text_vocab": bool(gt_seg.of_kind(UnitKind.PLAIN_TEXT)),
        "heading_concat": bool(gt_seg.of_kind(UnitKind.HEADING)),
        "heading_tree": bool(gt_seg.of_kind(UnitKind.HEADING)),
        "formula_embed": bool(gt_seg.of_kind(UnitKind.FORMULA_EMBEDDED)),
        "formula_isolate": bool(gt_seg.of_kind(UnitKind.FORMULA_ISOLATED)),
        "table_concat": bool(gt_seg.of_kind(UnitKind.TABLE)),
        "table_tree": bool(gt_seg.of_kind(UnitKind.TABLE)),
        "order_block": bool(build_blocks(gt_seg)),
        "order_token": bool(tokenize(gt_seg.source.content)),
    }
    out = {
        name: 0.0 if name in config.enabled_metrics and applicable[name] else None
        for name in METRIC_NAMES
    }
    return DocumentScore(**out, warnings=("prediction file missing",))
