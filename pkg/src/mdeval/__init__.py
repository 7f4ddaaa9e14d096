"""mdeval: score predicted Markdown renderings against ground truth.

Pipeline: standardize both sides into one Markdown dialect, segment them
into typed units (headings, formulas, tables, plain text), then compute a
ten-metric score vector per document and aggregate over a corpus.
"""

from .corpus import (
    AVERAGE_MODES,
    FORMATS,
    CorpusError,
    CorpusReport,
    HarnessConfig,
    NoMatchedPairs,
    emit_report,
    pair_files,
    run,
)
from .metrics import (
    AlignedRanking,
    edit_distance,
    eds,
    kendall_discordant,
    ktds,
    max_weight_assignment,
    teds,
    tree_edit_distance,
    vocab_f1,
)
from .scoring import (
    METRIC_NAMES,
    PRESETS,
    DocumentScore,
    ScoringConfig,
    build_blocks,
    score_document,
    score_formulas,
    score_headings,
    score_reading_order,
    score_tables,
    score_text,
    zero_score_for,
)
from .segment import SegmentedDoc, SemanticUnit, UnitKind, segment, units_of_kind
from .standardize import (
    ISOLATED_ENVIRONMENTS,
    RawMarkdown,
    StandardMarkdown,
    align_formula_delimiters,
    convert_md_tables_to_latex,
    standardize,
    strip_links_and_images,
    unify_headings,
)
from .structures import Node, ROOT_LABEL, ROW_LABEL, build_toc, parse_latex_table

__version__ = "0.1.0"

run_corpus = run

__all__ = [
    "AVERAGE_MODES",
    "AlignedRanking",
    "CorpusError",
    "CorpusReport",
    "DocumentScore",
    "FORMATS",
    "HarnessConfig",
    "ISOLATED_ENVIRONMENTS",
    "METRIC_NAMES",
    "NoMatchedPairs",
    "Node",
    "PRESETS",
    "ROOT_LABEL",
    "ROW_LABEL",
    "RawMarkdown",
    "ScoringConfig",
    "SegmentedDoc",
    "SemanticUnit",
    "StandardMarkdown",
    "UnitKind",
    "align_formula_delimiters",
    "build_blocks",
    "build_toc",
    "convert_md_tables_to_latex",
    "edit_distance",
    "eds",
    "emit_report",
    "kendall_discordant",
    "ktds",
    "max_weight_assignment",
    "pair_files",
    "parse_latex_table",
    "run",
    "run_corpus",
    "score_document",
    "score_formulas",
    "score_headings",
    "score_reading_order",
    "score_tables",
    "score_text",
    "segment",
    "standardize",
    "strip_links_and_images",
    "teds",
    "tree_edit_distance",
    "unify_headings",
    "units_of_kind",
    "vocab_f1",
    "zero_score_for",
]
