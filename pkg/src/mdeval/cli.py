"""Command-line interface.

Exit codes: 0 success, 1 configuration or input error, 2 zero matched
document pairs.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .corpus import (
    AVERAGE_MODES,
    FORMATS,
    CorpusError,
    HarnessConfig,
    NoMatchedPairs,
    emit_report,
    run,
)
from .scoring import PRESETS, ScoringConfig, score_document
from .segment import segment
from .standardize import standardize


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on usage errors; 2 is taken, so remap to 1.
    def error(self, message):
        self.exit(1, f"{self.prog}: error: {message}\n")


def _read_file(path: str) -> str:
    return Path(path).read_text(encoding="utf-8")


def _cmd_standardize(args) -> int:
    std = standardize(_read_file(args.file))
    sys.stdout.write(std.content)
    if std.content and not std.content.endswith("\n"):
        sys.stdout.write("\n")
    for w in std.warnings:
        print(f"warning: {w}", file=sys.stderr)
    return 0


def _cmd_segment(args) -> int:
    doc = segment(standardize(_read_file(args.file)))
    units = [
        {
            "kind": u.kind.value,
            "level": u.level,
            "text": u.text,
            "start": u.start,
            "end": u.end,
            "index": u.index,
        }
        for u in doc.units
    ]
    print(json.dumps(units, indent=2))
    for w in doc.source.warnings + doc.warnings:
        print(f"warning: {w}", file=sys.stderr)
    return 0


def _cmd_score_file(args) -> int:
    config = ScoringConfig.from_preset(args.preset, relabel=args.relabel)
    score = score_document(_read_file(args.pred), _read_file(args.gt), config)
    if args.json:
        print(json.dumps(score.to_dict(), indent=2))
    else:
        for name, value in score.values().items():
            shown = "-" if value is None else f"{value * 100:.2f}"
            print(f"{name:<16} {shown}")
        for w in score.warnings:
            print(f"warning: {w}", file=sys.stderr)
    return 0


def _cmd_score(args) -> int:
    config = HarnessConfig(
        pred_dir=Path(args.pred),
        gt_dir=Path(args.gt),
        preset=args.preset,
        workers=args.workers,
        average_mode=args.average,
        relabel=args.relabel,
    )
    report = run(config)
    data = emit_report(report, args.format)
    if args.out:
        Path(args.out).write_bytes(data)
    else:
        sys.stdout.buffer.write(data)
        sys.stdout.buffer.flush()
    if args.figures:
        from .figures import save_report_figures

        for path in save_report_figures(report, Path(args.figures)):
            print(f"figure: {path}", file=sys.stderr)
    for e in report.errors:
        print(f"error: {e}", file=sys.stderr)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="mdeval", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("standardize", help="print a file in the canonical dialect")
    p.add_argument("file")
    p.set_defaults(func=_cmd_standardize)

    p = sub.add_parser("segment", help="print semantic units as JSON")
    p.add_argument("file")
    p.add_argument("--format", choices=("json",), default="json")
    p.set_defaults(func=_cmd_segment)

    p = sub.add_parser("score-file", help="score one prediction against one ground truth")
    p.add_argument("pred")
    p.add_argument("gt")
    p.add_argument("--preset", choices=sorted(PRESETS), default="arxiv")
    p.add_argument("--relabel", choices=("graded", "exact"), default="graded")
    p.add_argument("--json", action="store_true", help="emit JSON (0-1 floats, null=absent)")
    p.set_defaults(func=_cmd_score_file)

    p = sub.add_parser("score", help="score a prediction directory against a ground-truth directory")
    p.add_argument("--pred", required=True, help="directory of predicted renderings")
    p.add_argument("--gt", required=True, help="directory of ground-truth documents")
    p.add_argument("--preset", choices=sorted(PRESETS), default="arxiv")
    p.add_argument("--relabel", choices=("graded", "exact"), default="graded")
    p.add_argument("--workers", type=int, default=None,
                   help="parallel workers (default: $MDEVAL_WORKERS or 1)")
    p.add_argument("--out", default=None, help="write the report here instead of stdout")
    p.add_argument("--format", choices=FORMATS, default="md-table")
    p.add_argument("--average", choices=AVERAGE_MODES, default="columns")
    p.add_argument("--figures", default=None, metavar="DIR",
                   help="also render summary figures into DIR")
    p.set_defaults(func=_cmd_score)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except NoMatchedPairs as exc:
        print(f"mdeval: error: {exc}", file=sys.stderr)
        return 2
    except (CorpusError, ValueError, OSError, UnicodeDecodeError) as exc:
        print(f"mdeval: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
