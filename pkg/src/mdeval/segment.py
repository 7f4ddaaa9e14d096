"""Split canonical Markdown into typed, non-overlapping semantic units.

Claim precedence: tables, then isolated formulas, then headings, then
embedded formulas; the uncovered remainder becomes plain text. Spans are
half-open offsets into the standardized content and cover every
non-whitespace character.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum

from .standardize import StandardMarkdown


class UnitKind(str, Enum):
    HEADING = "heading"
    FORMULA_EMBEDDED = "formula_embedded"
    FORMULA_ISOLATED = "formula_isolated"
    TABLE = "table"
    PLAIN_TEXT = "plain_text"


@dataclass(frozen=True)
class SemanticUnit:
    """One typed span. ``text`` is the payload without its delimiters:
    heading text after the hashes, formula body, tabular body including the
    column spec, or the raw plain-text run."""

    kind: UnitKind
    text: str
    start: int
    end: int
    index: int
    level: int | None = None


@dataclass(frozen=True)
class SegmentedDoc:
    source: StandardMarkdown
    units: tuple[SemanticUnit, ...]
    warnings: tuple[str, ...] = ()

    def of_kind(self, kind: UnitKind) -> list[SemanticUnit]:
        return [u for u in self.units if u.kind is kind]


def units_of_kind(doc: SegmentedDoc, kind: UnitKind) -> list[SemanticUnit]:
    return doc.of_kind(kind)


_BEGIN_TAB = "\\begin{tabular}"
_END_TAB = "\\end{tabular}"
_HEADING_LINE = re.compile(r"^(#{1,6}) (.*)$")
_EMBEDDED_OPEN = re.compile(r"\\[\[(]")


def _tabular_end(text: str, start: int) -> int | None:
    """Index just past the \\end matching the \\begin at ``start``; None if unterminated."""
    depth = 1
    i = start + len(_BEGIN_TAB)
    while depth:
        nb = text.find(_BEGIN_TAB, i)
        ne = text.find(_END_TAB, i)
        if ne < 0:
            return None
        if 0 <= nb < ne:
            depth += 1
            i = nb + len(_BEGIN_TAB)
        else:
            depth -= 1
            i = ne + len(_END_TAB)
    return i


def _overlaps(claims: list, start: int, end: int) -> bool:
    return any(s < end and start < e for s, e, *_ in claims)


def _find_free(text: str, needle: str, pos: int, claims: list) -> int | None:
    """First occurrence of ``needle`` at or after ``pos`` outside any claim."""
    while True:
        i = text.find(needle, pos)
        if i < 0:
            return None
        if not _overlaps(claims, i, i + len(needle)):
            return i
        pos = i + 1


def segment(doc: StandardMarkdown | str) -> SegmentedDoc:
    if isinstance(doc, str):
        doc = StandardMarkdown(doc)
    text = doc.content
    warnings: list[str] = []
    claims: list[tuple[int, int, UnitKind, str, int | None]] = []

    # Tables, with nesting-aware end matching.
    pos = 0
    while True:
        b = text.find(_BEGIN_TAB, pos)
        if b < 0:
            break
        end = _tabular_end(text, b)
        if end is None:
            claims.append(
                (b, len(text), UnitKind.TABLE, text[b + len(_BEGIN_TAB) :], None)
            )
            warnings.append(
                "unterminated \\begin{tabular}; remainder treated as one table"
            )
            break
        body = text[b + len(_BEGIN_TAB) : end - len(_END_TAB)]
        claims.append((b, end, UnitKind.TABLE, body, None))
        pos = end

    # Isolated formulas: \[ at line start (ignoring indentation).
    for m in re.finditer(r"\\\[", text):
        s = m.start()
        if _overlaps(claims, s, s + 2):
            continue
        line_start = text.rfind("\n", 0, s) + 1
        if text[line_start:s].strip():
            continue  # mid-line opener; the embedded pass may claim it
        close = _find_free(text, "\\]", s + 2, claims)
        if close is None:
            continue
        if _overlaps(claims, s, close + 2):
            continue  # would swallow a table; stays plain text
        claims.append((s, close + 2, UnitKind.FORMULA_ISOLATED, text[s + 2 : close], None))

    # Headings: whole lines not touched by any claim so far.
    line_start = 0
    for line in text.split("\n"):
        line_end = line_start + len(line)
        m = _HEADING_LINE.match(line)
        if m and m.group(2).strip() and not _overlaps(claims, line_start, line_end):
            claims.append(
                (line_start, line_end, UnitKind.HEADING, m.group(2).strip(), len(m.group(1)))
            )
        line_start = line_end + 1

    # Embedded formulas in the remaining space, scanned left to right.
    pos = 0
    while True:
        m = _EMBEDDED_OPEN.search(text, pos)
        if m is None:
            break
        s = m.start()
        if _overlaps(claims, s, s + 2):
            pos = s + 2
            continue
        closer = "\\]" if text[s + 1] == "[" else "\\)"
        close = _find_free(text, closer, s + 2, claims)
        if close is None or _overlaps(claims, s, close + 2):
            pos = s + 2
            continue
        claims.append((s, close + 2, UnitKind.FORMULA_EMBEDDED, text[s + 2 : close], None))
        pos = close + 2

    # Plain text fills the gaps, trimmed of boundary newlines only.
    claims.sort()
    raw: list[tuple[int, int, UnitKind, str, int | None]] = []
    cursor = 0
    for s, e, kind, payload, level in claims + [(len(text), len(text), None, "", None)]:
        gap = text[cursor:s]
        if gap.strip():
            lead = len(gap) - len(gap.lstrip("\n"))
            core = gap.strip("\n")
            raw.append((cursor + lead, cursor + lead + len(core), UnitKind.PLAIN_TEXT, core, None))
        if kind is None:
            break
        raw.append((s, e, kind, payload, level))
        cursor = e

    units = tuple(
        SemanticUnit(kind=k, text=t, start=s, end=e, index=i, level=lvl)
        for i, (s, e, k, t, lvl) in enumerate(raw)
    )
    return SegmentedDoc(source=doc, units=units, warnings=tuple(warnings))
