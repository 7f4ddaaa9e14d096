"""Markdown canonicalization into the single dialect the scorer consumes.

The canonical dialect: display math as ``\\[...\\]``, inline math as
``\\(...\\)``, ATX headings only, no link/image syntax, and every table as a
``tabular`` environment on one line. Code fences and inline code spans are
opaque to every operation. ``standardize`` is idempotent on its own output.
"""

from __future__ import annotations

import re
from bisect import bisect_right
from dataclasses import dataclass

from .textnorm import canonical_newlines, nfc

# Display-math environments rewritten to \[...\]; starred variants included.
ISOLATED_ENVIRONMENTS = ("equation", "gather", "multline")


@dataclass(frozen=True)
class RawMarkdown:
    """Markdown as produced by some system, in any supported dialect."""

    content: str
    source_label: str = ""


@dataclass(frozen=True)
class StandardMarkdown:
    """Canonical-dialect Markdown plus warnings from lossy or odd input."""

    content: str
    warnings: tuple[str, ...] = ()


_FENCE_OPEN = re.compile(r"^ {0,3}(`{3,}|~{3,})(.*)$")


def _code_groups(text: str) -> list[tuple[bool, str]]:
    """Split into (is_code, chunk) pieces; fence lines belong to the code chunk.

    Chunks partition the input lines, so ``"\\n".join(chunks)`` restores the
    text exactly.
    """
    lines = text.split("\n")
    groups: list[tuple[bool, str]] = []
    buf: list[str] = []
    i = 0
    n = len(lines)
    while i < n:
        m = _FENCE_OPEN.match(lines[i])
        if m and not (m.group(1)[0] == "`" and "`" in m.group(2)):
            if buf:
                groups.append((False, "\n".join(buf)))
                buf = []
            char, length = m.group(1)[0], len(m.group(1))
            close = re.compile(
                r"^ {0,3}" + re.escape(char) + "{" + str(length) + r",}[ \t]*$"
            )
            code = [lines[i]]
            i += 1
            while i < n and not close.match(lines[i]):
                code.append(lines[i])
                i += 1
            if i < n:
                code.append(lines[i])
                i += 1
            groups.append((True, "\n".join(code)))
        else:
            buf.append(lines[i])
            i += 1
    if buf:
        groups.append((False, "\n".join(buf)))
    return groups


_CODE_SPAN = re.compile(r"(?<!`)(`+)(?!`)(.+?)(?<!`)\1(?!`)", re.DOTALL)
_MATH_SPAN = re.compile(r"\\\[.*?\\\]|\\\(.*?\\\)", re.DOTALL)
_TABULAR_SPAN = re.compile(r"\\begin\{tabular\}.*?\\end\{tabular\}", re.DOTALL)


def _spans(pattern: re.Pattern, text: str) -> list[tuple[int, int]]:
    return [m.span() for m in pattern.finditer(text)]


def _merge_intervals(*groups: list[tuple[int, int]]) -> list[tuple[int, int]]:
    merged: list[tuple[int, int]] = []
    for start, end in sorted(iv for g in groups for iv in g):
        if merged and start <= merged[-1][1]:
            merged[-1] = (merged[-1][0], max(merged[-1][1], end))
        else:
            merged.append((start, end))
    return merged


def _mask(text: str, intervals: list[tuple[int, int]]) -> str:
    """Overwrite protected intervals with NUL so regexes cannot match inside.

    Newlines survive so line-anchored patterns keep working.
    """
    if not intervals:
        return text
    chars = list(text)
    for start, end in intervals:
        for i in range(start, end):
            if chars[i] != "\n":
                chars[i] = "\x00"
    return "".join(chars)


def _line_flags(text: str, intervals: list[tuple[int, int]]) -> list[bool]:
    """Per-line flag: does the line intersect any protected interval."""
    lines = text.split("\n")
    flags = [False] * len(lines)
    pos = 0
    spans = []
    for line in lines:
        spans.append((pos, pos + len(line)))
        pos += len(line) + 1
    k = 0
    for idx, (s, e) in enumerate(spans):
        while k < len(intervals) and intervals[k][1] <= s:
            k += 1
        if k < len(intervals) and intervals[k][0] < e:
            flags[idx] = True
    return flags


# --- formula delimiters ----------------------------------------------------

def _env_token_re(environments: tuple[str, ...]) -> re.Pattern:
    names = "|".join(re.escape(e) + r"\*?" for e in environments)
    return re.compile(r"\\(begin|end)\{(" + names + r")\}")


def align_formula_delimiters(
    text: str,
    warnings: list[str] | None = None,
    environments: tuple[str, ...] = ISOLATED_ENVIRONMENTS,
) -> str:
    """Rewrite $$/$-style and environment math to ``\\[...\\]`` / ``\\(...\\)``.

    Environments pair by name anywhere in the text; ``$$`` pairs only within
    one paragraph; single ``$`` pairs leftmost-first within one line. Anything
    left unpaired stays literal and is reported in ``warnings``.
    """
    if warnings is None:
        warnings = []
    parts = []
    for is_code, chunk in _code_groups(text):
        parts.append(chunk if is_code else _align_chunk(chunk, warnings, environments))
    return "\n".join(parts)


def _align_chunk(chunk: str, warnings: list[str], environments: tuple[str, ...]) -> str:
    protected = _merge_intervals(
        _spans(_CODE_SPAN, chunk), _spans(_TABULAR_SPAN, chunk)
    )
    env_re = _env_token_re(environments)
    tokens: list[tuple[int, int, str, str]] = []  # start, end, kind, env name
    i = 0
    n = len(chunk)
    k = 0
    while i < n:
        while k < len(protected) and protected[k][1] <= i:
            k += 1
        if k < len(protected) and protected[k][0] <= i:
            i = protected[k][1]
            continue
        ch = chunk[i]
        if ch == "\\":
            m = env_re.match(chunk, i)
            if m:
                tokens.append((m.start(), m.end(), m.group(1), m.group(2)))
                i = m.end()
            else:
                i += 2  # escaped character, e.g. \$
            continue
        if ch == "$":
            if i + 1 < n and chunk[i + 1] == "$":
                tokens.append((i, i + 2, "$$", ""))
                i += 2
            else:
                tokens.append((i, i + 1, "$", ""))
                i += 1
            continue
        i += 1

    lines = chunk.split("\n")
    line_starts = [0]
    for line in lines[:-1]:
        line_starts.append(line_starts[-1] + len(line) + 1)
    para_of_line = []
    para = 0
    for line in lines:
        if not line.strip():
            para += 1
        para_of_line.append(para)

    def line_of(pos: int) -> int:
        return bisect_right(line_starts, pos) - 1

    replacements: list[tuple[int, int, str]] = []

    stacks: dict[str, list[tuple[int, int]]] = {}
    for start, end, kind, name in tokens:
        if kind == "begin":
            stacks.setdefault(name, []).append((start, end))
        elif kind == "end":
            stack = stacks.get(name)
            if stack:
                b = stack.pop()
                replacements.append((b[0], b[1], "\\["))
                replacements.append((start, end, "\\]"))
            else:
                warnings.append(
                    f"unbalanced \\end{{{name}}} left as plain text"
                )
    for name, stack in stacks.items():
        for _ in stack:
            warnings.append(f"unbalanced \\begin{{{name}}} left as plain text")

    pending: tuple[int, int] | None = None
    for start, end, kind, _ in tokens:
        if kind != "$$":
            continue
        if pending is None:
            pending = (start, end)
        elif para_of_line[line_of(pending[0])] == para_of_line[line_of(start)]:
            replacements.append((pending[0], pending[1], "\\["))
            replacements.append((start, end, "\\]"))
            pending = None
        else:
            warnings.append("unbalanced '$$' left as plain text")
            pending = (start, end)
    if pending is not None:
        warnings.append("unbalanced '$$' left as plain text")

    by_line: dict[int, list[tuple[int, int]]] = {}
    for start, end, kind, _ in tokens:
        if kind == "$":
            by_line.setdefault(line_of(start), []).append((start, end))
    for _, singles in sorted(by_line.items()):
        for a, b in zip(singles[0::2], singles[1::2]):
            replacements.append((a[0], a[1], "\\("))
            replacements.append((b[0], b[1], "\\)"))
        if len(singles) % 2:
            warnings.append("unmatched '$' treated as literal text")

    if not replacements:
        return chunk
    replacements.sort()
    out = []
    last = 0
    for start, end, new in replacements:
        out.append(chunk[last:start])
        out.append(new)
        last = end
    out.append(chunk[last:])
    return "".join(out)


# --- links and images -------------------------------------------------------

_IMG_INLINE = re.compile(r"!\[([^\[\]]*)\]\(([^()]*)\)")
_IMG_REF = re.compile(r"!\[([^\[\]]*)\]\[[^\[\]]*\]")
_LINK_INLINE = re.compile(r"(?<!\\)(?<!!)\[([^\[\]]*)\]\(([^()]*)\)")
_LINK_REF = re.compile(r"(?<!\\)(?<!!)\[([^\[\]]*)\]\[[^\[\]]*\]")
_AUTOLINK = re.compile(r"<(?:https?|ftp)://[^<>\s]*>|<mailto:[^<>\s]+>")
# (?!\^) keeps footnote definitions ([^1]: ...) untouched.
_REF_DEF = re.compile(r"^ {0,3}\[(?!\^)[^\[\]]+\]:[ \t]*\S.*$\n?", re.MULTILINE)


def strip_links_and_images(text: str, warnings: list[str] | None = None) -> str:
    """Drop link/image syntax, keeping only the visible link text."""
    if warnings is None:
        warnings = []
    parts = []
    for is_code, chunk in _code_groups(text):
        parts.append(chunk if is_code else _strip_chunk(chunk))
    return "\n".join(parts)


def _sub_keeping_group(chunk: str, pattern: re.Pattern, group: int | None) -> str:
    """Substitute matches found on the masked text, splicing from the real text."""
    protected = _merge_intervals(
        _spans(_CODE_SPAN, chunk),
        _spans(_MATH_SPAN, chunk),
        _spans(_TABULAR_SPAN, chunk),
    )
    masked = _mask(chunk, protected)
    out = []
    last = 0
    for m in pattern.finditer(masked):
        out.append(chunk[last : m.start()])
        if group is not None:
            out.append(chunk[m.start(group) : m.end(group)])
        last = m.end()
    out.append(chunk[last:])
    return "".join(out)


def _strip_chunk(chunk: str) -> str:
    # Definitions go first (their urls may contain autolink syntax), then
    # innermost inline syntax; the loop handles nesting like [a [b](u)](v).
    for _ in range(100):
        before = chunk
        chunk = _sub_keeping_group(chunk, _REF_DEF, None)
        chunk = _sub_keeping_group(chunk, _IMG_INLINE, None)
        chunk = _sub_keeping_group(chunk, _IMG_REF, None)
        chunk = _sub_keeping_group(chunk, _LINK_INLINE, 1)
        chunk = _sub_keeping_group(chunk, _LINK_REF, 1)
        chunk = _sub_keeping_group(chunk, _AUTOLINK, None)
        if chunk == before:
            break
    return chunk


# --- headings ----------------------------------------------------------------

_ATX = re.compile(r"^ {0,3}(#{1,6})(?:[ \t]+(.*))?$")
_CLOSING_HASHES = re.compile(r"[ \t]+#+[ \t]*$")
_SETEXT_UNDERLINE = re.compile(r"^ {0,3}(=+|-+)[ \t]*$")
_LIST_ITEM = re.compile(r"^(?:[-*+]|\d{1,9}[.)])[ \t]")


def unify_headings(text: str, warnings: list[str] | None = None) -> str:
    """Normalize ATX headings and convert setext headings to ATX."""
    parts = []
    for is_code, chunk in _code_groups(text):
        parts.append(chunk if is_code else _headings_chunk(chunk))
    return "\n".join(parts)


def _normalize_atx(line: str) -> str:
    m = _ATX.match(line)
    if not m or m.group(2) is None:
        return line
    body = _CLOSING_HASHES.sub("", m.group(2)).strip()
    if not body:
        return line
    return f"{m.group(1)} {body}"


def _setext_source_ok(line: str) -> bool:
    s = line.strip()
    if not s:
        return False
    if re.match(r"^(?: {4,}|\t)", line):
        return False
    if _ATX.match(line):
        return False
    if s.startswith((">", "|", "```", "~~~", "\\begin{", "\\[")):
        return False
    if _LIST_ITEM.match(s):
        return False
    if _SETEXT_UNDERLINE.match(line):
        return False
    return True


def _headings_chunk(chunk: str) -> str:
    math_line = _line_flags(chunk, _merge_intervals(
        _spans(_MATH_SPAN, chunk), _spans(_TABULAR_SPAN, chunk)
    ))
    lines = chunk.split("\n")
    out: list[str] = []
    i = 0
    while i < len(lines):
        if (
            i + 1 < len(lines)
            and not math_line[i]
            and not math_line[i + 1]
            and _SETEXT_UNDERLINE.match(lines[i + 1])
            and _setext_source_ok(lines[i])
        ):
            level = 1 if lines[i + 1].lstrip()[0] == "=" else 2
            # Route through ATX normalization so a second pass is a no-op.
            out.append(_normalize_atx("#" * level + " " + lines[i].strip()))
            i += 2
            continue
        out.append(lines[i] if math_line[i] else _normalize_atx(lines[i]))
        i += 1
    return "\n".join(out)


# --- tables ------------------------------------------------------------------

_PIPE_ROW = re.compile(r"^ {0,3}\|")
_ALIGN_CELL = re.compile(r":?-+:?")


def convert_md_tables_to_latex(text: str, warnings: list[str] | None = None) -> str:
    """Rewrite pipe tables as single-line tabular environments.

    A table is two or more consecutive pipe rows; alignment rows are dropped;
    the first kept row fixes the column count, with short rows padded and long
    rows merged into the last column. Existing tabular environments pass
    through untouched.
    """
    if warnings is None:
        warnings = []
    parts = []
    for is_code, chunk in _code_groups(text):
        parts.append(chunk if is_code else _tables_chunk(chunk, warnings))
    return "\n".join(parts)


def _split_pipe_row(line: str) -> list[str]:
    s = line.strip()
    if s.startswith("|"):
        s = s[1:]
    if s.endswith("|") and not s.endswith("\\|"):
        s = s[:-1]
    return [c.strip().replace("\\|", "|") for c in re.split(r"(?<!\\)\|", s)]


def _is_alignment_row(cells: list[str]) -> bool:
    return all(_ALIGN_CELL.fullmatch(c) for c in cells)


def _convert_run(run: list[str], warnings: list[str]) -> str | None:
    rows = [_split_pipe_row(line) for line in run]
    keep = [r for r in rows if not _is_alignment_row(r)]
    if not keep:
        warnings.append("pipe table contains only alignment rows; left unchanged")
        return None
    ncols = len(keep[0])
    fixed = []
    for r in keep:
        if len(r) < ncols:
            warnings.append(
                f"pipe table row has {len(r)} cells, expected {ncols}; padded"
            )
            r = r + [""] * (ncols - len(r))
        elif len(r) > ncols:
            warnings.append(
                f"pipe table row has {len(r)} cells, expected {ncols}; "
                "merged overflow into last column"
            )
            r = r[: ncols - 1] + [" ".join(c for c in r[ncols - 1 :] if c)]
        fixed.append([c.replace("&", r"\&") for c in r])
    body = " \\\\ ".join(" & ".join(r) for r in fixed)
    return "\\begin{tabular}{" + "c" * ncols + "} " + body + " \\end{tabular}"


def _tables_chunk(chunk: str, warnings: list[str]) -> str:
    pipe_line = _line_flags(chunk, _merge_intervals(
        _spans(_MATH_SPAN, chunk), _spans(_TABULAR_SPAN, chunk)
    ))
    lines = chunk.split("\n")
    out: list[str] = []
    i = 0
    while i < len(lines):
        if _PIPE_ROW.match(lines[i]) and not pipe_line[i]:
            j = i
            while j < len(lines) and _PIPE_ROW.match(lines[j]) and not pipe_line[j]:
                j += 1
            if j - i >= 2:
                converted = _convert_run(lines[i:j], warnings)
                if converted is None:
                    out.extend(lines[i:j])
                else:
                    out.append(converted)
                i = j
                continue
        out.append(lines[i])
        i += 1
    return "\n".join(out)


# --- pipeline ----------------------------------------------------------------

def standardize(raw: RawMarkdown | StandardMarkdown | str) -> StandardMarkdown:
    """Run the full canonicalization pipeline.

    Order matters: formula delimiters first (so later ops can protect math
    spans), then link stripping, heading unification, and table conversion.
    """
    if isinstance(raw, str):
        text = raw
    else:
        text = raw.content
    warnings: list[str] = []
    text = nfc(canonical_newlines(text))
    text = align_formula_delimiters(text, warnings)
    text = strip_links_and_images(text, warnings)
    text = unify_headings(text, warnings)
    text = convert_md_tables_to_latex(text, warnings)
    return StandardMarkdown(text, tuple(warnings))
