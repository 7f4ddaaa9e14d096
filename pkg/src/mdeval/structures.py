"""Ordered labeled trees for heading hierarchies and table grids."""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .textnorm import normalize_text

ROOT_LABEL = "\u27e8root\u27e9"
ROW_LABEL = "\u27e8row\u27e9"


@dataclass
class Node:
    """One node of an ordered labeled tree.

    ``level`` is only set on heading nodes and carries the original
    heading depth; it does not participate in equality or edit costs.
    """

    label: str
    children: list["Node"] = field(default_factory=list)
    level: int | None = None

    def size(self) -> int:
        return 1 + sum(c.size() for c in self.children)

    def to_bracket(self) -> str:
        """Serialize as ``label(child,child,...)`` with leaves bare."""
        if not self.children:
            return self.label
        inner = ",".join(c.to_bracket() for c in self.children)
        return f"{self.label}({inner})"


def preorder_labels(root: Node) -> list[str]:
    out: list[str] = []
    stack = [root]
    while stack:
        node = stack.pop()
        out.append(node.label)
        stack.extend(reversed(node.children))
    return out


def build_toc(headings: Iterable[tuple[int, str]]) -> Node:
    """Build a table-of-contents tree from ordered (level, text) pairs.

    Each heading becomes a child of the nearest preceding heading with a
    strictly smaller level, or of the virtual root when none exists.
    Labels are whitespace-normalized heading text.
    """
    root = Node(ROOT_LABEL)
    stack: list[tuple[int, Node]] = [(0, root)]
    for level, text in headings:
        node = Node(normalize_text(text), level=level)
        while stack[-1][0] >= level:
            stack.pop()
        stack[-1][1].children.append(node)
        stack.append((level, node))
    return root


_RULES = re.compile(
    r"\\(?:hline|toprule|midrule|bottomrule)\b"
    r"|\\c(?:line|midrule)(?:\([^)]*\))?\{[^}]*\}"
)
_ROW_SPLIT = re.compile(r"\\\\(?:\[[^\]]*\])?")
_CELL_SPLIT = re.compile(r"(?<!\\)&")
_BEGIN_TABULAR = re.compile(r"\\begin\{tabular\}")
_END_TABULAR = re.compile(r"\\end\{tabular\}")


def _brace_group(text: str, pos: int) -> tuple[str, int] | None:
    """Read one balanced {...} group starting at ``pos``; None if malformed."""
    if pos >= len(text) or text[pos] != "{":
        return None
    depth = 0
    for i in range(pos, len(text)):
        if text[i] == "{":
            depth += 1
        elif text[i] == "}":
            depth -= 1
            if depth == 0:
                return text[pos + 1 : i], i + 1
    return None


def _strip_column_spec(body: str) -> str:
    """Drop the leading [pos] and {colspec} arguments of a tabular body."""
    i = 0
    while i < len(body) and body[i] in " \t\n":
        i += 1
    if i < len(body) and body[i] == "[":
        close = body.find("]", i)
        if close >= 0:
            i = close + 1
            while i < len(body) and body[i] in " \t\n":
                i += 1
    if i < len(body) and body[i] == "{":
        group = _brace_group(body, i)
        if group is not None:
            return body[group[1]:]
    return body[i:]


def _flatten_nested_tabulars(body: str) -> str:
    """Replace nested tabular environments by their flattened text content."""
    while True:
        begins = [m for m in _BEGIN_TABULAR.finditer(body)]
        if not begins:
            return body
        # Innermost environment: the begin whose next tabular token is an end.
        target = None
        for m in begins:
            nxt_b = _BEGIN_TABULAR.search(body, m.end())
            nxt_e = _END_TABULAR.search(body, m.end())
            if nxt_e is not None and (nxt_b is None or nxt_e.start() < nxt_b.start()):
                target = (m, nxt_e)
                break
        if target is None:
            # Unbalanced begin; drop the marker and keep going.
            m = begins[0]
            body = body[: m.start()] + body[m.end():]
            continue
        m, e = target
        inner = _strip_column_spec(body[m.end() : e.start()])
        inner = _ROW_SPLIT.sub(" ", inner)
        inner = _CELL_SPLIT.sub(" ", inner)
        body = body[: m.start()] + inner + body[e.end():]


def _parse_cell(cell: str, warnings: list[str] | None) -> Node:
    """Parse one cell, honoring multicolumn/multirow spans."""
    text = cell
    colspan = 1
    rowspan = 1
    m = re.search(r"\\multicolumn\s*", text)
    if m:
        rest = text[m.end():]
        args = _read_groups(rest, 3)
        if args is None:
            if warnings is not None:
                warnings.append("malformed \\multicolumn arguments; using raw cell text")
        else:
            (span, _align, inner), tail = args
            try:
                colspan = max(1, int(span.strip()))
            except ValueError:
                colspan = 1
            text = text[: m.start()] + inner + tail
    m = re.search(r"\\multirow\s*", text)
    if m:
        rest = text[m.end():]
        args = _read_groups(rest, 3)
        if args is None:
            if warnings is not None:
                warnings.append("malformed \\multirow arguments; using raw cell text")
        else:
            (span, _width, inner), tail = args
            try:
                rowspan = max(1, int(span.strip()))
            except ValueError:
                rowspan = 1
            text = text[: m.start()] + inner + tail
    label = normalize_text(text.replace(r"\&", "&"))
    if colspan > 1:
        label += f"\u27e8cs={colspan}\u27e9"
    if rowspan > 1:
        label += f"\u27e8rs={rowspan}\u27e9"
    return Node(label)


def _read_groups(text: str, n: int) -> tuple[Sequence[str], str] | None:
    """Read ``n`` consecutive balanced brace groups; return (groups, tail)."""
    groups = []
    pos = 0
    for _ in range(n):
        while pos < len(text) and text[pos] in " \t\n":
            pos += 1
        got = _brace_group(text, pos)
        if got is None:
            return None
        group, pos = got
        groups.append(group)
    return groups, text[pos:]


def parse_latex_table(body: str, warnings: list[str] | None = None) -> Node:
    """Parse the body of a tabular environment into a root/row/cell tree.

    ``body`` is the text between ``\\begin{tabular}`` and ``\\end{tabular}``,
    including the column spec. Never raises: malformed constructs degrade to
    raw cell text (with a warning when ``warnings`` is given).
    """
    body = _flatten_nested_tabulars(body)
    body = _strip_column_spec(body)
    body = _RULES.sub(" ", body)
    root = Node(ROOT_LABEL)
    for raw_row in _ROW_SPLIT.split(body):
        cells = _CELL_SPLIT.split(raw_row)
        if len(cells) == 1 and not cells[0].strip():
            continue  # blank segment from a trailing \\ or rules-only row
        row = Node(ROW_LABEL)
        row.children = [_parse_cell(c, warnings) for c in cells]
        root.children.append(row)
    return root
