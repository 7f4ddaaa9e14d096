"""Deterministic synthetic documents in the canonical dialect.

Used by the test suite and handy for demos: documents come out already
standardized (standardize() is the identity on them), with headings,
paragraphs, both formula kinds, and tables.
"""

from __future__ import annotations

import random
from pathlib import Path

_WORDS = (
    "analysis", "baseline", "channel", "dataset", "decoder", "density",
    "entropy", "feature", "filter", "gradient", "grid", "kernel", "label",
    "layer", "layout", "lattice", "margin", "matrix", "metric", "model",
    "module", "noise", "output", "page", "panel", "parser", "pattern",
    "pipeline", "query", "region", "result", "sample", "scale", "score",
    "segment", "signal", "source", "span", "stream", "table", "target",
    "token", "trace", "vector", "weight", "window",
)

_VARS = "abcdefghkmnpqrstuvwxyz"


def _sentence(rng: random.Random) -> str:
    words = [rng.choice(_WORDS) for _ in range(rng.randint(6, 14))]
    words[0] = words[0].capitalize()
    return " ".join(words) + "."


def _formula(rng: random.Random) -> str:
    a, b, c = (rng.choice(_VARS) for _ in range(3))
    forms = (
        f"{a}_{{{rng.randint(0, 9)}}} = {b} + {c}",
        f"\\frac{{{a}}}{{{b}}} \\le {c}",
        f"\\sum_{{{a}=1}}^{{n}} {b}_{a} {c}",
        f"{a}^{{{rng.randint(2, 4)}}} - {b} {c}",
    )
    return rng.choice(forms)


def _paragraph(rng: random.Random) -> str:
    pieces = [_sentence(rng) for _ in range(rng.randint(2, 4))]
    if rng.random() < 0.35:
        pieces.insert(rng.randrange(len(pieces) + 1), f"\\({_formula(rng)}\\)")
    return " ".join(pieces)


def _table(rng: random.Random) -> str:
    ncols = rng.randint(2, 4)
    nrows = rng.randint(2, 4)
    rows = []
    for _ in range(nrows):
        rows.append(" & ".join(rng.choice(_WORDS) for _ in range(ncols)))
    body = " \\\\ ".join(rows)
    return "\\begin{tabular}{" + "c" * ncols + "} " + body + " \\end{tabular}"


def make_document(rng: random.Random) -> str:
    """One canonical-dialect document of roughly two pages.

    Guaranteed inventory: headings to depth 3, at least one embedded and one
    isolated formula, at least two tables, and several paragraphs; plus
    random extras on top.
    """
    blocks = [f"# {rng.choice(_WORDS).capitalize()} {rng.choice(_WORDS)}"]
    blocks.append(_paragraph(rng))
    for s in range(rng.randint(3, 4)):
        blocks.append(f"## {rng.choice(_WORDS).capitalize()} {rng.choice(_WORDS)}")
        first = _paragraph(rng)
        if s == 0:
            first += f" \\({_formula(rng)}\\)"
        blocks.append(first)
        if s == 0:
            blocks.append(f"### {rng.choice(_WORDS).capitalize()}")
            blocks.append(_paragraph(rng))
            blocks.append(f"\\[{_formula(rng)}\\]")
        if s < 2:
            blocks.append(_table(rng))
        for _ in range(rng.randint(2, 3)):
            blocks.append(_paragraph(rng))
            if rng.random() < 0.3:
                blocks.append(f"\\[{_formula(rng)}\\]")
            if rng.random() < 0.2:
                blocks.append(_table(rng))
    return "\n\n".join(blocks) + "\n"


def perturb(rng: random.Random, text: str) -> str:
    """A degraded rendering: drop, swap, or lightly edit a few blocks."""
    blocks = text.rstrip("\n").split("\n\n")
    if len(blocks) > 3 and rng.random() < 0.6:
        del blocks[rng.randrange(1, len(blocks))]
    if len(blocks) > 3 and rng.random() < 0.6:
        i = rng.randrange(1, len(blocks) - 1)
        blocks[i], blocks[i + 1] = blocks[i + 1], blocks[i]
    if rng.random() < 0.7:
        i = rng.randrange(len(blocks))
        blocks[i] = blocks[i].replace(" the ", " teh ", 1)
        words = blocks[i].split(" ")
        if len(words) > 4 and not blocks[i].startswith("\\begin"):
            del words[rng.randrange(1, len(words))]
            blocks[i] = " ".join(words)
    return "\n\n".join(blocks) + "\n"


def make_corpus(
    directory: Path | str, n: int, seed: int = 0, degrade: bool = False
) -> list[Path]:
    """Write n documents doc000.md..; with degrade=True each is perturbed."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    paths = []
    for i in range(n):
        rng = random.Random(seed * 1_000_003 + i)
        text = make_document(rng)
        if degrade:
            text = perturb(rng, text)
        path = directory / f"doc{i:03d}.md"
        path.write_text(text, encoding="utf-8")
        paths.append(path)
    return paths
