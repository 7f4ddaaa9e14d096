"""Deterministic messy-Markdown generator for standardizer/segmenter fuzzing.

Produces documents mixing every dialect feature the standardizer handles,
including malformed fragments (odd dollars, unbalanced environments, ragged
tables), so idempotence and partition properties get exercised on ugly input.
"""

from __future__ import annotations

import random

_WORDS = (
    "alpha", "beta", "gamma", "delta", "sigma", "omega", "node", "edge",
    "cell", "row", "line", "text", "value", "index", "count", "total",
)


def _words(rng: random.Random, lo: int = 2, hi: int = 6) -> str:
    return " ".join(rng.choice(_WORDS) for _ in range(rng.randint(lo, hi)))


def _sentence(rng):
    return _words(rng, 4, 9).capitalize() + "."


def _inline_dollars(rng):
    return f"{_sentence(rng)} ${rng.choice(_WORDS)}+{rng.choice(_WORDS)}$ {_sentence(rng)}"


def _odd_dollar(rng):
    return f"price is ${rng.randint(1, 99)} for {_words(rng)}"


def _escaped_dollar(rng):
    return f"cost \\${rng.randint(1, 99)} {_words(rng)}"


def _display_dollars(rng):
    if rng.random() < 0.5:
        return f"$${rng.choice(_WORDS)}^2 = {rng.choice(_WORDS)}$$"
    return f"$$\n{rng.choice(_WORDS)} + {rng.choice(_WORDS)}\n$$"


def _lone_display(rng):
    return "$$"


def _environment(rng):
    env = rng.choice(("equation", "equation*", "gather", "multline"))
    body = f"{rng.choice(_WORDS)} = {rng.choice(_WORDS)}"
    if rng.random() < 0.15:
        return f"\\begin{{{env}}}{body}"  # unbalanced
    return f"\\begin{{{env}}}{body}\\end{{{env}}}"


def _canonical_math(rng):
    if rng.random() < 0.5:
        return f"\\[{rng.choice(_WORDS)}_{{{rng.randint(0,9)}}}\\]"
    return f"text \\({rng.choice(_WORDS)}\\) more"


def _setext(rng):
    return f"{_words(rng).title()}\n{rng.choice('=-') * rng.randint(3, 8)}"


def _atx(rng):
    style = rng.random()
    if style < 0.3:
        return f"{'#' * rng.randint(1, 6)}   {_words(rng).title()}   ###"
    if style < 0.5:
        return f"  {'#' * rng.randint(1, 6)} {_words(rng).title()}"
    if style < 0.65:
        return f"#{_words(rng, 1, 1)}"  # no space: not a heading
    if style < 0.8:
        return f"####### {_words(rng)}"  # too deep: not a heading
    return f"{'#' * rng.randint(1, 6)}\t{_words(rng).title()}"


def _link(rng):
    style = rng.random()
    word = rng.choice(_WORDS)
    if style < 0.3:
        return f"see [{word}](https://example.org/{word}) here"
    if style < 0.5:
        return f"a [b [{word}](u1)](u2) c"
    if style < 0.65:
        return f"![{word}](img/{word}.png) and [{word}][ref]"
    if style < 0.8:
        return f"[{word}][]\n\n[{word}]: https://example.org/{word}"
    return f"go <https://example.org/{word}> now"


def _pipe_table(rng):
    cols = rng.randint(1, 4)
    lines = ["|" + "|".join(rng.choice(_WORDS) for _ in range(cols)) + "|"]
    if rng.random() < 0.7:
        lines.append("|" + "|".join("-" * rng.randint(1, 3) for _ in range(cols)) + "|")
    for _ in range(rng.randint(1, 3)):
        width = cols + rng.choice((-1, 0, 0, 0, 1))
        width = max(1, width)
        lines.append("|" + "|".join(rng.choice(_WORDS) for _ in range(width)) + "|")
    return "\n".join(lines)


def _single_pipe(rng):
    return f"|{_words(rng, 1, 2)}|"


def _latex_table(rng):
    return (
        "\\begin{tabular}{cc} "
        f"{rng.choice(_WORDS)} & {rng.choice(_WORDS)} \\\\ "
        f"{rng.choice(_WORDS)} & {rng.choice(_WORDS)} \\end{{tabular}}"
    )


def _fence(rng):
    mark = rng.choice(("```", "~~~"))
    return f"{mark}\n$$ {rng.choice(_WORDS)} $$\n|{rng.choice(_WORDS)}|\n# {rng.choice(_WORDS)}\n{mark}"


def _inline_code(rng):
    return f"run `$ {rng.choice(_WORDS)} | {rng.choice(_WORDS)}$` and `x_{rng.randint(0,9)}`"


def _list_item(rng):
    return f"- {_words(rng)}\n- {_words(rng)}"


def _quote(rng):
    return f"> {_sentence(rng)}"


def _thematic(rng):
    return "---"


def _indented(rng):
    return f"    {_words(rng)}"


def _nfd(rng):
    return f"café {_words(rng)} über"


def _footnote(rng):
    return f"claim[^{rng.randint(1,9)}] {_words(rng)}\n\n[^{rng.randint(1,9)}]: {_sentence(rng)}"


_ELEMENTS = (
    _sentence, _sentence, _sentence,
    _inline_dollars, _odd_dollar, _escaped_dollar,
    _display_dollars, _lone_display, _environment, _canonical_math,
    _setext, _atx,
    _link,
    _pipe_table, _single_pipe, _latex_table,
    _fence, _inline_code,
    _list_item, _quote, _thematic, _indented, _nfd, _footnote,
)


def messy_document(rng: random.Random) -> str:
    parts = [rng.choice(_ELEMENTS)(rng) for _ in range(rng.randint(6, 18))]
    out = [parts[0]]
    for part in parts[1:]:
        out.append("\n" if rng.random() < 0.15 else "\n\n")
        out.append(part)
    if rng.random() < 0.3:
        out.append("\n")
    return "".join(out)
