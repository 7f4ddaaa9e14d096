"""Text canonicalization and tokenization shared by the scoring pipeline."""

from __future__ import annotations

import re
import unicodedata

_WS_RUN = re.compile(r"\s+")
# Maximal runs of Unicode letters and digits; \w minus underscore.
_WORD = re.compile(r"[^\W_]+", re.UNICODE)


def canonical_newlines(text: str) -> str:
    """Rewrite CRLF and lone CR to LF and drop a leading BOM."""
    if text.startswith("﻿"):
        text = text[1:]
    return text.replace("\r\n", "\n").replace("\r", "\n")


def nfc(text: str) -> str:
    return unicodedata.normalize("NFC", text)


def normalize_text(text: str) -> str:
    """NFC-normalize, collapse whitespace runs to single spaces, and trim."""
    return _WS_RUN.sub(" ", nfc(text)).strip()


def tokenize(text: str) -> list[str]:
    """Lowercased maximal letter/digit runs; punctuation and symbols dropped."""
    return [t.lower() for t in _WORD.findall(nfc(text))]
