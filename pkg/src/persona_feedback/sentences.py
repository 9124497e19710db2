"""Shared sentence boundary rule.

A sentence is a maximal run ending in '.', '!' or '?' followed by
whitespace or end of text. Trailing text without a terminator counts as a
final sentence. Used by card previews and the feedback structure analyzer
so both agree on boundaries.
"""

from __future__ import annotations

import re

_BOUNDARY = re.compile(r"[.!?]+(?=\s|$)")


def sentence_spans(text: str) -> list[tuple[int, int]]:
    """Character spans of sentences, in order. Spans start at the first
    non-whitespace character after the previous sentence."""
    spans: list[tuple[int, int]] = []
    pos = 0
    n = len(text)
    while pos < n:
        while pos < n and text[pos].isspace():
            pos += 1
        if pos >= n:
            break
        m = _BOUNDARY.search(text, pos)
        end = m.end() if m else n
        spans.append((pos, end))
        pos = end
    return spans


def split_sentences(text: str) -> list[str]:
    return [text[a:b] for a, b in sentence_spans(text)]
