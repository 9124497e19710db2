"""Rule-based segmentation and labeling of generated feedback texts.

Generated feedback tends to follow a recurring shape: an opening where the
persona introduces itself ("As a reviewer, ..."), a main part with advice,
and a closing summary ("Overall, the text snippet..."). This module is a
deliberately simple lexical approximation of that scheme; the fixture
corpus in the test suite is its contract.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum

from .errors import EmptyText
from .history import FeedbackCard, WORD_LIMIT, count_words
from .sentences import sentence_spans

Span = tuple[int, int]


@dataclass(frozen=True)
class FeedbackBlocks:
    opening: Span | None
    main: Span
    summary: Span | None


class MainPartLabel(str, Enum):
    MORE_EXAMPLES = "more_examples"
    TOPIC_CONTENT = "topic_content"
    CLARIFICATION = "clarification"
    MORE_DETAILS = "more_details"
    STYLE_IMPROVEMENT = "style_improvement"
    CONCRETE_SUGGESTION = "concrete_suggestion"
    POSITIVE_REMARK = "positive_remark"


_OPENING_RE = re.compile(r"^as an?\b", re.IGNORECASE)
_SUMMARY_MARKERS = ("overall", "in summary", "in conclusion")


def segment(text: str) -> FeedbackBlocks:
    """Split a feedback text into opening / main / summary spans.

    The opening is the first sentence when the text starts with "As a" or
    "As an". The summary starts at the last sentence beginning with
    "Overall", "In summary", or "In conclusion" and runs to the end.
    """
    if not text.strip():
        raise EmptyText("cannot segment empty feedback text")
    spans = sentence_spans(text)

    opening: Span | None = None
    first_main = 0
    if _OPENING_RE.match(text[spans[0][0]:spans[0][1]]):
        opening = spans[0]
        first_main = 1

    summary: Span | None = None
    last_main = len(spans)
    for i in range(len(spans) - 1, first_main - 1, -1):
        sentence = text[spans[i][0]:spans[i][1]].lower()
        if sentence.startswith(_SUMMARY_MARKERS):
            summary = (spans[i][0], spans[-1][1])
            last_main = i
            break

    if first_main < last_main:
        main = (spans[first_main][0], spans[last_main - 1][1])
    else:
        # nothing between the boundaries: empty main at the junction
        main = (spans[first_main][0] if first_main < len(spans) else spans[-1][1],) * 2
    return FeedbackBlocks(opening=opening, main=main, summary=summary)


_STYLE_PHRASES = (
    "shorter sentences",
    "simpler",
    "easier language",
    "terminology",
    "writing style",
)
_POSITIVE_PHRASES = ("i value", "well written", "clear and", "good job", "strong")


def label_main(text: str) -> set[MainPartLabel]:
    """Assign advice-type labels to the main part via lexical markers."""
    labels: set[MainPartLabel] = set()
    low = text.lower()
    sentences = [low[a:b] for a, b in sentence_spans(low)]

    if "for example, instead of" in low or "could write" in low:
        labels.add(MainPartLabel.CONCRETE_SUGGESTION)
    for s in sentences:
        for m in re.finditer(r"\bexamples?\b", s):
            if re.search(r"\b(add|more|include|including|adding)\b", s[: m.start()]):
                labels.add(MainPartLabel.MORE_EXAMPLES)
                break
    if "clarif" in low:
        labels.add(MainPartLabel.CLARIFICATION)
    for s in sentences:
        if "detail" in s and re.search(r"\b(more|add|adding)\b", s):
            labels.add(MainPartLabel.MORE_DETAILS)
            break
    if any(p in low for p in _STYLE_PHRASES):
        labels.add(MainPartLabel.STYLE_IMPROVEMENT)
    if any(p in low for p in _POSITIVE_PHRASES):
        labels.add(MainPartLabel.POSITIVE_REMARK)
    for s in sentences:
        if re.search(r"\badd(?:ing)?\b[^.!?]*\b(?:about|on)\b", s):
            labels.add(MainPartLabel.TOPIC_CONTENT)
            break
    return labels


@dataclass(frozen=True)
class CardAnnotation:
    card_id: str
    blocks: FeedbackBlocks
    labels: frozenset[MainPartLabel]
    word_count: int
    over_limit: bool


@dataclass(frozen=True)
class CorpusReport:
    annotations: tuple[CardAnnotation, ...]
    label_counts: dict[str, int]
    opening_share: float
    summary_share: float
    word_counts: tuple[int, ...]
    over_limit_rate: float


def analyze_text(text: str, card_id: str = "") -> CardAnnotation:
    blocks = segment(text)
    main_text = text[blocks.main[0]:blocks.main[1]]
    wc = count_words(text)
    return CardAnnotation(
        card_id=card_id,
        blocks=blocks,
        labels=frozenset(label_main(main_text)),
        word_count=wc,
        over_limit=wc > WORD_LIMIT,
    )


def analyze_corpus(cards: list[FeedbackCard]) -> CorpusReport:
    """Per-card blocks and labels plus aggregate shares and counts."""
    annotations = tuple(analyze_text(c.feedback.text, c.id) for c in cards)
    label_counts = {label.value: 0 for label in MainPartLabel}
    for a in annotations:
        for label in a.labels:
            label_counts[label.value] += 1
    n = len(annotations)
    return CorpusReport(
        annotations=annotations,
        label_counts=label_counts,
        opening_share=(sum(1 for a in annotations if a.blocks.opening) / n) if n else 0.0,
        summary_share=(sum(1 for a in annotations if a.blocks.summary) / n) if n else 0.0,
        word_counts=tuple(a.word_count for a in annotations),
        over_limit_rate=(sum(1 for a in annotations if a.over_limit) / n) if n else 0.0,
    )


def report_to_dict(report: CorpusReport) -> dict:
    return {
        "cards": [
            {
                "card_id": a.card_id,
                "opening": list(a.blocks.opening) if a.blocks.opening else None,
                "main": list(a.blocks.main),
                "summary": list(a.blocks.summary) if a.blocks.summary else None,
                "labels": sorted(label.value for label in a.labels),
                "word_count": a.word_count,
                "over_limit": a.over_limit,
            }
            for a in report.annotations
        ],
        "label_counts": report.label_counts,
        "opening_share": report.opening_share,
        "summary_share": report.summary_share,
        "over_limit_rate": report.over_limit_rate,
    }
