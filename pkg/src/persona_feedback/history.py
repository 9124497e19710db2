"""Feedback cards and per-document history.

Cards are immutable records of one generation: the persona snapshot, the
selection context, and the generated text. The history keeps them ordered
newest-first.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from datetime import datetime

from . import clock
from .errors import CardNotFound, DuplicateCard, MalformedHistory
from .personas import PersonaSnapshot, snapshot_from_dict, snapshot_to_dict
from .sentences import sentence_spans

WORD_LIMIT = 200
DEFAULT_PREVIEW_SENTENCES = 3


def count_words(text: str) -> int:
    """Number of maximal non-whitespace runs."""
    return len(text.split())


@dataclass(frozen=True)
class FeedbackResult:
    """The generated text plus its verbosity measurements."""

    text: str
    word_count: int
    over_limit: bool
    latency_ms: int
    condensed: bool

    @classmethod
    def from_text(cls, text: str, latency_ms: int = 0, condensed: bool = False) -> "FeedbackResult":
        wc = count_words(text)
        return cls(
            text=text,
            word_count=wc,
            over_limit=wc > WORD_LIMIT,
            latency_ms=latency_ms,
            condensed=condensed,
        )


@dataclass(frozen=True)
class SelectionContext:
    """Verbatim copy of the selected span at request time."""

    start: int
    end: int
    selected_text: str


@dataclass(frozen=True)
class FeedbackCard:
    id: str
    persona_name: str
    persona: PersonaSnapshot
    context: SelectionContext
    feedback: FeedbackResult
    created_at: datetime


def sort_key(card: FeedbackCard):
    # newest first; ties broken by id, lexicographic descending
    return (clock.to_epoch_ms(card.created_at), card.id)


@dataclass
class History:
    document_id: str
    cards: list[FeedbackCard] = field(default_factory=list)


def append(h: History, card: FeedbackCard) -> History:
    """Insert a card, keeping the list sorted newest-first."""
    if any(c.id == card.id for c in h.cards):
        raise DuplicateCard(f"card {card.id} already in history")
    h.cards.append(card)
    h.cards.sort(key=sort_key, reverse=True)
    return h


def delete(h: History, card_id: str) -> History:
    kept = [c for c in h.cards if c.id != card_id]
    if len(kept) == len(h.cards):
        raise CardNotFound(f"no card with id {card_id}")
    h.cards = kept
    return h


def get_card(h: History, card_id: str) -> FeedbackCard:
    for c in h.cards:
        if c.id == card_id:
            return c
    raise CardNotFound(f"no card with id {card_id}")


def preview(card: FeedbackCard, limit: int = DEFAULT_PREVIEW_SENTENCES) -> str:
    """First `limit` sentences of the feedback text; the whole text when it
    has fewer sentences."""
    spans = sentence_spans(card.feedback.text)
    if len(spans) <= limit:
        return card.feedback.text
    return card.feedback.text[: spans[limit - 1][1]]


# --- serialization ---------------------------------------------------------

def card_to_dict(card: FeedbackCard) -> dict:
    return {
        "id": card.id,
        "persona_name": card.persona_name,
        "persona": snapshot_to_dict(card.persona),
        "context": {
            "start": card.context.start,
            "end": card.context.end,
            "selected_text": card.context.selected_text,
        },
        "feedback": {
            "text": card.feedback.text,
            "word_count": card.feedback.word_count,
            "over_limit": card.feedback.over_limit,
            "latency_ms": card.feedback.latency_ms,
            "condensed": card.feedback.condensed,
        },
        "created_at": clock.to_rfc3339(card.created_at),
    }


def card_from_dict(doc: dict) -> FeedbackCard:
    try:
        ctx = doc["context"]
        fb = doc["feedback"]
        return FeedbackCard(
            id=str(doc["id"]),
            persona_name=str(doc["persona_name"]),
            persona=snapshot_from_dict(doc["persona"]),
            context=SelectionContext(int(ctx["start"]), int(ctx["end"]), str(ctx["selected_text"])),
            feedback=FeedbackResult(
                text=str(fb["text"]),
                word_count=int(fb["word_count"]),
                over_limit=bool(fb["over_limit"]),
                latency_ms=int(fb["latency_ms"]),
                condensed=bool(fb["condensed"]),
            ),
            created_at=clock.from_rfc3339(doc["created_at"]),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise MalformedHistory(f"bad card document: {exc}") from exc


def save(h: History) -> str:
    doc = {"document_id": h.document_id, "cards": [card_to_dict(c) for c in h.cards]}
    return json.dumps(doc, ensure_ascii=False, indent=2)


def load(text: str) -> History:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MalformedHistory(
            f"invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}"
        ) from exc
    if not isinstance(doc, dict) or "cards" not in doc:
        raise MalformedHistory("history document must be an object with a cards array")
    h = History(document_id=str(doc.get("document_id", "")))
    h.cards = [card_from_dict(c) for c in doc["cards"]]
    h.cards.sort(key=sort_key, reverse=True)
    return h


def context_is_stale(card: FeedbackCard, document_text: str) -> bool:
    """True when the stored selection no longer matches the document."""
    start, end = card.context.start, card.context.end
    if end > len(document_text):
        return True
    return document_text[start:end] != card.context.selected_text
