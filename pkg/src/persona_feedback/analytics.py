"""Interaction event log and derived workflow metrics.

Events are appended with non-decreasing timestamps; analytics are pure
functions over an immutable copy of the log. Covered metrics: persona and
feedback counts, persona revisits, inter-feedback intervals, editor/sidebar
focus timelines, and word counts of how persona definitions contributed to
generated feedback.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from enum import Enum
from importlib import resources

from .errors import NonMonotonicTimestamp, UnresolvablePersona
from .personas import (
    Persona,
    PersonaSnapshot,
    SectionKind,
    snapshot,
    snapshot_from_dict,
)


class EventKind(str, Enum):
    EDITOR_FOCUS = "editor_focus"
    SIDEBAR_FOCUS = "sidebar_focus"
    PERSONA_CREATED = "persona_created"
    PERSONA_EDITED = "persona_edited"
    PERSONA_TAB_OPENED = "persona_tab_opened"
    FEEDBACK_REQUESTED = "feedback_requested"
    FEEDBACK_FAILED = "feedback_failed"
    FEEDBACK_DELETED = "feedback_deleted"


FOCUS_KINDS = {EventKind.EDITOR_FOCUS, EventKind.SIDEBAR_FOCUS}


@dataclass(frozen=True)
class SessionEvent:
    timestamp_ms: int
    kind: EventKind
    payload: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {"timestamp_ms": self.timestamp_ms, "kind": self.kind.value, "payload": self.payload}

    @classmethod
    def from_dict(cls, doc: dict) -> "SessionEvent":
        return cls(int(doc["timestamp_ms"]), EventKind(doc["kind"]), doc.get("payload", {}))


@dataclass
class SessionLog:
    events: list[SessionEvent] = field(default_factory=list)

    @property
    def last_timestamp_ms(self) -> int | None:
        return self.events[-1].timestamp_ms if self.events else None


def record(log: SessionLog, event: SessionEvent) -> SessionLog:
    """Append one event; timestamps must be non-decreasing."""
    last = log.last_timestamp_ms
    if last is not None and event.timestamp_ms < last:
        raise NonMonotonicTimestamp(
            f"event at {event.timestamp_ms} ms is earlier than last event at {last} ms"
        )
    log.events.append(event)
    return log


def dump_log(log: SessionLog) -> str:
    """Line-delimited JSON, one event per line."""
    return "".join(json.dumps(e.to_dict(), ensure_ascii=False) + "\n" for e in log.events)


def parse_log(text: str) -> SessionLog:
    log = SessionLog()
    for line in text.splitlines():
        if line.strip():
            record(log, SessionEvent.from_dict(json.loads(line)))
    return log


@dataclass(frozen=True)
class SessionStats:
    personas_created: int
    feedbacks_requested: int
    persona_revisits: int
    mean_inter_feedback_interval_ms: float | None
    final_word_count: int | None = None


def compute_stats(log: SessionLog, final_text: str | None = None) -> SessionStats:
    """Counts and the mean gap between consecutive feedback requests.

    The interval is absent with fewer than two requests. The final word
    count is only available when the document text is supplied; the log
    itself does not carry it.
    """
    created: set[str] = set()
    revisits = 0
    feedback_times: list[int] = []
    personas_created = 0
    for e in log.events:
        if e.kind is EventKind.PERSONA_CREATED:
            personas_created += 1
            pid = e.payload.get("persona_id")
            if pid is not None:
                created.add(pid)
        elif e.kind is EventKind.PERSONA_TAB_OPENED:
            if e.payload.get("persona_id") in created:
                revisits += 1
        elif e.kind is EventKind.FEEDBACK_REQUESTED:
            feedback_times.append(e.timestamp_ms)
    interval = None
    if len(feedback_times) >= 2:
        gaps = [b - a for a, b in zip(feedback_times, feedback_times[1:])]
        interval = sum(gaps) / len(gaps)
    return SessionStats(
        personas_created=personas_created,
        feedbacks_requested=len(feedback_times),
        persona_revisits=revisits,
        mean_inter_feedback_interval_ms=interval,
        final_word_count=len(final_text.split()) if final_text is not None else None,
    )


@dataclass(frozen=True)
class FocusSegment:
    start_ms: int
    end_ms: int
    focus: str  # "editor" | "sidebar"


@dataclass(frozen=True)
class FocusTimeline:
    segments: tuple[FocusSegment, ...]
    persona_marks: tuple[int, ...]


def focus_timeline(log: SessionLog) -> FocusTimeline:
    """Alternating focus segments; each focus event opens a segment that the
    next one closes, the final segment closing at the last event in the log.
    Consecutive duplicate focus events are merged."""
    segments: list[FocusSegment] = []
    marks = tuple(
        e.timestamp_ms for e in log.events if e.kind is EventKind.PERSONA_CREATED
    )
    focus_events = [
        ("editor" if e.kind is EventKind.EDITOR_FOCUS else "sidebar", e.timestamp_ms)
        for e in log.events
        if e.kind in FOCUS_KINDS
    ]
    if not focus_events:
        return FocusTimeline((), marks)
    merged: list[tuple[str, int]] = []
    for focus, t in focus_events:
        if merged and merged[-1][0] == focus:
            continue
        merged.append((focus, t))
    session_end = log.events[-1].timestamp_ms
    for (focus, start), (_, nxt) in zip(merged, merged[1:]):
        segments.append(FocusSegment(start, nxt, focus))
    last_focus, last_start = merged[-1]
    segments.append(FocusSegment(last_start, session_end, last_focus))
    return FocusTimeline(tuple(segments), marks)


@dataclass(frozen=True)
class AttributeContribution:
    attributes: dict[str, int]
    descriptions: dict[str, int]


def _load_stopwords() -> frozenset[str]:
    text = resources.files("persona_feedback.data").joinpath("stopwords.txt").read_text()
    return frozenset(w.strip() for w in text.splitlines() if w.strip())


STOPWORDS = _load_stopwords()

_PUNCT = re.compile(r"^\W+|\W+$", re.UNICODE)


def tokenize(text: str) -> list[str]:
    """Lowercase, strip surrounding punctuation, drop stopwords."""
    words = []
    for raw in text.lower().split():
        w = _PUNCT.sub("", raw)
        if w and w not in STOPWORDS:
            words.append(w)
    return words


PersonaResolver = dict[str, "Persona | PersonaSnapshot"]


def attribute_contribution(
    log: SessionLog, personas: PersonaResolver | None = None
) -> AttributeContribution:
    """Word counts of persona definitions, weighted by feedback requests.

    Every feedback request from a persona contributes one count per word of
    each of its attributes and descriptions, using the snapshot embedded in
    the event when present, otherwise the persona supplied by the caller.
    """
    attrs: dict[str, int] = {}
    descs: dict[str, int] = {}
    personas = personas or {}
    for e in log.events:
        if e.kind is not EventKind.FEEDBACK_REQUESTED:
            continue
        snap = _resolve_snapshot(e, personas)
        for kind in SectionKind:
            for pair in snap.pairs(kind):
                for w in tokenize(pair.attribute):
                    attrs[w] = attrs.get(w, 0) + 1
                for w in tokenize(pair.description):
                    descs[w] = descs.get(w, 0) + 1
    return AttributeContribution(attrs, descs)


def _resolve_snapshot(event: SessionEvent, personas: PersonaResolver) -> PersonaSnapshot:
    embedded = event.payload.get("persona_snapshot")
    if embedded is not None:
        return snapshot_from_dict(embedded)
    pid = event.payload.get("persona_id")
    if pid in personas:
        p = personas[pid]
        return p if isinstance(p, PersonaSnapshot) else snapshot(p)
    raise UnresolvablePersona(
        f"feedback request at {event.timestamp_ms} ms has no resolvable persona ({pid!r})"
    )
