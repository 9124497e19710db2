"""Pydantic request/response models for the HTTP API."""

from __future__ import annotations

from pydantic import BaseModel, Field

from .. import clock, history, personas


class ErrorBody(BaseModel):
    code: str
    message: str


class PairIn(BaseModel):
    attribute: str
    description: str = ""


class PairOut(BaseModel):
    attribute: str
    description: str


class PersonaCreate(BaseModel):
    name: str = ""


class PersonaRename(BaseModel):
    name: str


class PersonaOut(BaseModel):
    id: str
    name: str
    created_at: str
    updated_at: str
    sections: dict[str, list[PairOut]]

    @classmethod
    def from_persona(cls, p: personas.Persona) -> "PersonaOut":
        doc = personas.persona_to_dict(p)
        return cls(**doc)


class SectionGuidanceOut(BaseModel):
    section: str
    description: str
    example_pairs: list[PairOut]


class DocumentCreate(BaseModel):
    title: str = ""
    text: str = ""


class DocumentUpdate(BaseModel):
    title: str | None = None
    text: str


class DocumentOut(BaseModel):
    id: str
    title: str
    text: str
    updated_at: str


class Selection(BaseModel):
    start: int
    end: int


class FeedbackRequestIn(BaseModel):
    document_id: str
    persona_id: str
    selection: Selection
    condense: bool | None = None


class FeedbackResultOut(BaseModel):
    text: str
    word_count: int
    over_limit: bool
    latency_ms: int
    condensed: bool


class ContextOut(BaseModel):
    start: int
    end: int
    selected_text: str
    stale: bool | None = None


class CardOut(BaseModel):
    id: str
    persona_name: str
    persona: dict
    context: ContextOut
    feedback: FeedbackResultOut
    created_at: str
    preview: str

    @classmethod
    def from_card(cls, card: history.FeedbackCard) -> "CardOut":
        doc = history.card_to_dict(card)
        doc["preview"] = history.preview(card)
        return cls(**doc)


class PromptDebugIn(BaseModel):
    document_id: str
    persona_id: str
    selection: Selection


class MessageOut(BaseModel):
    role: str
    content: str


class BundleOut(BaseModel):
    messages: list[MessageOut]


class EventIn(BaseModel):
    timestamp_ms: int
    kind: str
    payload: dict = Field(default_factory=dict)


class EventBatchIn(BaseModel):
    events: list[EventIn]


class StatsOut(BaseModel):
    personas_created: int
    feedbacks_requested: int
    persona_revisits: int
    mean_inter_feedback_interval_ms: float | None
    final_word_count: int | None


class FocusSegmentOut(BaseModel):
    start_ms: int
    end_ms: int
    focus: str


class TimelineOut(BaseModel):
    segments: list[FocusSegmentOut]
    persona_marks: list[int]
