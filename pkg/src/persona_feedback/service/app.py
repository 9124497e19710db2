"""HTTP facade binding personas, feedback generation, history, and
analytics into one service."""

from __future__ import annotations

import json
import sys
import threading
import uuid

from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse

from .. import analytics, clock, history, personas
from ..engine import (
    FeedbackEngine,
    FeedbackRequest,
    MockProvider,
    RemoteProvider,
)
from ..errors import (
    CardNotFound,
    DocumentNotFound,
    DuplicateCard,
    EmptyAttribute,
    EmptySelection,
    EmptyText,
    IndexOutOfRange,
    MalformedHistory,
    MalformedPersona,
    NonMonotonicTimestamp,
    PersonaFeedbackError,
    PersonaNotFound,
    ProviderError,
    StaleSelection,
)
from ..fewshot import load_examples
from ..store import DocumentRecord, Store, canonical_text
from .config import ServiceConfig
from . import schemas

_ERROR_MAP: list[tuple[type, str, int]] = [
    (EmptySelection, "EMPTY_SELECTION", 400),
    (PersonaNotFound, "PERSONA_NOT_FOUND", 404),
    (DocumentNotFound, "DOCUMENT_NOT_FOUND", 404),
    (CardNotFound, "CARD_NOT_FOUND", 404),
    (ProviderError, "PROVIDER_ERROR", 502),
    (StaleSelection, "STALE_SELECTION", 409),
    (EmptyAttribute, "MALFORMED_REQUEST", 400),
    (IndexOutOfRange, "MALFORMED_REQUEST", 400),
    (NonMonotonicTimestamp, "MALFORMED_REQUEST", 400),
    (MalformedPersona, "MALFORMED_REQUEST", 400),
    (MalformedHistory, "MALFORMED_REQUEST", 400),
    (DuplicateCard, "MALFORMED_REQUEST", 400),
    (EmptyText, "MALFORMED_REQUEST", 400),
]


def create_app(config: ServiceConfig | None = None) -> FastAPI:
    config = config or ServiceConfig()
    store = Store(config.data_dir)
    if config.provider == "mock":
        provider = MockProvider()
    else:
        provider = RemoteProvider(config.remote_base_url)
    engine = FeedbackEngine(
        provider=provider,
        params=config.generation,
        few_shot=load_examples(config.few_shot_path),
    )
    in_flight = threading.Semaphore(config.max_in_flight)

    app = FastAPI(title="persona-feedback")
    app.state.config = config
    app.state.store = store
    app.state.engine = engine

    @app.exception_handler(PersonaFeedbackError)
    async def domain_error(request: Request, exc: PersonaFeedbackError):
        for etype, code, status in _ERROR_MAP:
            if isinstance(exc, etype):
                return JSONResponse({"code": code, "message": str(exc)}, status_code=status)
        return JSONResponse({"code": "MALFORMED_REQUEST", "message": str(exc)}, status_code=400)

    @app.exception_handler(RequestValidationError)
    async def validation_error(request: Request, exc: RequestValidationError):
        return JSONResponse(
            {"code": "MALFORMED_REQUEST", "message": str(exc.errors())}, status_code=422
        )

    @app.get("/health")
    def health():
        return {"status": "ok", "provider": config.provider}

    # --- documents --------------------------------------------------------

    @app.post("/documents", response_model=schemas.DocumentOut, status_code=201)
    def create_document(body: schemas.DocumentCreate):
        record = DocumentRecord(
            id=str(uuid.uuid4()),
            title=body.title,
            text=canonical_text(body.text),
            updated_at=clock.now(),
        )
        store.save_document(record)
        return record.to_dict()

    @app.get("/documents", response_model=list[schemas.DocumentOut])
    def list_documents():
        return [d.to_dict() for d in store.list_documents()]

    @app.get("/documents/{document_id}", response_model=schemas.DocumentOut)
    def read_document(document_id: str):
        return store.load_document(document_id).to_dict()

    @app.put("/documents/{document_id}", response_model=schemas.DocumentOut)
    def update_document(document_id: str, body: schemas.DocumentUpdate):
        with store.doc_lock(document_id):
            record = store.load_document(document_id)
            record.text = canonical_text(body.text)
            if body.title is not None:
                record.title = body.title
            record.updated_at = clock.now()
            store.save_document(record)
            return record.to_dict()

    # --- personas ---------------------------------------------------------

    @app.post("/personas", response_model=schemas.PersonaOut, status_code=201)
    def create_persona(body: schemas.PersonaCreate):
        p = personas.create_persona(body.name)
        store.save_persona(p)
        return schemas.PersonaOut.from_persona(p)

    @app.get("/personas", response_model=list[schemas.PersonaOut])
    def list_personas():
        return [schemas.PersonaOut.from_persona(p) for p in store.list_personas()]

    @app.get("/personas/{persona_id}", response_model=schemas.PersonaOut)
    def read_persona(persona_id: str):
        return schemas.PersonaOut.from_persona(store.load_persona(persona_id))

    @app.put("/personas/{persona_id}", response_model=schemas.PersonaOut)
    def rename_persona(persona_id: str, body: schemas.PersonaRename):
        with store.persona_lock(persona_id):
            p = store.load_persona(persona_id)
            personas.rename(p, body.name)
            store.save_persona(p)
            return schemas.PersonaOut.from_persona(p)

    @app.delete("/personas/{persona_id}", status_code=204)
    def delete_persona(persona_id: str):
        with store.persona_lock(persona_id):
            store.delete_persona(persona_id)

    def _section(section: str) -> personas.SectionKind:
        return personas.SectionKind.from_wire(section)

    @app.post("/personas/{persona_id}/sections/{section}/pairs", response_model=schemas.PersonaOut)
    def add_pair(persona_id: str, section: str, body: schemas.PairIn):
        with store.persona_lock(persona_id):
            p = store.load_persona(persona_id)
            personas.add_pair(p, _section(section), personas.AttributePair(body.attribute, body.description))
            store.save_persona(p)
            return schemas.PersonaOut.from_persona(p)

    @app.put("/personas/{persona_id}/sections/{section}/pairs/{index}", response_model=schemas.PersonaOut)
    def edit_pair(persona_id: str, section: str, index: int, body: schemas.PairIn):
        with store.persona_lock(persona_id):
            p = store.load_persona(persona_id)
            personas.edit_pair(p, _section(section), index, personas.AttributePair(body.attribute, body.description))
            store.save_persona(p)
            return schemas.PersonaOut.from_persona(p)

    @app.delete("/personas/{persona_id}/sections/{section}/pairs/{index}", response_model=schemas.PersonaOut)
    def remove_pair(persona_id: str, section: str, index: int):
        with store.persona_lock(persona_id):
            p = store.load_persona(persona_id)
            personas.remove_pair(p, _section(section), index)
            store.save_persona(p)
            return schemas.PersonaOut.from_persona(p)

    @app.get("/guidance", response_model=list[schemas.SectionGuidanceOut])
    def guidance():
        return [
            schemas.SectionGuidanceOut(
                section=kind.wire_name,
                description=g.description,
                example_pairs=[
                    schemas.PairOut(attribute=pair.attribute, description=pair.description)
                    for pair in g.example_pairs
                ],
            )
            for kind, g in personas.SECTION_GUIDANCE.items()
        ]

    # --- feedback ---------------------------------------------------------

    def _resolve_selection(record: DocumentRecord, sel: schemas.Selection) -> str:
        if sel.start < 0 or sel.end > len(record.text) or sel.start > sel.end:
            raise StaleSelection(
                f"selection [{sel.start}, {sel.end}) does not fit document "
                f"of length {len(record.text)}"
            )
        selected = record.text[sel.start:sel.end]
        if not selected.strip():
            raise EmptySelection("selection is empty")
        return selected

    def _append_event(document_id: str, kind: analytics.EventKind, payload: dict) -> None:
        log = store.load_log(document_id)
        last = log.last_timestamp_ms or 0
        ts = max(clock.to_epoch_ms(clock.now()), last)
        store.append_events(document_id, [analytics.SessionEvent(ts, kind, payload)])

    @app.post("/feedback", response_model=schemas.CardOut, status_code=201)
    def request_feedback(body: schemas.FeedbackRequestIn):
        with store.doc_lock(body.document_id):
            record = store.load_document(body.document_id)
            selected = _resolve_selection(record, body.selection)
            persona = store.load_persona(body.persona_id)
            req = FeedbackRequest(
                document_id=body.document_id,
                persona_id=body.persona_id,
                start=body.selection.start,
                end=body.selection.end,
                selected_text=selected,
            )
            condense = config.condense if body.condense is None else body.condense
            if config.dump_prompt:
                bundle = engine.assemble_bundle(selected, persona)
                print(json.dumps(bundle.to_wire(), ensure_ascii=False, indent=2), file=sys.stderr)
            try:
                with in_flight:
                    card = engine.generate_feedback(req, persona, condense_pass=condense)
            except ProviderError as exc:
                _append_event(
                    body.document_id,
                    analytics.EventKind.FEEDBACK_FAILED,
                    {"persona_id": body.persona_id, "error": str(exc)},
                )
                raise
            h = store.load_history(body.document_id)
            history.append(h, card)
            store.save_history(h)
            _append_event(
                body.document_id,
                analytics.EventKind.FEEDBACK_REQUESTED,
                {
                    "persona_id": body.persona_id,
                    "card_id": card.id,
                    "persona_snapshot": personas.snapshot_to_dict(card.persona),
                },
            )
            return schemas.CardOut.from_card(card)

    @app.get("/documents/{document_id}/history", response_model=list[schemas.CardOut])
    def list_history(document_id: str):
        store.load_document(document_id)
        h = store.load_history(document_id)
        return [schemas.CardOut.from_card(c) for c in h.cards]

    @app.delete("/documents/{document_id}/history/{card_id}", status_code=204)
    def delete_card(document_id: str, card_id: str):
        with store.doc_lock(document_id):
            h = store.load_history(document_id)
            history.delete(h, card_id)
            store.save_history(h)
            _append_event(
                document_id, analytics.EventKind.FEEDBACK_DELETED, {"card_id": card_id}
            )

    @app.get("/documents/{document_id}/history/{card_id}/context", response_model=schemas.ContextOut)
    def card_context(document_id: str, card_id: str):
        record = store.load_document(document_id)
        card = history.get_card(store.load_history(document_id), card_id)
        return schemas.ContextOut(
            start=card.context.start,
            end=card.context.end,
            selected_text=card.context.selected_text,
            stale=history.context_is_stale(card, record.text),
        )

    # --- analytics --------------------------------------------------------

    @app.post("/documents/{document_id}/events", status_code=204)
    def post_events(document_id: str, body: schemas.EventBatchIn):
        store.load_document(document_id)
        events = []
        for e in body.events:
            try:
                kind = analytics.EventKind(e.kind)
            except ValueError:
                raise MalformedHistory(f"unknown event kind: {e.kind!r}") from None
            events.append(analytics.SessionEvent(e.timestamp_ms, kind, e.payload))
        with store.doc_lock(document_id):
            store.append_events(document_id, events)

    @app.get("/documents/{document_id}/stats", response_model=schemas.StatsOut)
    def get_stats(document_id: str):
        record = store.load_document(document_id)
        stats = analytics.compute_stats(store.load_log(document_id), final_text=record.text)
        return schemas.StatsOut(**stats.__dict__)

    @app.get("/documents/{document_id}/timeline", response_model=schemas.TimelineOut)
    def get_timeline(document_id: str):
        store.load_document(document_id)
        timeline = analytics.focus_timeline(store.load_log(document_id))
        return schemas.TimelineOut(
            segments=[schemas.FocusSegmentOut(**s.__dict__) for s in timeline.segments],
            persona_marks=list(timeline.persona_marks),
        )

    # --- debug ------------------------------------------------------------

    @app.post("/debug/prompt", response_model=schemas.BundleOut)
    def debug_prompt(body: schemas.PromptDebugIn):
        record = store.load_document(body.document_id)
        selected = _resolve_selection(record, body.selection)
        persona = store.load_persona(body.persona_id)
        bundle = engine.assemble_bundle(selected, persona)
        return schemas.BundleOut(messages=[schemas.MessageOut(**m) for m in bundle.to_wire()])

    return app
