"""File-backed state for the service.

Layout: one directory per document holding the document text, its feedback
history, and its event log; personas stored globally. Writes go through a
temp file plus atomic rename so a crash never leaves half-written state.
"""

from __future__ import annotations

import json
import os
import threading
import uuid
from collections import defaultdict
from dataclasses import dataclass
from datetime import datetime
from pathlib import Path

from . import analytics, clock, history, personas
from .errors import DocumentNotFound, PersonaNotFound


def canonical_text(text: str) -> str:
    """Normalize line separators to a single newline."""
    return text.replace("\r\n", "\n").replace("\r", "\n")


@dataclass
class DocumentRecord:
    id: str
    title: str
    text: str
    updated_at: datetime

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "title": self.title,
            "text": self.text,
            "updated_at": clock.to_rfc3339(self.updated_at),
        }

    @classmethod
    def from_dict(cls, doc: dict) -> "DocumentRecord":
        return cls(
            id=str(doc["id"]),
            title=str(doc["title"]),
            text=str(doc["text"]),
            updated_at=clock.from_rfc3339(doc["updated_at"]),
        )


def _atomic_write(path: Path, content: str) -> None:
    tmp = path.with_suffix(path.suffix + f".tmp-{uuid.uuid4().hex}")
    tmp.write_text(content, encoding="utf-8")
    os.replace(tmp, path)


class Store:
    """All persistent state, with per-document and per-persona locking."""

    def __init__(self, data_dir: str | Path):
        self.root = Path(data_dir)
        (self.root / "personas").mkdir(parents=True, exist_ok=True)
        (self.root / "documents").mkdir(parents=True, exist_ok=True)
        self._doc_locks: dict[str, threading.Lock] = defaultdict(threading.Lock)
        self._persona_locks: dict[str, threading.Lock] = defaultdict(threading.Lock)
        self._registry_lock = threading.Lock()

    def doc_lock(self, document_id: str) -> threading.Lock:
        with self._registry_lock:
            return self._doc_locks[document_id]

    def persona_lock(self, persona_id: str) -> threading.Lock:
        with self._registry_lock:
            return self._persona_locks[persona_id]

    # --- personas ---------------------------------------------------------

    def _persona_path(self, persona_id: str) -> Path:
        return self.root / "personas" / f"{persona_id}.json"

    def save_persona(self, p: personas.Persona) -> None:
        _atomic_write(self._persona_path(p.id), personas.serialize_persona(p))

    def load_persona(self, persona_id: str) -> personas.Persona:
        path = self._persona_path(persona_id)
        if not path.exists():
            raise PersonaNotFound(f"no persona with id {persona_id}")
        return personas.parse_persona(path.read_text(encoding="utf-8"))

    def delete_persona(self, persona_id: str) -> None:
        path = self._persona_path(persona_id)
        if not path.exists():
            raise PersonaNotFound(f"no persona with id {persona_id}")
        path.unlink()

    def list_personas(self) -> list[personas.Persona]:
        items = [
            personas.parse_persona(path.read_text(encoding="utf-8"))
            for path in sorted((self.root / "personas").glob("*.json"))
        ]
        items.sort(key=lambda p: p.created_at)
        return items

    # --- documents --------------------------------------------------------

    def _doc_dir(self, document_id: str) -> Path:
        return self.root / "documents" / document_id

    def save_document(self, record: DocumentRecord) -> None:
        d = self._doc_dir(record.id)
        d.mkdir(parents=True, exist_ok=True)
        _atomic_write(d / "document.json", json.dumps(record.to_dict(), ensure_ascii=False, indent=2))

    def load_document(self, document_id: str) -> DocumentRecord:
        path = self._doc_dir(document_id) / "document.json"
        if not path.exists():
            raise DocumentNotFound(f"no document with id {document_id}")
        return DocumentRecord.from_dict(json.loads(path.read_text(encoding="utf-8")))

    def list_documents(self) -> list[DocumentRecord]:
        docs = []
        for d in sorted((self.root / "documents").iterdir()):
            path = d / "document.json"
            if path.exists():
                docs.append(DocumentRecord.from_dict(json.loads(path.read_text(encoding="utf-8"))))
        return docs

    # --- history ----------------------------------------------------------

    def load_history(self, document_id: str) -> history.History:
        path = self._doc_dir(document_id) / "history.json"
        if not path.exists():
            return history.History(document_id=document_id)
        return history.load(path.read_text(encoding="utf-8"))

    def save_history(self, h: history.History) -> None:
        d = self._doc_dir(h.document_id)
        d.mkdir(parents=True, exist_ok=True)
        _atomic_write(d / "history.json", history.save(h))

    # --- event log --------------------------------------------------------

    def load_log(self, document_id: str) -> analytics.SessionLog:
        path = self._doc_dir(document_id) / "events.ndjson"
        if not path.exists():
            return analytics.SessionLog()
        return analytics.parse_log(path.read_text(encoding="utf-8"))

    def append_events(self, document_id: str, events: list[analytics.SessionEvent]) -> None:
        """Validate monotonicity against the stored log, then append."""
        log = self.load_log(document_id)
        for e in events:
            analytics.record(log, e)
        d = self._doc_dir(document_id)
        d.mkdir(parents=True, exist_ok=True)
        path = d / "events.ndjson"
        with path.open("a", encoding="utf-8") as f:
            for e in events:
                f.write(json.dumps(e.to_dict(), ensure_ascii=False) + "\n")
