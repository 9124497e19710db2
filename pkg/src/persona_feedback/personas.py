"""Writer-defined reader personas: creation, editing, snapshots, serialization.

A persona is a name plus four fixed sections, each holding an ordered list
of attribute/description pairs. Personas are mutable while being edited;
snapshots freeze their content so generated feedback stays faithful to the
persona state at request time.
"""

from __future__ import annotations

import copy
import json
import uuid
from dataclasses import dataclass, field
from datetime import datetime
from enum import IntEnum

from . import clock
from .errors import EmptyAttribute, IndexOutOfRange, MalformedPersona


class SectionKind(IntEnum):
    """The four fixed persona sections, in prompt-rendering order."""

    ROLE_TASK = 0
    BACKGROUND = 1
    STYLE_PREFERENCES = 2
    CONTENT_PREFERENCES = 3

    @property
    def wire_name(self) -> str:
        return _WIRE_NAMES[self]

    @property
    def display_name(self) -> str:
        return _DISPLAY_NAMES[self]

    @classmethod
    def from_wire(cls, name: str) -> "SectionKind":
        try:
            return _WIRE_LOOKUP[name]
        except KeyError:
            raise MalformedPersona(f"unknown section name: {name!r}") from None


_WIRE_NAMES = {
    SectionKind.ROLE_TASK: "role_task",
    SectionKind.BACKGROUND: "background",
    SectionKind.STYLE_PREFERENCES: "style_preferences",
    SectionKind.CONTENT_PREFERENCES: "content_preferences",
}
_WIRE_LOOKUP = {v: k for k, v in _WIRE_NAMES.items()}
_DISPLAY_NAMES = {
    SectionKind.ROLE_TASK: "Role/Task of Persona",
    SectionKind.BACKGROUND: "Persona Background",
    SectionKind.STYLE_PREFERENCES: "Style Preferences",
    SectionKind.CONTENT_PREFERENCES: "Content Preferences",
}


@dataclass(frozen=True)
class AttributePair:
    """One attribute/description row, e.g. ("role", "reviewer").

    The description may be empty while the row is being edited; such rows
    are kept in storage but skipped when rendering prompts.
    """

    attribute: str
    description: str = ""

    def validate(self) -> "AttributePair":
        if not self.attribute.strip():
            raise EmptyAttribute("attribute must be non-empty after trimming")
        return self


def _empty_sections() -> dict[SectionKind, list[AttributePair]]:
    return {kind: [] for kind in SectionKind}


@dataclass
class Persona:
    """A mutable persona under edit. All four sections are always present."""

    id: str
    name: str
    sections: dict[SectionKind, list[AttributePair]]
    created_at: datetime
    updated_at: datetime


@dataclass(frozen=True)
class PersonaSnapshot:
    """Immutable copy of a persona's content at one point in time."""

    persona_id: str
    name: str
    sections: tuple[tuple[SectionKind, tuple[AttributePair, ...]], ...]
    snapshot_at: datetime

    def pairs(self, kind: SectionKind) -> tuple[AttributePair, ...]:
        for k, pairs in self.sections:
            if k is kind:
                return pairs
        return ()


@dataclass(frozen=True)
class SectionGuidance:
    """Hover-help for one section: short description plus example pairs."""

    section: SectionKind
    description: str
    example_pairs: tuple[AttributePair, ...]


SECTION_GUIDANCE: dict[SectionKind, SectionGuidance] = {
    SectionKind.ROLE_TASK: SectionGuidance(
        SectionKind.ROLE_TASK,
        "This section includes attributes that describe the role of this "
        "persona and the task it should perform when giving feedback.",
        (
            AttributePair("Role", "reviewer"),
            AttributePair("Task", "check the argument structure"),
            AttributePair("Perspective", "critical reader"),
        ),
    ),
    SectionKind.BACKGROUND: SectionGuidance(
        SectionKind.BACKGROUND,
        "This section includes attributes that describe the background of "
        "this persona, such as occupation, expertise, or familiarity with "
        "the topic.",
        (
            AttributePair("Occupation", "CS professor"),
            AttributePair("Expertise", "machine learning"),
            AttributePair("Familiarity with topic", "low"),
        ),
    ),
    SectionKind.STYLE_PREFERENCES: SectionGuidance(
        SectionKind.STYLE_PREFERENCES,
        "This section includes attributes that describe style preferences "
        "of this persona.",
        (
            AttributePair("Writing Style", "formal"),
            AttributePair("Word choice", "technical"),
            AttributePair("Sentence structure", "complex, nested sentences"),
        ),
    ),
    SectionKind.CONTENT_PREFERENCES: SectionGuidance(
        SectionKind.CONTENT_PREFERENCES,
        "This section includes attributes that describe what content this "
        "persona cares about in a text.",
        (
            AttributePair("Focus", "facts and data"),
            AttributePair("Interested in", "practical applications"),
            AttributePair("Values", "clear takeaways"),
        ),
    ),
}


def create_persona(name: str) -> Persona:
    """New persona with a fresh id and four empty sections."""
    t = clock.now()
    return Persona(
        id=str(uuid.uuid4()),
        name=name,
        sections=_empty_sections(),
        created_at=t,
        updated_at=t,
    )


def add_pair(p: Persona, kind: SectionKind, pair: AttributePair) -> Persona:
    """Append a pair at the end of a section. Raises EmptyAttribute."""
    pair.validate()
    p.sections[kind].append(pair)
    p.updated_at = clock.now()
    return p


def remove_pair(p: Persona, kind: SectionKind, index: int) -> Persona:
    """Remove the pair at `index`, preserving the order of the rest."""
    _check_index(p, kind, index)
    del p.sections[kind][index]
    p.updated_at = clock.now()
    return p


def edit_pair(p: Persona, kind: SectionKind, index: int, pair: AttributePair) -> Persona:
    """Replace the pair at `index` in place."""
    _check_index(p, kind, index)
    pair.validate()
    p.sections[kind][index] = pair
    p.updated_at = clock.now()
    return p


def rename(p: Persona, name: str) -> Persona:
    p.name = name
    p.updated_at = clock.now()
    return p


def _check_index(p: Persona, kind: SectionKind, index: int) -> None:
    if not 0 <= index < len(p.sections[kind]):
        raise IndexOutOfRange(
            f"index {index} out of range for section {kind.wire_name} "
            f"(length {len(p.sections[kind])})"
        )


def snapshot(p: Persona) -> PersonaSnapshot:
    """Deep, immutable copy of the persona's current content."""
    return PersonaSnapshot(
        persona_id=p.id,
        name=p.name,
        sections=tuple(
            (kind, tuple(copy.copy(pair) for pair in p.sections[kind]))
            for kind in SectionKind
        ),
        snapshot_at=clock.now(),
    )


# --- serialization ---------------------------------------------------------

def persona_to_dict(p: Persona) -> dict:
    return {
        "id": p.id,
        "name": p.name,
        "created_at": clock.to_rfc3339(p.created_at),
        "updated_at": clock.to_rfc3339(p.updated_at),
        "sections": {
            kind.wire_name: [
                {"attribute": pair.attribute, "description": pair.description}
                for pair in p.sections[kind]
            ]
            for kind in SectionKind
        },
    }


def persona_from_dict(doc: dict) -> Persona:
    try:
        sections = _empty_sections()
        raw_sections = doc["sections"]
        if not isinstance(raw_sections, dict):
            raise MalformedPersona("sections must be an object")
        for name, pairs in raw_sections.items():
            kind = SectionKind.from_wire(name)
            sections[kind] = [
                AttributePair(item["attribute"], item.get("description", ""))
                for item in pairs
            ]
        return Persona(
            id=str(doc["id"]),
            name=str(doc["name"]),
            sections=sections,
            created_at=clock.from_rfc3339(doc["created_at"]),
            updated_at=clock.from_rfc3339(doc["updated_at"]),
        )
    except MalformedPersona:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise MalformedPersona(f"bad persona document: {exc}") from exc


def serialize_persona(p: Persona) -> str:
    return json.dumps(persona_to_dict(p), ensure_ascii=False, indent=2)


def parse_persona(text: str) -> Persona:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MalformedPersona(
            f"invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}"
        ) from exc
    if not isinstance(doc, dict):
        raise MalformedPersona("persona document must be a JSON object")
    return persona_from_dict(doc)


def snapshot_to_dict(s: PersonaSnapshot) -> dict:
    return {
        "persona_id": s.persona_id,
        "name": s.name,
        "snapshot_at": clock.to_rfc3339(s.snapshot_at),
        "sections": {
            kind.wire_name: [
                {"attribute": pair.attribute, "description": pair.description}
                for pair in s.pairs(kind)
            ]
            for kind in SectionKind
        },
    }


def snapshot_from_dict(doc: dict) -> PersonaSnapshot:
    try:
        raw_sections = doc["sections"]
        sections = tuple(
            (
                kind,
                tuple(
                    AttributePair(item["attribute"], item.get("description", ""))
                    for item in raw_sections.get(kind.wire_name, [])
                ),
            )
            for kind in SectionKind
        )
        return PersonaSnapshot(
            persona_id=str(doc["persona_id"]),
            name=str(doc["name"]),
            sections=sections,
            snapshot_at=clock.from_rfc3339(doc["snapshot_at"]),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise MalformedPersona(f"bad snapshot document: {exc}") from exc
