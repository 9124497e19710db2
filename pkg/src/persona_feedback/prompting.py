"""Assembles the chat-completion message sequence for a feedback request.

The layout is fixed: one system message describing the persona scheme,
an optional run of few-shot user/assistant example pairs, and a final
user message carrying the selected text and the rendered persona.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from .errors import EmptySelection
from .personas import PersonaSnapshot, SectionKind


class Role(str, Enum):
    SYSTEM = "system"
    USER = "user"
    ASSISTANT = "assistant"


@dataclass(frozen=True)
class Message:
    role: Role
    content: str


@dataclass(frozen=True)
class FewShotExample:
    """One input-output example: rendered persona + text -> feedback."""

    persona: PersonaSnapshot
    selected_text: str
    feedback_text: str


@dataclass(frozen=True)
class PromptBundle:
    messages: tuple[Message, ...]

    def to_wire(self) -> list[dict]:
        return [{"role": m.role.value, "content": m.content} for m in self.messages]


SYSTEM_PROMPT = (
    "Personas are defined using four fixed attributes: role, background, "
    "style, and content. Each attribute consists of user-defined key-value "
    "pairs. The possible key-value pairs are not predefined and can vary. "
    "Generate persona-specific feedback for the text snippet highlighted by "
    "the user, considering the persona's unique attributes and any "
    "additional key-value pairs that might be defined by the user. You will "
    "take the role of the persona and write from their viewpoint. Every "
    "key-value attribute that is included in the personas definition "
    "describes the persona and therefore you. The feedback should align "
    "with the persona's characteristics and viewpoint, providing insights, "
    "suggestions, or comments that are relevant to the persona's role, "
    "background, style preferences, and content preferences.\n"
    "\n"
    "Input:\n"
    'Text: "Selected text snippet from the user\'s editor."\n'
    "Persona:\n"
    '- Role: {"key": "value"}\n'
    '- Background: {"key": "value"}\n'
    '- Style: {"key": "value"}\n'
    '- Content: {"key": "value"}\n'
    "\n"
    "Output: Generate persona-specific feedback for the provided text "
    "snippet based on the given persona attributes. Write the feedback as "
    "if you would be this persona. Consider the role, background, style, "
    "and content preferences of the persona. Provide insights, suggestions, "
    "or comments that align with the persona's characteristics and "
    "viewpoint. Feel free to incorporate any additional key-value pairs "
    "defined by the user in the persona definition to enhance the relevance "
    "of the feedback. Write one continuous feedback that is not longer than "
    "200 words."
)

_SECTION_LABELS = {
    SectionKind.ROLE_TASK: "Role",
    SectionKind.BACKGROUND: "Background",
    SectionKind.STYLE_PREFERENCES: "Style",
    SectionKind.CONTENT_PREFERENCES: "Content",
}


def _escape(value: str) -> str:
    return value.replace("\\", "\\\\").replace('"', '\\"')


def render_persona_block(s: PersonaSnapshot) -> str:
    """Four fixed lines, one per section, as double-quoted key-value maps.

    Pairs with an empty description are omitted; an empty section renders
    as `{}`.
    """
    lines = []
    for kind in SectionKind:
        rendered = ", ".join(
            f'"{_escape(pair.attribute)}": "{_escape(pair.description)}"'
            for pair in s.pairs(kind)
            if pair.description != ""
        )
        lines.append(f"- {_SECTION_LABELS[kind]}: {{{rendered}}}")
    return "\n".join(lines)


def render_user_message(selected_text: str, s: PersonaSnapshot) -> str:
    """The final user message: selected text plus the persona block.

    The text line embeds the selection verbatim, without escaping.
    """
    if not selected_text.strip():
        raise EmptySelection("selected text is empty")
    return (
        "Input:\n"
        f'Text: "{selected_text}"\n'
        "Persona:\n" + render_persona_block(s)
    )


def assemble(
    selected_text: str,
    s: PersonaSnapshot,
    examples: list[FewShotExample] | tuple[FewShotExample, ...] = (),
) -> PromptBundle:
    """System message, few-shot user/assistant pairs, final user message."""
    messages = [Message(Role.SYSTEM, SYSTEM_PROMPT)]
    for ex in examples:
        messages.append(Message(Role.USER, render_user_message(ex.selected_text, ex.persona)))
        messages.append(Message(Role.ASSISTANT, ex.feedback_text))
    messages.append(Message(Role.USER, render_user_message(selected_text, s)))
    return PromptBundle(tuple(messages))


def parse_persona_block(block: str) -> dict[SectionKind, list[tuple[str, str]]]:
    """Inverse of render_persona_block, for round-trip checks and the mock
    provider. Only understands the exact rendered layout."""
    result: dict[SectionKind, list[tuple[str, str]]] = {k: [] for k in SectionKind}
    labels = {v: k for k, v in _SECTION_LABELS.items()}
    for line in block.splitlines():
        if not line.startswith("- "):
            continue
        label, _, body = line[2:].partition(": ")
        if label not in labels or not body.startswith("{") or not body.endswith("}"):
            continue
        result[labels[label]] = _parse_pairs(body[1:-1])
    return result


def _parse_pairs(body: str) -> list[tuple[str, str]]:
    pairs: list[tuple[str, str]] = []
    i = 0
    parts: list[str] = []
    while i < len(body):
        if body[i] != '"':
            i += 1
            continue
        i += 1
        chars: list[str] = []
        while i < len(body) and body[i] != '"':
            if body[i] == "\\" and i + 1 < len(body):
                chars.append(body[i + 1])
                i += 2
            else:
                chars.append(body[i])
                i += 1
        i += 1
        parts.append("".join(chars))
    for j in range(0, len(parts) - 1, 2):
        pairs.append((parts[j], parts[j + 1]))
    return pairs
