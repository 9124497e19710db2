"""Feedback generation: prompt building, provider calls, condensing.

The completion provider is pluggable. The mock provider is fully
deterministic and offline; the remote provider speaks the chat-completion
wire protocol of an OpenAI-compatible endpoint.
"""

from __future__ import annotations

import hashlib
import os
import random
import time
import uuid
from dataclasses import dataclass, field
from typing import Protocol

import httpx

from . import clock
from .errors import EmptySelection, ProviderError
from .history import FeedbackCard, FeedbackResult, SelectionContext, count_words
from .personas import Persona, SectionKind, snapshot
from .prompting import (
    FewShotExample,
    Message,
    PromptBundle,
    Role,
    assemble,
    parse_persona_block,
)

API_KEY_ENV_VAR = "PERSONA_FEEDBACK_API_KEY"

CONDENSE_SYSTEM_PROMPT = (
    "You make written feedback more concise. Rewrite the given feedback "
    "to be shorter while keeping its perspective, tone, and every concrete "
    "suggestion. Reply with only the rewritten feedback."
)


@dataclass(frozen=True)
class GenerationParams:
    model_id: str = "gpt-3.5-turbo"
    temperature: float = 0.7
    max_output_tokens: int = 512
    request_timeout_s: float = 60.0

    def __post_init__(self):
        if not 0.0 <= self.temperature <= 2.0:
            raise ValueError(f"temperature {self.temperature} outside [0, 2]")
        if self.max_output_tokens < 1:
            raise ValueError("max_output_tokens must be >= 1")


class CompletionProvider(Protocol):
    def complete(self, bundle: PromptBundle, params: GenerationParams) -> str:
        """Return the completion text. Raises ProviderError on failure."""
        ...


@dataclass(frozen=True)
class FeedbackRequest:
    document_id: str
    persona_id: str
    start: int
    end: int
    selected_text: str


class MockProvider:
    """Offline provider emitting structured feedback in the scheme real
    generations follow: an "As a ..." opening, advice naming a style
    preference, and an "Overall, the text snippet ..." summary.

    Output is a pure function of the bundle bytes, so identical requests
    produce identical feedback.
    """

    def complete(self, bundle: PromptBundle, params: GenerationParams) -> str:
        final = bundle.messages[-1].content
        try:
            _extract_selected_text(final)
            sections = parse_persona_block(_extract_persona_block(final))
        except ValueError:
            # not a feedback bundle (e.g. a condense pass): echo the input
            return final

        roles = [d for _, d in sections[SectionKind.ROLE_TASK]] or ["reader"]
        styles = sections[SectionKind.STYLE_PREFERENCES]

        seed = int.from_bytes(
            hashlib.sha256(repr(bundle.to_wire()).encode("utf-8")).digest()[:8], "big"
        )
        rng = random.Random(seed)

        opening = (
            f"As a {' and '.join(roles)}, I read this passage with my own "
            f"expectations in mind."
        )
        main = rng.choice(
            [
                "The selected text makes its point, but the argument could be "
                "laid out more directly.",
                "The selected text is a reasonable start, though its core "
                "message takes too long to surface.",
                "The selected text covers the right ground, but the emphasis "
                "could be sharper.",
            ]
        )
        if styles:
            attr, desc = styles[0]
            suggestion = (
                f"I would pay particular attention to the {attr}: aim for "
                f"{desc} throughout."
            )
        else:
            suggestion = "Consider tightening the phrasing so each sentence earns its place."
        summary = rng.choice(
            [
                "Overall, the text snippet shows promise and would benefit "
                "from these adjustments.",
                "Overall, the text snippet is on the right track once these "
                "points are addressed.",
            ]
        )
        return " ".join([opening, main, suggestion, summary])


def _extract_selected_text(user_message: str) -> str:
    marker_start = 'Text: "'
    marker_end = '"\nPersona:\n'
    a = user_message.index(marker_start) + len(marker_start)
    b = user_message.rindex(marker_end)
    return user_message[a:b]


def _extract_persona_block(user_message: str) -> str:
    marker = "\nPersona:\n"
    return user_message[user_message.rindex(marker) + len(marker):]


class RemoteProvider:
    """Chat-completion client for an OpenAI-compatible endpoint.

    The API key is read from the PERSONA_FEEDBACK_API_KEY environment
    variable at call time, never stored.
    """

    def __init__(self, base_url: str, transport: httpx.BaseTransport | None = None):
        self.base_url = base_url.rstrip("/")
        self._transport = transport

    def complete(self, bundle: PromptBundle, params: GenerationParams) -> str:
        headers = {"Content-Type": "application/json"}
        api_key = os.environ.get(API_KEY_ENV_VAR)
        if api_key:
            headers["Authorization"] = f"Bearer {api_key}"
        payload = {
            "model": params.model_id,
            "messages": bundle.to_wire(),
            "temperature": params.temperature,
            "max_tokens": params.max_output_tokens,
        }
        try:
            with httpx.Client(
                transport=self._transport, timeout=params.request_timeout_s
            ) as client:
                resp = client.post(
                    f"{self.base_url}/chat/completions",
                    json=payload,
                    headers=headers,
                )
            resp.raise_for_status()
            return resp.json()["choices"][0]["message"]["content"]
        except httpx.TimeoutException as exc:
            raise ProviderError(f"completion request timed out: {exc}") from exc
        except httpx.HTTPStatusError as exc:
            raise ProviderError(
                f"completion request failed with status {exc.response.status_code}"
            ) from exc
        except (httpx.HTTPError, KeyError, IndexError, ValueError) as exc:
            raise ProviderError(f"completion request failed: {exc}") from exc


@dataclass
class FeedbackEngine:
    """Binds a provider, generation params, and a few-shot example set."""

    provider: CompletionProvider
    params: GenerationParams = field(default_factory=GenerationParams)
    few_shot: tuple[FewShotExample, ...] = ()

    def generate_feedback(
        self,
        req: FeedbackRequest,
        persona: Persona,
        condense_pass: bool = False,
    ) -> FeedbackCard:
        """Snapshot the persona, call the provider, build the card.

        A provider failure raises ProviderError and creates no card.
        """
        if not req.selected_text.strip():
            raise EmptySelection("cannot request feedback for an empty selection")
        snap = snapshot(persona)
        bundle = assemble(req.selected_text, snap, self.few_shot)
        started = time.monotonic()
        text = self.provider.complete(bundle, self.params)
        condensed = False
        if condense_pass:
            text, condensed = self.condense(text)
        latency_ms = int((time.monotonic() - started) * 1000)
        return FeedbackCard(
            id=str(uuid.uuid4()),
            persona_name=persona.name,
            persona=snap,
            context=SelectionContext(req.start, req.end, req.selected_text),
            feedback=FeedbackResult.from_text(text, latency_ms=latency_ms, condensed=condensed),
            created_at=clock.now(),
        )

    def assemble_bundle(self, selected_text: str, persona: Persona) -> PromptBundle:
        """The exact bundle a request would send, without calling the provider."""
        return assemble(selected_text, snapshot(persona), self.few_shot)

    def condense(self, feedback: str) -> tuple[str, bool]:
        """Second pass asking the model to shorten its own output.

        The rewrite replaces the original only when it is strictly shorter
        in words; a provider failure keeps the original.
        """
        if not feedback.strip():
            raise ValueError("cannot condense empty feedback")
        bundle = PromptBundle(
            (
                Message(Role.SYSTEM, CONDENSE_SYSTEM_PROMPT),
                Message(Role.USER, feedback),
            )
        )
        try:
            shorter = self.provider.complete(bundle, self.params)
        except ProviderError:
            return feedback, False
        if count_words(shorter) < count_words(feedback):
            return shorter, True
        return feedback, False
