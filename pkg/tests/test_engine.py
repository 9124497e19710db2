import httpx
import pytest

from persona_feedback.engine import (
    FeedbackEngine,
    FeedbackRequest,
    GenerationParams,
    MockProvider,
    RemoteProvider,
)
from persona_feedback.errors import EmptySelection, ProviderError
from persona_feedback.history import count_words
from persona_feedback.personas import snapshot
from persona_feedback.prompting import assemble


def _request(text="Lorem ipsum dolor sit amet"):
    return FeedbackRequest(
        document_id="doc", persona_id="p", start=0, end=len(text), selected_text=text
    )


class FailingProvider:
    def complete(self, bundle, params):
        raise ProviderError("simulated timeout")


class HalvingProvider:
    """Condense mock: keeps the first half of the words."""

    def complete(self, bundle, params):
        words = bundle.messages[-1].content.split()
        return " ".join(words[: len(words) // 2])


class PaddingProvider:
    """Condense mock that makes the text longer instead of shorter."""

    def complete(self, bundle, params):
        return bundle.messages[-1].content + " plus extra trailing words here"


class TestGenerationParams:
    def test_defaults_valid(self):
        GenerationParams()

    @pytest.mark.parametrize("t", [-0.1, 2.5])
    def test_temperature_range(self, t):
        with pytest.raises(ValueError):
            GenerationParams(temperature=t)

    def test_max_tokens_positive(self):
        with pytest.raises(ValueError):
            GenerationParams(max_output_tokens=0)


class TestCountWords:
    def test_sentence(self):
        assert count_words("Overall, the text snippet is clear.") == 6

    def test_empty(self):
        assert count_words("") == 0

    def test_newline_separated(self):
        text = "\n".join("a" * 1 for _ in range(201))
        assert count_words(text) == 201


class TestMockProvider:
    def test_deterministic(self, example_persona):
        b = assemble("Lorem ipsum dolor sit amet", snapshot(example_persona))
        mock = MockProvider()
        outputs = {mock.complete(b, GenerationParams()) for _ in range(100)}
        assert len(outputs) == 1

    def test_mentions_persona_attributes(self, example_persona):
        engine = FeedbackEngine(provider=MockProvider())
        card = engine.generate_feedback(_request(), example_persona)
        assert "reviewer" in card.feedback.text
        assert card.feedback.text.startswith("As a ")
        assert "Overall, the text snippet" in card.feedback.text

    def test_different_bundles_can_differ(self, example_persona):
        mock = MockProvider()
        s = snapshot(example_persona)
        out1 = mock.complete(assemble("first selected text", s), GenerationParams())
        out2 = mock.complete(assemble("a different selection", s), GenerationParams())
        # openings identical by template, but the whole text tracks the bundle
        assert out1.startswith("As a reviewer")
        assert out2.startswith("As a reviewer")


class TestGenerateFeedback:
    def test_card_fields(self, example_persona):
        engine = FeedbackEngine(provider=MockProvider())
        card = engine.generate_feedback(_request(), example_persona)
        assert card.persona_name == example_persona.name
        assert card.context.selected_text == "Lorem ipsum dolor sit amet"
        assert card.feedback.word_count == count_words(card.feedback.text)
        assert card.feedback.over_limit is (card.feedback.word_count > 200)

    def test_empty_selection(self, example_persona):
        engine = FeedbackEngine(provider=MockProvider())
        with pytest.raises(EmptySelection):
            engine.generate_feedback(_request("  "), example_persona)

    def test_provider_failure_creates_no_card(self, example_persona):
        engine = FeedbackEngine(provider=FailingProvider())
        with pytest.raises(ProviderError):
            engine.generate_feedback(_request(), example_persona)

    def test_snapshot_frozen_at_request_time(self, example_persona):
        from persona_feedback.personas import AttributePair, SectionKind, edit_pair

        engine = FeedbackEngine(provider=MockProvider())
        card = engine.generate_feedback(_request(), example_persona)
        edit_pair(example_persona, SectionKind.ROLE_TASK, 0, AttributePair("role", "editor"))
        assert card.persona.pairs(SectionKind.ROLE_TASK)[0].description == "reviewer"


class TestCondense:
    def test_halving_provider_shortens(self):
        engine = FeedbackEngine(provider=HalvingProvider())
        feedback = " ".join(f"w{i}" for i in range(300))
        text, condensed = engine.condense(feedback)
        assert condensed is True
        assert count_words(text) <= 150

    def test_longer_output_keeps_original(self):
        engine = FeedbackEngine(provider=PaddingProvider())
        feedback = "Short feedback stays."
        text, condensed = engine.condense(feedback)
        assert text == feedback
        assert condensed is False

    def test_provider_failure_keeps_original(self):
        engine = FeedbackEngine(provider=FailingProvider())
        text, condensed = engine.condense("Original text.")
        assert (text, condensed) == ("Original text.", False)

    def test_empty_feedback_rejected(self):
        engine = FeedbackEngine(provider=MockProvider())
        with pytest.raises(ValueError):
            engine.condense("")


class TestRemoteProvider:
    def _provider(self, handler):
        return RemoteProvider("http://llm.test", transport=httpx.MockTransport(handler))

    def test_success(self, example_persona):
        def handler(request):
            assert request.url.path == "/chat/completions"
            return httpx.Response(
                200, json={"choices": [{"message": {"content": "Generated feedback."}}]}
            )

        b = assemble("text", snapshot(example_persona))
        assert self._provider(handler).complete(b, GenerationParams()) == "Generated feedback."

    def test_http_error_wrapped(self, example_persona):
        def handler(request):
            return httpx.Response(429, json={"error": "rate limit"})

        b = assemble("text", snapshot(example_persona))
        with pytest.raises(ProviderError):
            self._provider(handler).complete(b, GenerationParams())

    def test_timeout_wrapped(self, example_persona):
        def handler(request):
            raise httpx.ConnectTimeout("timed out")

        b = assemble("text", snapshot(example_persona))
        with pytest.raises(ProviderError):
            self._provider(handler).complete(b, GenerationParams())
