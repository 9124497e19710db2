import pytest

from persona_feedback import personas
from persona_feedback.personas import AttributePair, SectionKind


@pytest.fixture
def example_persona():
    """The persona used throughout: reviewer / CS professor / formal+short."""
    p = personas.create_persona("Reviewer")
    personas.add_pair(p, SectionKind.ROLE_TASK, AttributePair("role", "reviewer"))
    personas.add_pair(p, SectionKind.BACKGROUND, AttributePair("occupation", "CS professor"))
    personas.add_pair(p, SectionKind.STYLE_PREFERENCES, AttributePair("writing style", "formal"))
    personas.add_pair(p, SectionKind.STYLE_PREFERENCES, AttributePair("sentence length", "short"))
    return p
