"""Loading of few-shot example sets.

The shipped set lives in the package data; deployments can point the
service at their own file with the same schema: an array of
{persona, selected_text, feedback_text} objects, where persona follows the
persona file schema.
"""

from __future__ import annotations

import json
from importlib import resources
from pathlib import Path

from .errors import MalformedPersona
from .personas import persona_from_dict, snapshot
from .prompting import FewShotExample


def parse_examples(text: str) -> tuple[FewShotExample, ...]:
    try:
        docs = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MalformedPersona(f"invalid few-shot file: {exc}") from exc
    if not isinstance(docs, list):
        raise MalformedPersona("few-shot file must be a JSON array")
    examples = []
    for doc in docs:
        persona = persona_from_dict(doc["persona"])
        selected = str(doc["selected_text"])
        feedback = str(doc["feedback_text"])
        if not selected or not feedback:
            raise MalformedPersona("few-shot example with empty text")
        examples.append(FewShotExample(snapshot(persona), selected, feedback))
    return tuple(examples)


def load_examples(path: str | Path | None = None) -> tuple[FewShotExample, ...]:
    """Examples from `path`, or the shipped set when no path is given."""
    if path is None:
        text = resources.files("persona_feedback.data").joinpath("few_shot_examples.json").read_text()
    else:
        text = Path(path).read_text()
    return parse_examples(text)
