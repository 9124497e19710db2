"""Exception types shared across the package."""


class PersonaFeedbackError(Exception):
    """Base class for all domain errors."""


class EmptyAttribute(PersonaFeedbackError):
    """Attribute name is empty after trimming whitespace."""


class IndexOutOfRange(PersonaFeedbackError):
    """Pair index does not exist in the section."""


class MalformedPersona(PersonaFeedbackError):
    """Persona document could not be parsed."""


class EmptySelection(PersonaFeedbackError):
    """Selected text is empty after trimming."""


class PersonaNotFound(PersonaFeedbackError):
    """No persona with the given id."""


class ProviderError(PersonaFeedbackError):
    """Completion provider failed (timeout, auth, rate limit, transport)."""


class DuplicateCard(PersonaFeedbackError):
    """A card with this id is already in the history."""


class CardNotFound(PersonaFeedbackError):
    """No card with the given id."""


class MalformedHistory(PersonaFeedbackError):
    """History document could not be parsed."""


class NonMonotonicTimestamp(PersonaFeedbackError):
    """Event timestamp is earlier than the last recorded event."""


class UnresolvablePersona(PersonaFeedbackError):
    """A logged feedback request references a persona that cannot be resolved."""


class EmptyText(PersonaFeedbackError):
    """Text to analyze is empty."""


class StaleSelection(PersonaFeedbackError):
    """Selection offsets no longer fit the current document text."""


class DocumentNotFound(PersonaFeedbackError):
    """No document with the given id."""
