"""Suggestion engine: standardized prompts, pluggable generative providers
with retry, strict response parsing, and a deterministic stub."""

from .engine import (
    EmptyFeedback,
    GenerationOutcome,
    OverCapacity,
    ProviderUnavailable,
    SuggestionEngine,
    run_generation,
)
from .hashing import fingerprint, fnv1a_64
from .models import (
    MAX_FEEDBACK_CHARS,
    MAX_KEYWORDS,
    MAX_NOTES_CHARS,
    MAX_SUMMARY_CHARS,
    MAX_TITLE_CHARS,
    MAX_TITLES,
    TONES,
    IdeationContext,
    InvalidContext,
    RetryPolicy,
    SuggestionSet,
    validate_context,
)
from .parse import MalformedGeneration, OversizeField, ParsedGeneration, parse_generation
from .prompt import SUMMARY_MARKER, TITLE_MARKER, build_prompt, refinement_block
from .providers import (
    GenerationError,
    GenerativeDescriptor,
    GenerativeProvider,
    LiveGenerativeClient,
    StubGenerativeProvider,
    StubPromptUnreadable,
    stub_generate,
)

__all__ = [
    "EmptyFeedback",
    "GenerationError",
    "GenerationOutcome",
    "GenerativeDescriptor",
    "GenerativeProvider",
    "IdeationContext",
    "InvalidContext",
    "LiveGenerativeClient",
    "MAX_FEEDBACK_CHARS",
    "MAX_KEYWORDS",
    "MAX_NOTES_CHARS",
    "MAX_SUMMARY_CHARS",
    "MAX_TITLE_CHARS",
    "MAX_TITLES",
    "MalformedGeneration",
    "OverCapacity",
    "OversizeField",
    "ParsedGeneration",
    "ProviderUnavailable",
    "RetryPolicy",
    "StubGenerativeProvider",
    "StubPromptUnreadable",
    "SUMMARY_MARKER",
    "SuggestionEngine",
    "SuggestionSet",
    "TITLE_MARKER",
    "TONES",
    "build_prompt",
    "fingerprint",
    "fnv1a_64",
    "parse_generation",
    "refinement_block",
    "run_generation",
    "stub_generate",
    "validate_context",
]
