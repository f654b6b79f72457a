"""Generation orchestration: prompt once, call with backoff, parse, persist.

The prompt is built exactly once per call and its fingerprint is taken from
those same bytes, so what was fingerprinted is what was sent. Retries cover
transport errors and malformed responses; backoff doubles from the policy's
base. A bounded semaphore caps in-flight provider calls — when it is
saturated the call fails fast instead of queueing.
"""

from __future__ import annotations

import threading
import time
from contextlib import contextmanager
from dataclasses import dataclass
from typing import Callable

from ..clock import Clock, SystemClock
from .hashing import fingerprint
from .models import (
    MAX_FEEDBACK_CHARS,
    IdeationContext,
    InvalidContext,
    RetryPolicy,
    SuggestionSet,
    validate_context,
)
from .parse import MalformedGeneration, parse_generation
from .prompt import build_prompt, refinement_block
from .providers import GenerationError, GenerativeProvider

DEFAULT_MAX_IN_FLIGHT = 4


class ProviderUnavailable(RuntimeError):
    """Provider still failing after the policy's max_attempts."""

    def __init__(self, attempts: int, last_error: Exception):
        super().__init__(f"provider failed after {attempts} attempts: {last_error}")
        self.attempts = attempts
        self.last_error = last_error


class OverCapacity(RuntimeError):
    """The per-provider concurrency cap is saturated."""


class EmptyFeedback(ValueError):
    pass


@dataclass(frozen=True)
class GenerationOutcome:
    titles: tuple[str, ...]
    summary: str
    truncated: bool
    prompt: str
    prompt_fingerprint: str
    attempts: int


def run_generation(
    prompt: str,
    n_titles: int,
    provider: GenerativeProvider,
    policy: RetryPolicy,
    sleep: Callable[[float], None] = time.sleep,
) -> GenerationOutcome:
    """Call the provider with exponential backoff until a response parses."""
    last_error: Exception | None = None
    for attempt in range(1, policy.max_attempts + 1):
        try:
            raw = provider.generate(prompt)
            parsed = parse_generation(raw, n_titles)
        except (GenerationError, MalformedGeneration) as e:
            last_error = e
            if attempt < policy.max_attempts:
                sleep(policy.backoff_seconds(attempt))
            continue
        return GenerationOutcome(
            titles=parsed.titles,
            summary=parsed.summary,
            truncated=parsed.truncated,
            prompt=prompt,
            prompt_fingerprint=fingerprint(prompt),
            attempts=attempt,
        )
    assert last_error is not None
    raise ProviderUnavailable(policy.max_attempts, last_error)


class SuggestionEngine:
    """Ties context validation, prompting, the provider, and the store together."""

    def __init__(
        self,
        store,
        provider: GenerativeProvider,
        policy: RetryPolicy | None = None,
        clock: Clock | None = None,
        sleep: Callable[[float], None] = time.sleep,
        max_in_flight: int = DEFAULT_MAX_IN_FLIGHT,
    ):
        self.store = store
        self.provider = provider
        self.policy = policy or RetryPolicy()
        self.clock = clock or SystemClock()
        self.sleep = sleep
        self.max_in_flight = max_in_flight
        self._capacity = threading.BoundedSemaphore(max_in_flight)

    @contextmanager
    def _slot(self):
        if not self._capacity.acquire(blocking=False):
            raise OverCapacity(
                f"{self.max_in_flight} generations already in flight for "
                f"{self.provider.descriptor.provider_id}"
            )
        try:
            yield
        finally:
            self._capacity.release()

    def generate(
        self,
        pitch_id: str,
        n_titles: int = 3,
        ctx: IdeationContext | None = None,
    ) -> SuggestionSet:
        """Generate a fresh suggestion set for a pitch and persist it."""
        pitch = self.store.get_pitch(pitch_id)
        context = validate_context(ctx if ctx is not None else pitch.context)
        prompt = build_prompt(context, n_titles)
        with self._slot():
            outcome = run_generation(prompt, n_titles, self.provider, self.policy, self.sleep)
        suggestion = SuggestionSet(
            suggestion_id=self.store.new_suggestion_id(),
            pitch_id=pitch_id,
            titles=outcome.titles,
            summary=outcome.summary,
            provider_id=self.provider.descriptor.provider_id,
            prompt_fingerprint=outcome.prompt_fingerprint,
            created_at=self.clock.now(),
            n_titles=n_titles,
            parent_id=None,
            feedback=None,
            truncated=outcome.truncated,
        )
        self.store.attach_suggestion_set(pitch_id, suggestion)
        return suggestion

    def refine(self, parent: SuggestionSet, feedback: str) -> SuggestionSet:
        """Regenerate with editor feedback appended to the parent's prompt."""
        feedback = feedback.strip()
        if not feedback:
            raise EmptyFeedback("feedback must not be empty")
        if len(feedback) > MAX_FEEDBACK_CHARS:
            raise InvalidContext("feedback", f"at most {MAX_FEEDBACK_CHARS} characters")
        pitch = self.store.get_pitch(parent.pitch_id)
        parent_prompt = self.reconstruct_prompt(parent, pitch.context)
        prompt = parent_prompt + refinement_block(parent.titles, feedback)
        with self._slot():
            outcome = run_generation(
                prompt, parent.n_titles, self.provider, self.policy, self.sleep
            )
        suggestion = SuggestionSet(
            suggestion_id=self.store.new_suggestion_id(),
            pitch_id=parent.pitch_id,
            titles=outcome.titles,
            summary=outcome.summary,
            provider_id=self.provider.descriptor.provider_id,
            prompt_fingerprint=outcome.prompt_fingerprint,
            created_at=self.clock.now(),
            n_titles=parent.n_titles,
            parent_id=parent.suggestion_id,
            feedback=feedback,
            truncated=outcome.truncated,
        )
        self.store.attach_suggestion_set(parent.pitch_id, suggestion)
        return suggestion

    def reconstruct_prompt(self, suggestion: SuggestionSet, context: IdeationContext) -> str:
        """Rebuild the exact prompt that produced ``suggestion``.

        Raw prompts are never persisted; they are a pure function of the
        pitch context plus the refinement chain, so walking parent links
        recovers them byte for byte.
        """
        chain = [suggestion]
        while chain[-1].parent_id is not None:
            chain.append(self.store.get_suggestion_set(chain[-1].parent_id))
        chain.reverse()
        prompt = build_prompt(context, chain[0].n_titles)
        for parent, child in zip(chain, chain[1:]):
            assert child.feedback is not None
            prompt += refinement_block(parent.titles, child.feedback)
        return prompt
