"""Generative providers: the deterministic stub and a live HTTP client.

The stub is a pure function of the prompt bytes. It reads the requested
title count back out of the FORMAT directive and the topic out of the
CONTEXT block, then tags every line with a residue of the prompt hash —
so any change to the prompt, however small, is visible in the output and
two runs over the same prompt are byte-identical.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .hashing import fnv1a_64


class GenerationError(RuntimeError):
    """Transport-level failure from a generative provider (retryable)."""


class StubPromptUnreadable(ValueError):
    """The stub could not find the FORMAT directive or the topic marker."""


@dataclass(frozen=True)
class GenerativeDescriptor:
    provider_id: str
    kind: str  # "live" | "stub"


class GenerativeProvider:
    descriptor: GenerativeDescriptor

    def generate(self, prompt: str) -> str:
        """Return the raw response text for a prompt."""
        raise NotImplementedError


_TOPIC_RE = re.compile(r"^topic:[ \t]*(.*)$", re.MULTILINE)
_N_TITLES_RE = re.compile(r"exactly (\d+)")

_TAG_MODULUS = 9973  # largest prime below 10^4: keeps tags short but prompt-sensitive


def stub_generate(prompt: str) -> str:
    """Deterministic stand-in for a live model.

    h is the FNV-1a 64-bit hash of the prompt's UTF-8 bytes. Title i carries
    the tag (h + i) mod 9973 and the summary carries h mod 9973.
    """
    topic_match = _TOPIC_RE.search(prompt)
    n_match = _N_TITLES_RE.search(prompt)
    if topic_match is None:
        raise StubPromptUnreadable("no 'topic:' marker in prompt")
    if n_match is None:
        raise StubPromptUnreadable("no 'exactly N' FORMAT directive in prompt")
    topic = topic_match.group(1).strip()
    n_titles = int(n_match.group(1))
    h = fnv1a_64(prompt.encode("utf-8"))
    lines = [
        f"TITLE: Pauta {i} sobre {topic} [{(h + i) % _TAG_MODULUS}]"
        for i in range(1, n_titles + 1)
    ]
    lines.append(f"SUMMARY: Resumo determinístico ({h % _TAG_MODULUS}) sobre {topic}.")
    return "\n".join(lines)


class StubGenerativeProvider(GenerativeProvider):
    descriptor = GenerativeDescriptor(provider_id="stub", kind="stub")

    def generate(self, prompt: str) -> str:
        return stub_generate(prompt)


class LiveGenerativeClient(GenerativeProvider):
    """HTTP client for a hosted generative model.

    Posts the prompt to a configurable endpoint and returns the text field of
    the response. Exercised only through the shared abstraction; tests run on
    the stub.
    """

    def __init__(
        self,
        api_key: str,
        base_url: str = "https://generativelanguage.googleapis.com/v1beta/models/gemini-pro:generateContent",
        provider_id: str = "live-gen",
        timeout_seconds: float = 30.0,
    ):
        self.descriptor = GenerativeDescriptor(provider_id=provider_id, kind="live")
        self._api_key = api_key
        self._base_url = base_url
        self._timeout = timeout_seconds

    def generate(self, prompt: str) -> str:
        import httpx

        try:
            resp = httpx.post(
                self._base_url,
                params={"key": self._api_key},
                json={"contents": [{"parts": [{"text": prompt}]}]},
                timeout=self._timeout,
            )
            resp.raise_for_status()
            payload = resp.json()
            return payload["candidates"][0]["content"]["parts"][0]["text"]
        except Exception as e:
            raise GenerationError(f"live generation failed: {e}") from e
