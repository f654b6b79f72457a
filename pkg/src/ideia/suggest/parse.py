"""Strict parsing of generative responses.

Generative providers drift; the parser does not. It accepts exactly the
shape the FORMAT block mandates — "TITLE: " lines followed by a "SUMMARY: "
block running to the end of the text — and rejects everything else, so a
misbehaving provider surfaces as a retryable MalformedGeneration instead of
garbage reaching the store.
"""

from __future__ import annotations

from dataclasses import dataclass

from .models import MAX_SUMMARY_CHARS, MAX_TITLE_CHARS
from .prompt import SUMMARY_MARKER, TITLE_MARKER


class MalformedGeneration(ValueError):
    """Response does not match the mandated shape (retryable)."""

    def __init__(self, reason: str):
        super().__init__(reason)
        self.reason = reason


class OversizeField(ValueError):
    """A parsed field exceeds its cap (not retryable; the shape was right)."""


@dataclass(frozen=True)
class ParsedGeneration:
    titles: tuple[str, ...]
    summary: str
    truncated: bool  # provider sent more titles than requested


def parse_generation(raw: str, n_titles: int) -> ParsedGeneration:
    """Extract titles and summary from a raw generation.

    Titles are the "TITLE: "-prefixed lines before the summary marker; the
    summary is everything after the first line starting with "SUMMARY: ",
    through the end of the text. Markers must sit at the start of their line
    — indented or space-less variants do not count. More than ``n_titles``
    titles keeps the first ``n_titles`` and flags truncation.
    """
    titles: list[str] = []
    summary: str | None = None
    lines = raw.split("\n")
    for i, line in enumerate(lines):
        if line.startswith(SUMMARY_MARKER):
            # summary block: remainder of this line plus all following lines
            first = line[len(SUMMARY_MARKER):]
            summary = "\n".join([first, *lines[i + 1:]]).strip()
            break
        if line.startswith(TITLE_MARKER):
            title = line[len(TITLE_MARKER):].strip()
            if title:
                titles.append(title)

    if not titles:
        raise MalformedGeneration("no TITLE lines found")
    if summary is None:
        raise MalformedGeneration("missing SUMMARY block")
    if not summary:
        raise MalformedGeneration("empty SUMMARY block")

    truncated = len(titles) > n_titles
    titles = titles[:n_titles]

    for title in titles:
        if len(title) > MAX_TITLE_CHARS:
            raise OversizeField(f"title exceeds {MAX_TITLE_CHARS} chars: {title[:40]!r}...")
    if len(summary) > MAX_SUMMARY_CHARS:
        raise OversizeField(f"summary exceeds {MAX_SUMMARY_CHARS} chars")

    return ParsedGeneration(titles=tuple(titles), summary=summary, truncated=truncated)
