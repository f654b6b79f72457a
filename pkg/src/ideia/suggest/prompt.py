"""Prompt construction.

One fixed template, four blocks in a fixed order (ROLE, CONTEXT, STYLE,
FORMAT), no timestamps and no randomness: identical inputs must produce
byte-identical prompts, because the prompt bytes are what gets fingerprinted
and what the deterministic stub hashes.

Refinements never rewrite the prompt; they append a REFINEMENT block to the
parent's prompt, so a fingerprint always covers the full provenance chain.
"""

from __future__ import annotations

from .models import MAX_TITLES, IdeationContext

TITLE_MARKER = "TITLE: "
SUMMARY_MARKER = "SUMMARY: "


def build_prompt(ctx: IdeationContext, n_titles: int) -> str:
    """Render the standard ideation prompt for a validated context.

    The FORMAT block carries the literal directive "exactly {n_titles}" and
    the STYLE block names the output language; both are load-bearing (the
    stub provider reads them back out of the prompt).
    """
    if not 1 <= n_titles <= MAX_TITLES:
        raise ValueError(f"n_titles must be in 1..{MAX_TITLES}")
    lines = [
        "ROLE: You are an editorial ideation assistant for a digital newsroom;"
        " you propose headlines and summaries for journalists.",
        "",
        "CONTEXT:",
        f"topic: {ctx.topic}",
    ]
    if ctx.keywords:
        lines.append(f"keywords: {', '.join(ctx.keywords)}")
    if ctx.editorial_section:
        lines.append(f"section: {ctx.editorial_section}")
    if ctx.audience:
        lines.append(f"audience: {ctx.audience}")
    if ctx.extra_notes:
        lines.append(f"notes: {ctx.extra_notes}")
    lines += [
        "",
        "STYLE:",
        f"tone: {ctx.tone}",
        f"Write all output in {ctx.language}.",
        "",
        "FORMAT:",
        f'Respond with exactly {n_titles} lines beginning with "{TITLE_MARKER}",'
        " one headline per line.",
        f'Then respond with one block beginning with "{SUMMARY_MARKER}"'
        " containing a single short summary.",
    ]
    return "\n".join(lines)


def refinement_block(parent_titles: tuple[str, ...] | list[str], feedback: str) -> str:
    """The block appended to a parent prompt for one refinement round."""
    lines = ["", "REFINEMENT:", "The previous suggestions were:"]
    lines += [f"{i}. {title}" for i, title in enumerate(parent_titles, start=1)]
    lines += [
        f"Editor feedback: {feedback}",
        "Revise the titles and the summary accordingly, keeping the same FORMAT.",
    ]
    return "\n".join(lines)
