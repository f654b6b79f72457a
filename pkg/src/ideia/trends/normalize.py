"""Term normalization and volume parsing for trend feeds.

Feeds report the same term with varying case, spacing, and composition
("Eleições" vs "eleições"), and volumes as display strings
("20K+", "1.5M"). Everything downstream (dedup, merge, search) keys on the
normalized form, so the rules here are deliberately narrow and total.
"""

from __future__ import annotations

import re
import unicodedata
from fractions import Fraction


class EmptyTerm(ValueError):
    """Raised when a term is empty after normalization."""


class MalformedVolume(ValueError):
    """Raised when a volume string does not match the accepted grammar."""


# number, optional K/M suffix, optional trailing "+"; nothing else.
_VOLUME_RE = re.compile(r"^(\d+(?:\.\d+)?|\.\d+)\s*([kKmM])?\+?$")

_SUFFIX_FACTOR = {None: 1, "k": 1_000, "m": 1_000_000}


def normalize_term(raw: str) -> str:
    """Canonical form of a search term: NFC, case-folded, whitespace collapsed.

    Diacritics are preserved — the content is Portuguese and stripping accents
    would alias distinct words ("pais" vs "país").
    """
    text = unicodedata.normalize("NFC", raw).casefold()
    # casefold can denormalize some code points; re-compose to keep NFC
    text = unicodedata.normalize("NFC", text)
    text = " ".join(text.split())
    if not text:
        raise EmptyTerm(f"term is empty after normalization: {raw!r}")
    return text


def parse_volume(text: str) -> int:
    """Parse a feed volume string ("20K+", "1.5M", "880") to an integer.

    The suffix scales by 10^3 (K) or 10^6 (M); a trailing "+" is ignored;
    fractional results floor. Exact decimal arithmetic so "0.29M" is 290000,
    not a float rounding away from it.
    """
    m = _VOLUME_RE.match(text.strip())
    if not m:
        raise MalformedVolume(f"not a volume: {text!r}")
    number, suffix = m.groups()
    factor = _SUFFIX_FACTOR[suffix.lower() if suffix else None]
    return int(Fraction(number) * factor)
