"""FNV-1a 64-bit hash.

Used for prompt fingerprints and the deterministic stub's numeric tags.
Chosen over hashlib because it is small enough to re-implement by hand as an
independent cross-check.
"""

from __future__ import annotations

_FNV_OFFSET = 0xCBF29CE484222325
_FNV_PRIME = 0x100000001B3
_MASK64 = 0xFFFFFFFFFFFFFFFF


def fnv1a_64(data: bytes) -> int:
    h = _FNV_OFFSET
    for byte in data:
        h ^= byte
        h = (h * _FNV_PRIME) & _MASK64
    return h


def fingerprint(prompt: str) -> str:
    """Stable 64-bit fingerprint of the exact prompt text, as 16 hex chars."""
    return f"{fnv1a_64(prompt.encode('utf-8')):016x}"
