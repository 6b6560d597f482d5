"""Text tokenization and token accounting shared across the engine."""

from __future__ import annotations

import string

_PUNCT = string.punctuation


def approx_token_count(text: str) -> int:
    """Approximate token count as ceil(len(text) / 4) over Unicode code points."""
    return (len(text) + 3) // 4


def tokenize(text: str) -> list[str]:
    """Split on whitespace, lowercase, strip surrounding punctuation, drop empties."""
    out = []
    for raw in text.lower().split():
        tok = raw.strip(_PUNCT)
        if tok:
            out.append(tok)
    return out


def surface_tokens(text: str) -> list[str]:
    """Like tokenize() but preserves the original casing of each token."""
    out = []
    for raw in text.split():
        tok = raw.strip(_PUNCT)
        if tok:
            out.append(tok)
    return out
