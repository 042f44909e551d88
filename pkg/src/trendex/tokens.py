"""Tokenization and token normalization shared by dictionary and query sides.

Both the dictionary surface forms and the incoming query text pass through
the same two steps, so a lookup can only succeed or fail consistently:

    1. tokenize: maximal alphanumeric runs; everything else separates.
    2. normalize: lowercase, then map through the lexical-variant table.
"""

from __future__ import annotations

import re
from typing import Mapping

# Alphanumeric runs; underscore, hyphen, punctuation, whitespace separate.
_TOKEN_RE = re.compile(r"[^\W_]+", re.UNICODE)


def tokenize(text: str) -> list[str]:
    """Split text into maximal alphanumeric runs.

    "Anti-Coagulation therapy." -> ["Anti", "Coagulation", "therapy"]
    """
    return _TOKEN_RE.findall(text)


def normalize_token(token: str, table: Mapping[str, str]) -> str:
    """Lowercase a token, then map it to its base form if the table has one.

    Tokens absent from the table normalize to their lowercase form; the
    table only stores variants that differ from their base form.
    """
    lowered = token.lower()
    return table.get(lowered, lowered)


def normalize_tokens(tokens: list[str], table: Mapping[str, str]) -> list[str]:
    return [normalize_token(t, table) for t in tokens]
