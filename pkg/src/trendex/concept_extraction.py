"""Turn a free-text disease query into screened disorder concepts."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .errors import LoadError
from .terminology import Concept, ConceptMatcher, NormalizationTable, _tsv_rows
from .tokens import normalize_tokens, tokenize

SEMANTIC_GROUPS_HEADER = ("GROUP", "SEMTYPE")
DISORDER_GROUP = "disorder"

# Default membership of the disorder semantic group; overridable via
# semantic_groups.tsv so the grouping stays a configuration concern.
DEFAULT_DISORDER_TYPES = frozenset(
    {
        "Abnormality",
        "Dysfunction",
        "Disease or Syndrome",
        "Finding",
        "Injury or Poisoning",
        "Pathologic Function",
        "Sign or Symptom",
    }
)


@dataclass(frozen=True)
class ConceptMention:
    """One dictionary concept located in the query text."""

    cui: str
    matched_text: str
    token_span: tuple[int, int]  # inclusive token indices
    semantic_type: str


def load_semantic_groups(
    lines: Iterable[str], source: str = "semantic_groups.tsv"
) -> dict[str, frozenset[str]]:
    """Read GROUP -> semantic-type-set from a semantic_groups.tsv stream."""
    groups: dict[str, set[str]] = {}
    for lineno, row in _tsv_rows(lines, SEMANTIC_GROUPS_HEADER, source):
        group, semtype = row
        if not group.strip() or not semtype.strip():
            raise LoadError(f"{source}:{lineno}: empty GROUP or SEMTYPE")
        groups.setdefault(group, set()).add(semtype)
    return {group: frozenset(types) for group, types in groups.items()}


def extract_concepts(
    text: str, matcher: ConceptMatcher, table: NormalizationTable
) -> list[ConceptMention]:
    """Locate dictionary concepts in text, longest match winning.

    The text is tokenized and normalized, all automaton hits are
    collected, then overlaps are resolved: longest span first, ties by
    leftmost start, then by lexicographically smallest CUI. The surviving
    mentions never overlap and come back sorted by start index.
    """
    source_tokens = tokenize(text)
    hits = matcher.find_all(normalize_tokens(source_tokens, table))
    hits.sort(key=lambda h: (h.start - h.end, h.start, h.cui, h.semantic_type))

    taken: list[tuple[int, int]] = []
    mentions: list[ConceptMention] = []
    for hit in hits:
        if any(hit.start <= end and start <= hit.end for start, end in taken):
            continue
        taken.append((hit.start, hit.end))
        mentions.append(
            ConceptMention(
                cui=hit.cui,
                matched_text=" ".join(source_tokens[hit.start : hit.end + 1]),
                token_span=(hit.start, hit.end),
                semantic_type=hit.semantic_type,
            )
        )
    mentions.sort(key=lambda m: m.token_span)
    return mentions


def screen_disorders(
    mentions: Sequence[ConceptMention],
    concepts_by_cui: Mapping[str, Concept],
    disorder_types: frozenset[str] = DEFAULT_DISORDER_TYPES,
) -> list[Concept]:
    """Keep mentions whose semantic type is in the disorder group.

    Deduplicates by CUI preserving first occurrence; mentions whose CUI is
    not in the dictionary are ignored. Idempotent on its own output when
    re-applied through fresh mentions.
    """
    seen: set[str] = set()
    result: list[Concept] = []
    for mention in mentions:
        if mention.semantic_type not in disorder_types:
            continue
        if mention.cui in seen:
            continue
        concept = concepts_by_cui.get(mention.cui)
        if concept is None:
            continue
        seen.add(mention.cui)
        result.append(concept)
    return result
