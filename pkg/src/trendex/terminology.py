"""Concept dictionary, lexical-variant table, and the matching automaton.

The dictionary maps surface terms to concepts (CUI + semantic type); the
lexicon maps inflected word forms to base forms. Both are plain TSV files
(see ``DICTIONARY_HEADER`` and ``LEXICON_HEADER``). Matching is done with
an Aho-Corasick automaton whose alphabet is *normalized tokens* rather
than characters, so patterns can never match inside a word.
"""

from __future__ import annotations

import logging
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Mapping, NamedTuple, Sequence

from .errors import LoadError
from .tokens import normalize_token, tokenize

logger = logging.getLogger(__name__)

DICTIONARY_HEADER = ("CUI", "TERM", "SEMTYPE", "PREFERRED")
LEXICON_HEADER = ("TERM", "BASE_FORM")

# A lexical-variant table: lowercase single-token term -> base form.
NormalizationTable = dict[str, str]


@dataclass(frozen=True)
class Concept:
    """A terminology entry: one concept with all its semantic types."""

    cui: str
    preferred_name: str
    semantic_types: frozenset[str]


@dataclass(frozen=True)
class TermEntry:
    """One surface form of a concept, as read from the dictionary file."""

    surface: str
    cui: str
    semantic_type: str


def compress_lexicon(records: Iterable[tuple[str, str]]) -> NormalizationTable:
    """Reduce raw (term, base_form) records to a single-token variant table.

    Retention rules, applied in order to each record:
      1. lowercase both the term and the base form;
      2. drop records where either side has more than one token;
      3. drop records whose term equals its base form (nothing to map).

    The first occurrence of a term wins; later records with the same term
    are ignored, so the result is deterministic for a given record order.
    """
    table: NormalizationTable = {}
    for term, base_form in records:
        term_tokens = tokenize(term.lower())
        base_tokens = tokenize(base_form.lower())
        if len(term_tokens) != 1 or len(base_tokens) != 1:
            continue
        term_norm, base_norm = term_tokens[0], base_tokens[0]
        if term_norm == base_norm:
            continue
        table.setdefault(term_norm, base_norm)
    return table


def load_lexicon(lines: Iterable[str], source: str = "lexicon.tsv") -> list[tuple[str, str]]:
    """Read raw (term, base_form) records from a lexicon TSV stream."""
    records: list[tuple[str, str]] = []
    for lineno, row in _tsv_rows(lines, LEXICON_HEADER, source):
        term, base_form = row
        if not term.strip() or not base_form.strip():
            raise LoadError(f"{source}:{lineno}: empty term or base form")
        records.append((term, base_form))
    return records


def load_dictionary(
    lines: Iterable[str], source: str = "dictionary.tsv"
) -> tuple[list[Concept], list[TermEntry]]:
    """Parse a dictionary TSV stream into concepts and term entries.

    Produces one ``Concept`` per distinct CUI (preferred name taken from
    the first row flagged PREFERRED=1, else the CUI's first row) and one
    ``TermEntry`` per data row. Duplicate (surface, cui) pairs are
    silently dropped. Any malformed row raises ``LoadError`` naming the
    line number.
    """
    entries: list[TermEntry] = []
    seen_pairs: set[tuple[str, str]] = set()
    order: list[str] = []
    names: dict[str, str] = {}
    preferred: dict[str, str] = {}
    semtypes: dict[str, set[str]] = {}

    for lineno, row in _tsv_rows(lines, DICTIONARY_HEADER, source):
        cui, term, semtype, pref = row
        term = term.strip()
        if not cui or not term or not semtype:
            raise LoadError(f"{source}:{lineno}: empty CUI, TERM, or SEMTYPE")
        if pref not in ("0", "1"):
            raise LoadError(f"{source}:{lineno}: PREFERRED must be 0 or 1, got {pref!r}")
        if cui not in names:
            order.append(cui)
            names[cui] = term
            semtypes[cui] = set()
        semtypes[cui].add(semtype)
        if pref == "1" and cui not in preferred:
            preferred[cui] = term
        if (term, cui) in seen_pairs:
            continue
        seen_pairs.add((term, cui))
        entries.append(TermEntry(surface=term, cui=cui, semantic_type=semtype))

    concepts = [
        Concept(
            cui=cui,
            preferred_name=preferred.get(cui, names[cui]),
            semantic_types=frozenset(semtypes[cui]),
        )
        for cui in order
    ]
    return concepts, entries


def _tsv_rows(
    lines: Iterable[str], header: tuple[str, ...], source: str
) -> Iterable[tuple[int, list[str]]]:
    """Yield (line_number, fields) for a headered TSV stream.

    Rejects a wrong header and any row whose column count differs from
    the header's. Blank lines are ignored.
    """
    it = iter(lines)
    try:
        first = next(it)
    except StopIteration:
        raise LoadError(f"{source}:1: missing header") from None
    if tuple(first.rstrip("\r\n").split("\t")) != header:
        raise LoadError(f"{source}:1: expected header {chr(9).join(header)!r}")
    for lineno, line in enumerate(it, start=2):
        line = line.rstrip("\r\n")
        if not line:
            continue
        fields = line.split("\t")
        if len(fields) != len(header):
            raise LoadError(
                f"{source}:{lineno}: expected {len(header)} columns, got {len(fields)}"
            )
        yield lineno, fields


class TokenSpanHit(NamedTuple):
    """One raw automaton hit over a normalized token sequence."""

    start: int  # first token index, inclusive
    end: int  # last token index, inclusive
    cui: str
    semantic_type: str


@dataclass
class _Node:
    children: dict[str, "_Node"] = field(default_factory=dict)
    fail: "_Node | None" = None
    # Pattern ids ending at this state, own plus failure-chain.
    outputs: list[int] = field(default_factory=list)


class ConceptMatcher:
    """Aho-Corasick automaton over normalized token sequences.

    States are token-sequence prefixes of the dictionary's surface forms;
    failure links point to the longest proper suffix of the current path
    that is also a pattern prefix, so a single left-to-right pass reports
    every pattern occurrence, overlaps included. Each accepting state
    carries the (cui, semantic_type) pairs of the matched term.

    Instances are immutable after construction and safe to share across
    concurrent readers; matching never depends on query order.
    """

    def __init__(self, patterns: Mapping[tuple[str, ...], Iterable[tuple[str, str]]]):
        self._payloads: list[frozenset[tuple[str, str]]] = []
        self._lengths: list[int] = []
        self._root = _Node()
        for token_seq, payload in patterns.items():
            if not token_seq:
                continue
            node = self._root
            for token in token_seq:
                node = node.children.setdefault(token, _Node())
            node.outputs.append(len(self._payloads))
            self._payloads.append(frozenset(payload))
            self._lengths.append(len(token_seq))
        self._build_failure_links()

    def _build_failure_links(self) -> None:
        root = self._root
        root.fail = root
        queue: deque[_Node] = deque()
        for child in root.children.values():
            child.fail = root
            queue.append(child)
        while queue:
            current = queue.popleft()
            for token, child in current.children.items():
                fallback = current.fail
                assert fallback is not None
                while fallback is not root and token not in fallback.children:
                    fallback = fallback.fail
                    assert fallback is not None
                target = fallback.children.get(token, root)
                child.fail = root if target is child else target
                # Suffix patterns ending here surface through the fail chain.
                child.outputs = child.outputs + child.fail.outputs
                queue.append(child)

    @property
    def pattern_count(self) -> int:
        return len(self._payloads)

    def find_all(self, tokens: Sequence[str]) -> list[TokenSpanHit]:
        """Report every pattern occurrence in a normalized token sequence.

        Overlapping and nested hits are all reported; longest-match policy
        is the caller's job. Hits come back sorted by (start, end, cui).
        """
        hits: list[TokenSpanHit] = []
        root = self._root
        state = root
        for index, token in enumerate(tokens):
            while state is not root and token not in state.children:
                assert state.fail is not None
                state = state.fail
            state = state.children.get(token, root)
            for pattern_id in state.outputs:
                start = index - self._lengths[pattern_id] + 1
                for cui, semtype in self._payloads[pattern_id]:
                    hits.append(TokenSpanHit(start, index, cui, semtype))
        hits.sort()
        return hits


def build_matcher(entries: Sequence[TermEntry], table: NormalizationTable) -> ConceptMatcher:
    """Build the matching automaton from dictionary entries.

    Each surface form is tokenized and normalized with the same rules the
    query side uses. Entries whose surface normalizes to zero tokens are
    skipped with a warning. An entry list that yields no usable patterns
    produces a matcher that matches nothing.
    """
    patterns: dict[tuple[str, ...], set[tuple[str, str]]] = {}
    for entry in entries:
        token_seq = tuple(normalize_token(t, table) for t in tokenize(entry.surface))
        if not token_seq:
            logger.warning("dictionary surface %r normalizes to zero tokens; skipped", entry.surface)
            continue
        patterns.setdefault(token_seq, set()).add((entry.cui, entry.semantic_type))
    return ConceptMatcher(patterns)
