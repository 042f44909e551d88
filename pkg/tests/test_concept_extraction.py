from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from trendex.concept_extraction import (
    DEFAULT_DISORDER_TYPES,
    ConceptMention,
    extract_concepts,
    load_semantic_groups,
    screen_disorders,
)
from trendex.errors import LoadError
from trendex.terminology import Concept, TermEntry, build_matcher
from trendex.tokens import tokenize


@pytest.fixture(scope="module")
def small_matcher():
    entries = [
        TermEntry("atrial fibrillation", "C0004238", "Disease or Syndrome"),
        TermEntry("fibrillation", "C0232197", "Finding"),
        TermEntry("ablation", "C0547070", "Therapeutic or Preventive Procedure"),
        TermEntry("stroke", "C0038454", "Disease or Syndrome"),
    ]
    table = {"ablations": "ablation", "strokes": "stroke", "fibrillations": "fibrillation"}
    return build_matcher(entries, table), table


class TestTokenize:
    def test_splits_on_whitespace_and_punctuation(self):
        assert tokenize("Atrial fibrillation, treated.") == [
            "Atrial",
            "fibrillation",
            "treated",
        ]

    def test_keeps_digits_inside_tokens(self):
        assert tokenize("type 2 diabetes") == ["type", "2", "diabetes"]

    def test_empty_and_punctuation_only(self):
        assert tokenize("") == []
        assert tokenize("... !!! ---") == []


class TestExtractConcepts:
    def test_longest_match_suppresses_nested_hit(self, small_matcher):
        matcher, table = small_matcher
        mentions = extract_concepts("atrial fibrillation ablation", matcher, table)
        assert [(m.cui, m.token_span) for m in mentions] == [
            ("C0004238", (0, 1)),
            ("C0547070", (2, 2)),
        ]

    def test_matched_text_preserves_source_casing(self, small_matcher):
        matcher, table = small_matcher
        mentions = extract_concepts("Atrial Fibrillation", matcher, table)
        assert len(mentions) == 1
        assert mentions[0].matched_text == "Atrial Fibrillation"

    def test_lexicon_variant_found(self, small_matcher):
        matcher, table = small_matcher
        mentions = extract_concepts("recurrent strokes", matcher, table)
        assert [(m.cui, m.matched_text) for m in mentions] == [("C0038454", "strokes")]

    def test_no_match_yields_empty(self, small_matcher):
        matcher, table = small_matcher
        assert extract_concepts("aspirin", matcher, table) == []

    def test_case_invariant_output(self, small_matcher):
        matcher, table = small_matcher
        lower = extract_concepts("atrial fibrillation after ablation", matcher, table)
        upper = extract_concepts("ATRIAL FIBRILLATION AFTER ABLATION", matcher, table)
        key = lambda ms: [(m.cui, m.token_span, m.semantic_type) for m in ms]
        assert key(lower) == key(upper)

    def test_standalone_fibrillation_still_matches(self, small_matcher):
        matcher, table = small_matcher
        mentions = extract_concepts("ventricular fibrillation", matcher, table)
        assert [(m.cui, m.token_span) for m in mentions] == [("C0232197", (1, 1))]

    @settings(max_examples=100, deadline=None)
    @given(
        st.lists(
            st.sampled_from(
                ["atrial", "fibrillation", "ablation", "stroke", "of", "history"]
            ),
            max_size=12,
        )
    )
    def test_mentions_never_overlap_and_sorted(self, small_matcher, words):
        matcher, table = small_matcher
        mentions = extract_concepts(" ".join(words), matcher, table)
        spans = [m.token_span for m in mentions]
        assert spans == sorted(spans)
        for (_, prev_end), (next_start, _) in zip(spans, spans[1:]):
            assert next_start > prev_end


class TestScreenDisorders:
    CONCEPTS = {
        "C0004238": Concept(
            "C0004238", "Atrial Fibrillation", frozenset({"Disease or Syndrome"})
        ),
        "C0547070": Concept(
            "C0547070", "Ablation", frozenset({"Therapeutic or Preventive Procedure"})
        ),
        "C0038454": Concept("C0038454", "Stroke", frozenset({"Disease or Syndrome"})),
    }

    def mention(self, cui, semtype, start=0):
        return ConceptMention(cui, "x", (start, start), semtype)

    def test_retains_disorder_drops_procedure(self):
        mentions = [
            self.mention("C0004238", "Disease or Syndrome", 0),
            self.mention("C0547070", "Therapeutic or Preventive Procedure", 1),
        ]
        kept = screen_disorders(mentions, self.CONCEPTS)
        assert [c.cui for c in kept] == ["C0004238"]

    def test_deduplicates_by_cui(self):
        mentions = [
            self.mention("C0004238", "Disease or Syndrome", 0),
            self.mention("C0004238", "Disease or Syndrome", 3),
        ]
        assert len(screen_disorders(mentions, self.CONCEPTS)) == 1

    def test_unknown_cui_skipped(self):
        mentions = [self.mention("C9999999", "Disease or Syndrome")]
        assert screen_disorders(mentions, self.CONCEPTS) == []

    def test_custom_group_overrides_default(self):
        mentions = [self.mention("C0547070", "Therapeutic or Preventive Procedure")]
        custom = frozenset({"Therapeutic or Preventive Procedure"})
        kept = screen_disorders(mentions, self.CONCEPTS, custom)
        assert [c.cui for c in kept] == ["C0547070"]

    def test_preserves_mention_order(self):
        mentions = [
            self.mention("C0038454", "Disease or Syndrome", 0),
            self.mention("C0004238", "Disease or Syndrome", 2),
        ]
        kept = screen_disorders(mentions, self.CONCEPTS)
        assert [c.cui for c in kept] == ["C0038454", "C0004238"]


class TestLoadSemanticGroups:
    def test_fixture_file_matches_default_group(self, fixture_dir):
        with open(fixture_dir / "semantic_groups.tsv", encoding="utf-8") as handle:
            groups = load_semantic_groups(handle)
        assert groups["disorder"] == DEFAULT_DISORDER_TYPES

    def test_groups_accumulate_rows(self):
        lines = [
            "GROUP\tSEMTYPE\n",
            "disorder\tFinding\n",
            "disorder\tSign or Symptom\n",
            "chemical\tPharmacologic Substance\n",
        ]
        groups = load_semantic_groups(lines)
        assert groups == {
            "disorder": frozenset({"Finding", "Sign or Symptom"}),
            "chemical": frozenset({"Pharmacologic Substance"}),
        }

    def test_empty_field_rejected(self):
        with pytest.raises(LoadError, match=":2"):
            load_semantic_groups(["GROUP\tSEMTYPE\n", "disorder\t\n"])
