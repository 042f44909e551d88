from __future__ import annotations

from fractions import Fraction

import pytest
import requests
from hypothesis import given, settings
from hypothesis import strategies as st

from trendex.errors import LoadError
from trendex.predication_store import TreatmentCandidate
from trendex.specificity_filter import (
    REASON_BELOW_THRESHOLD,
    REASON_NO_EVIDENCE,
    REASON_UNAVAILABLE,
    CountUnavailable,
    LocalCountProvider,
    MentionCounts,
    RemoteCountProvider,
    UndefinedRatioError,
    as_threshold,
    filter_nonspecific,
    load_cocounts,
    load_counts,
    specificity_ratio,
)

AF = "C0004238"


def candidate(cui):
    return TreatmentCandidate(cui=cui, name=cui, evidence=frozenset({("P1", 2000)}))


class TestSpecificityRatio:
    def test_exact_fraction(self):
        assert specificity_ratio(MentionCounts(1000, 5)) == Fraction(1, 200)
        assert specificity_ratio(MentionCounts(200, 50)) == Fraction(1, 4)

    def test_zero_total_is_undefined(self):
        with pytest.raises(UndefinedRatioError):
            specificity_ratio(MentionCounts(0, 0))

    def test_negative_counts_rejected(self):
        with pytest.raises(ValueError):
            MentionCounts(-1, 0)
        with pytest.raises(ValueError):
            MentionCounts(10, -2)


class TestAsThreshold:
    def test_string_and_float_agree_exactly(self):
        assert as_threshold("0.01") == Fraction(1, 100)
        assert as_threshold(0.01) == Fraction(1, 100)
        assert as_threshold(Fraction(1, 100)) == Fraction(1, 100)

    def test_out_of_range_rejected(self):
        for bad in (0, 1, "1.5", -0.2):
            with pytest.raises(ValueError):
                as_threshold(bad)


class TestProviders:
    def test_local_missing_total_is_unavailable(self):
        provider = LocalCountProvider(totals={}, cocounts={})
        with pytest.raises(CountUnavailable):
            provider.counts("C1", AF)

    def test_local_missing_cocount_means_zero(self):
        provider = LocalCountProvider(totals={"C1": 500}, cocounts={})
        assert provider.counts("C1", AF) == MentionCounts(500, 0)

    def test_local_reads_both_tables(self):
        provider = LocalCountProvider(
            totals={"C1": 500}, cocounts={("C1", AF): 30}
        )
        assert provider.counts("C1", AF) == MentionCounts(500, 30)


class FakeResponse:
    def __init__(self, payload, status_ok=True):
        self._payload = payload
        self._status_ok = status_ok

    def raise_for_status(self):
        if not self._status_ok:
            raise requests.HTTPError("boom")

    def json(self):
        if isinstance(self._payload, Exception):
            raise self._payload
        return self._payload


class FakeSession:
    """Request log plus canned responses keyed by sorted query params."""

    def __init__(self, responses):
        self.responses = responses
        self.calls = []

    def get(self, url, params=None, timeout=None):
        self.calls.append((url, dict(params), timeout))
        key = tuple(sorted(params.items()))
        result = self.responses[key]
        if isinstance(result, Exception):
            raise result
        return result


class TestRemoteCountProvider:
    def test_two_queries_per_pair(self):
        session = FakeSession(
            {
                (("term_cui", "C1"),): FakeResponse({"count": 400}),
                (("term_cui", "C1"), ("with_cui", AF)): FakeResponse({"count": 8}),
            }
        )
        provider = RemoteCountProvider("http://counts.test/q", session=session)
        assert provider.counts("C1", AF) == MentionCounts(400, 8)
        assert len(session.calls) == 2
        assert all(url == "http://counts.test/q" for url, _, _ in session.calls)

    def test_transport_error_is_unavailable(self):
        session = FakeSession(
            {(("term_cui", "C1"),): requests.ConnectionError("refused")}
        )
        provider = RemoteCountProvider("http://counts.test/q", session=session)
        with pytest.raises(CountUnavailable):
            provider.counts("C1", AF)

    def test_http_error_is_unavailable(self):
        session = FakeSession(
            {(("term_cui", "C1"),): FakeResponse({"count": 1}, status_ok=False)}
        )
        provider = RemoteCountProvider("http://counts.test/q", session=session)
        with pytest.raises(CountUnavailable):
            provider.counts("C1", AF)

    @pytest.mark.parametrize(
        "payload",
        [{"count": "12"}, {"count": -3}, {"total": 12}, ValueError("not json")],
    )
    def test_malformed_payload_is_unavailable(self, payload):
        session = FakeSession({(("term_cui", "C1"),): FakeResponse(payload)})
        provider = RemoteCountProvider("http://counts.test/q", session=session)
        with pytest.raises(CountUnavailable):
            provider.counts("C1", AF)


class TestLoadTables:
    def test_counts_roundtrip(self):
        totals = load_counts(["CUI\tTOTAL_ABSTRACTS\n", "C1\t500\n", "C2\t0\n"])
        assert totals == {"C1": 500, "C2": 0}

    def test_counts_negative_rejected(self):
        with pytest.raises(LoadError, match=":2"):
            load_counts(["CUI\tTOTAL_ABSTRACTS\n", "C1\t-5\n"])

    def test_cocounts_roundtrip(self):
        cocounts = load_cocounts(
            ["TREATMENT_CUI\tDISORDER_CUI\tCO_ABSTRACTS\n", f"C1\t{AF}\t30\n"]
        )
        assert cocounts == {("C1", AF): 30}

    def test_cocounts_unparseable_rejected(self):
        with pytest.raises(LoadError, match="unparseable"):
            load_cocounts(
                ["TREATMENT_CUI\tDISORDER_CUI\tCO_ABSTRACTS\n", f"C1\t{AF}\tmany\n"]
            )


class TestFilterNonspecific:
    def make_provider(self):
        totals = {
            "C1": 1000,  # ratio 50/1000 = 5%   -> retained
            "C2": 1000,  # ratio 10/1000 = 1%   -> exactly at threshold, retained
            "C3": 1000,  # ratio 9/1000 = 0.9%  -> removed
            "C4": 50000, # ratio 40/50000       -> removed
            "C5": 0,     # undefined            -> removed
            # C6 absent from totals             -> removed (unavailable)
        }
        cocounts = {
            ("C1", AF): 50,
            ("C2", AF): 10,
            ("C3", AF): 9,
            ("C4", AF): 40,
            ("C5", AF): 0,
        }
        return LocalCountProvider(totals, cocounts)

    def test_partition_with_reasons(self):
        candidates = [candidate(f"C{i}") for i in range(1, 7)]
        outcome = filter_nonspecific(candidates, AF, self.make_provider())
        assert [c.cui for c in outcome.retained] == ["C1", "C2"]
        removed = {r.candidate.cui: r for r in outcome.removed}
        assert removed["C3"].reason == REASON_BELOW_THRESHOLD
        assert removed["C3"].ratio == Fraction(9, 1000)
        assert removed["C4"].reason == REASON_BELOW_THRESHOLD
        assert removed["C5"].reason == REASON_NO_EVIDENCE
        assert removed["C5"].ratio is None
        assert removed["C6"].reason == REASON_UNAVAILABLE

    def test_exact_boundary_retained(self):
        outcome = filter_nonspecific([candidate("C2")], AF, self.make_provider(), 0.01)
        assert [c.cui for c in outcome.retained] == ["C2"]

    def test_higher_threshold_drops_boundary(self):
        outcome = filter_nonspecific(
            [candidate("C1"), candidate("C2")], AF, self.make_provider(), "0.02"
        )
        assert [c.cui for c in outcome.retained] == ["C1"]

    def test_retained_preserves_input_order(self):
        candidates = [candidate("C2"), candidate("C1")]
        outcome = filter_nonspecific(candidates, AF, self.make_provider())
        assert [c.cui for c in outcome.retained] == ["C2", "C1"]

    def test_bundled_corpus_partition(self, bundle):
        from trendex.predication_store import treatments_for

        candidates = treatments_for(bundle.store, AF)
        outcome = filter_nonspecific(candidates, AF, bundle.provider)
        assert [c.cui for c in outcome.retained] == [
            "C0002598",
            "C0003281",
            "C0013778",
            "C0162563",
            "C0547070",
            "C1277289",
        ]
        removed = {r.candidate.cui: r.reason for r in outcome.removed}
        assert removed == {
            "C0087111": REASON_BELOW_THRESHOLD,
            "C0456081": REASON_BELOW_THRESHOLD,
        }

    @settings(max_examples=120, deadline=None)
    @given(
        st.lists(
            st.tuples(st.integers(min_value=0, max_value=2000), st.integers(min_value=0, max_value=60)),
            min_size=1,
            max_size=20,
        ),
        st.sampled_from([Fraction(1, 1000), Fraction(1, 100), Fraction(1, 10)]),
    )
    def test_partition_complete_and_threshold_monotone(self, pairs, threshold):
        candidates = [candidate(f"C{i}") for i in range(len(pairs))]
        totals = {f"C{i}": total for i, (total, _) in enumerate(pairs)}
        cocounts = {(f"C{i}", AF): min(co, total) for i, (total, co) in enumerate(pairs)}
        provider = LocalCountProvider(totals, cocounts)

        outcome = filter_nonspecific(candidates, AF, provider, threshold)
        retained_cuis = {c.cui for c in outcome.retained}
        removed_cuis = {r.candidate.cui for r in outcome.removed}
        assert retained_cuis | removed_cuis == {c.cui for c in candidates}
        assert retained_cuis & removed_cuis == set()

        stricter = filter_nonspecific(candidates, AF, provider, threshold * 2)
        assert {c.cui for c in stricter.retained} <= retained_cuis
