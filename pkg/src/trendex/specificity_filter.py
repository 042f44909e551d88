"""Remove broadly named treatments via the co-mention ratio test.

A treatment mentioned in many abstracts overall but rarely together with
the queried disorder is a generically named procedure, not a treatment
specific to that disorder. The ratio

    co_mention_abstracts / total_treatment_abstracts

must reach the threshold (default 1%) for a candidate to survive; the
comparison is strictly less-than, so a ratio exactly at the threshold is
retained. Counts come from a pluggable provider: a local table for
deterministic offline runs, or a remote counting service.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Protocol, Sequence

import requests

from .errors import LoadError, TrendexError
from .predication_store import TreatmentCandidate
from .terminology import _tsv_rows

COUNTS_HEADER = ("CUI", "TOTAL_ABSTRACTS")
COCOUNTS_HEADER = ("TREATMENT_CUI", "DISORDER_CUI", "CO_ABSTRACTS")

REASON_BELOW_THRESHOLD = "below threshold"
REASON_NO_EVIDENCE = "no corpus evidence"
REASON_UNAVAILABLE = "count unavailable"


class UndefinedRatioError(TrendexError):
    """The specificity ratio is undefined because the total count is zero."""


class CountUnavailable(TrendexError):
    """The mention-count provider could not produce a count."""


@dataclass(frozen=True)
class MentionCounts:
    """Abstract counts for one (treatment, disorder) pair."""

    treatment_total: int  # abstracts mentioning the treatment at all
    co_mention: int  # abstracts mentioning treatment AND disorder

    def __post_init__(self) -> None:
        if self.treatment_total < 0 or self.co_mention < 0:
            raise ValueError("mention counts must be nonnegative")


@dataclass(frozen=True)
class RemovedCandidate:
    candidate: TreatmentCandidate
    reason: str
    ratio: Fraction | None


@dataclass(frozen=True)
class FilterOutcome:
    """Partition of the input candidates; retained preserves input order."""

    retained: list[TreatmentCandidate]
    removed: list[RemovedCandidate]


class MentionCountProvider(Protocol):
    def counts(self, treatment_cui: str, disorder_cui: str) -> MentionCounts:
        """Return counts for the pair; raise CountUnavailable on failure."""
        ...


class LocalCountProvider:
    """Counts served from bundled counts.tsv / cocounts.tsv tables.

    A treatment absent from the totals table is a provider failure; a
    missing co-count row just means zero co-mentions.
    """

    def __init__(self, totals: dict[str, int], cocounts: dict[tuple[str, str], int]):
        self._totals = totals
        self._cocounts = cocounts

    def counts(self, treatment_cui: str, disorder_cui: str) -> MentionCounts:
        if treatment_cui not in self._totals:
            raise CountUnavailable(f"no total abstract count for {treatment_cui}")
        return MentionCounts(
            treatment_total=self._totals[treatment_cui],
            co_mention=self._cocounts.get((treatment_cui, disorder_cui), 0),
        )


class RemoteCountProvider:
    """Counts fetched from an HTTP counting service.

    The service answers GET requests with query parameters ``term_cui``
    and optionally ``with_cui``, returning ``{"count": <int>}``. Any
    transport error, timeout, or malformed payload surfaces as
    ``CountUnavailable``; it never aborts a whole filtering batch.
    """

    def __init__(self, base_url: str, timeout: float = 10.0, session: requests.Session | None = None):
        self._base_url = base_url
        self._timeout = timeout
        self._session = session or requests.Session()

    def counts(self, treatment_cui: str, disorder_cui: str) -> MentionCounts:
        total = self._fetch({"term_cui": treatment_cui})
        co = self._fetch({"term_cui": treatment_cui, "with_cui": disorder_cui})
        return MentionCounts(treatment_total=total, co_mention=co)

    def _fetch(self, params: dict[str, str]) -> int:
        try:
            response = self._session.get(self._base_url, params=params, timeout=self._timeout)
            response.raise_for_status()
            count = response.json()["count"]
        except (requests.RequestException, ValueError, KeyError, TypeError) as exc:
            raise CountUnavailable(f"count query {params} failed: {exc}") from exc
        if not isinstance(count, int) or count < 0:
            raise CountUnavailable(f"count query {params} returned {count!r}")
        return count


def load_counts(lines: Iterable[str], source: str = "counts.tsv") -> dict[str, int]:
    totals: dict[str, int] = {}
    for lineno, (cui, total) in _tsv_rows(lines, COUNTS_HEADER, source):
        try:
            value = int(total)
        except ValueError:
            raise LoadError(f"{source}:{lineno}: unparseable count {total!r}") from None
        if value < 0:
            raise LoadError(f"{source}:{lineno}: negative count")
        totals[cui] = value
    return totals


def load_cocounts(
    lines: Iterable[str], source: str = "cocounts.tsv"
) -> dict[tuple[str, str], int]:
    cocounts: dict[tuple[str, str], int] = {}
    for lineno, (treatment, disorder, count) in _tsv_rows(lines, COCOUNTS_HEADER, source):
        try:
            value = int(count)
        except ValueError:
            raise LoadError(f"{source}:{lineno}: unparseable count {count!r}") from None
        if value < 0:
            raise LoadError(f"{source}:{lineno}: negative count")
        cocounts[(treatment, disorder)] = value
    return cocounts


def specificity_ratio(counts: MentionCounts) -> Fraction:
    """co_mention / treatment_total, exact."""
    if counts.treatment_total == 0:
        raise UndefinedRatioError("treatment has zero total abstracts")
    return Fraction(counts.co_mention, counts.treatment_total)


def as_threshold(value: Fraction | str | float | int) -> Fraction:
    """Coerce a threshold to an exact fraction in (0, 1).

    Floats are read back through their decimal representation so that a
    CLI-style 0.01 means exactly 1/100 and the strict-< boundary behaves.
    """
    if isinstance(value, Fraction):
        threshold = value
    elif isinstance(value, float):
        threshold = Fraction(str(value))
    else:
        threshold = Fraction(value)
    if not 0 < threshold < 1:
        raise ValueError(f"threshold must be in (0, 1), got {threshold}")
    return threshold


def filter_nonspecific(
    candidates: Sequence[TreatmentCandidate],
    disorder_cui: str,
    provider: MentionCountProvider,
    threshold: Fraction | str | float = Fraction(1, 100),
) -> FilterOutcome:
    """Partition candidates into retained and removed by the ratio test.

    A candidate is removed when its ratio is strictly below the threshold,
    when the ratio is undefined (zero total), or when the provider fails
    for it. Every removal records its reason and, where defined, the
    ratio. Retained candidates keep their input order.
    """
    cutoff = as_threshold(threshold)
    retained: list[TreatmentCandidate] = []
    removed: list[RemovedCandidate] = []
    for candidate in candidates:
        try:
            counts = provider.counts(candidate.cui, disorder_cui)
        except CountUnavailable:
            removed.append(RemovedCandidate(candidate, REASON_UNAVAILABLE, None))
            continue
        try:
            ratio = specificity_ratio(counts)
        except UndefinedRatioError:
            removed.append(RemovedCandidate(candidate, REASON_NO_EVIDENCE, None))
            continue
        if ratio < cutoff:
            removed.append(RemovedCandidate(candidate, REASON_BELOW_THRESHOLD, ratio))
        else:
            retained.append(candidate)
    return FilterOutcome(retained=retained, removed=removed)
