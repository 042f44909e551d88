"""Ingest predication records and answer treatment queries.

Records arrive as predications.tsv rows (subject-predicate-object triples
with per-argument genericity flags, an abstract id, and a publication
year). Evidence is always counted per distinct abstract, never per
sentence.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .errors import LoadError

PREDICATIONS_HEADER = (
    "ID",
    "PMID",
    "YEAR",
    "SUBJ_CUI",
    "SUBJ_NAME",
    "SUBJ_SEMTYPE",
    "SUBJ_GENERIC",
    "PREDICATE",
    "OBJ_CUI",
    "OBJ_NAME",
    "OBJ_SEMTYPE",
    "OBJ_GENERIC",
    "SENTENCE",
)

TREATS = "TREATS"

YEAR_MIN = 1800
YEAR_MAX = 2100


@dataclass(frozen=True)
class Predication:
    """One extracted subject-predicate-object assertion from one sentence."""

    id: int
    pmid: str
    year: int
    subject_cui: str
    subject_name: str
    subject_semtype: str
    subject_is_generic: bool
    predicate: str
    object_cui: str
    object_name: str
    object_semtype: str
    object_is_generic: bool
    sentence: str


@dataclass(frozen=True)
class TreatmentCandidate:
    """A subject that TREATS the queried disorder, with abstract evidence."""

    cui: str
    name: str
    evidence: frozenset[tuple[str, int]]  # distinct (pmid, year) pairs


@dataclass
class Store:
    """Read-only predication index; populated once by ``ingest``."""

    predications: list[Predication] = field(default_factory=list)
    rejects: list[tuple[int, str]] = field(default_factory=list)  # (line, reason)
    _by_predicate_object: dict[tuple[str, str], list[Predication]] = field(
        default_factory=dict, repr=False
    )
    _by_subject: dict[str, list[Predication]] = field(default_factory=dict, repr=False)

    @property
    def predication_count(self) -> int:
        return len(self.predications)

    @property
    def rejected_count(self) -> int:
        return len(self.rejects)

    def by_predicate_object(self, predicate: str, object_cui: str) -> list[Predication]:
        return self._by_predicate_object.get((predicate, object_cui), [])

    def by_subject(self, subject_cui: str) -> list[Predication]:
        return self._by_subject.get(subject_cui, [])


def ingest(lines: Iterable[str], source: str = "predications.tsv") -> Store:
    """Index a predications.tsv stream.

    Malformed rows (wrong column count, unparseable or out-of-range year,
    bad flag, empty required field, non-uppercase predicate, duplicate id)
    are skipped and counted; the ingest itself never aborts on a data row.
    A wrong header does abort, since nothing after it can be trusted.
    """
    it = iter(lines)
    try:
        first = next(it)
    except StopIteration:
        raise LoadError(f"{source}:1: missing header") from None
    if tuple(first.rstrip("\r\n").split("\t")) != PREDICATIONS_HEADER:
        raise LoadError(f"{source}:1: unexpected predications header")

    store = Store()
    seen_ids: set[int] = set()
    for lineno, line in enumerate(it, start=2):
        line = line.rstrip("\r\n")
        if not line:
            continue
        fields = line.split("\t")
        if len(fields) != len(PREDICATIONS_HEADER):
            store.rejects.append((lineno, f"expected {len(PREDICATIONS_HEADER)} columns"))
            continue
        reason = _row_problem(fields, seen_ids)
        if reason is not None:
            store.rejects.append((lineno, reason))
            continue
        pred = Predication(
            id=int(fields[0]),
            pmid=fields[1],
            year=int(fields[2]),
            subject_cui=fields[3],
            subject_name=fields[4],
            subject_semtype=fields[5],
            subject_is_generic=fields[6] == "1",
            predicate=fields[7],
            object_cui=fields[8],
            object_name=fields[9],
            object_semtype=fields[10],
            object_is_generic=fields[11] == "1",
            sentence=fields[12],
        )
        seen_ids.add(pred.id)
        store.predications.append(pred)
        store._by_predicate_object.setdefault((pred.predicate, pred.object_cui), []).append(pred)
        store._by_subject.setdefault(pred.subject_cui, []).append(pred)
    return store


def _row_problem(fields: list[str], seen_ids: set[int]) -> str | None:
    try:
        row_id = int(fields[0])
    except ValueError:
        return f"unparseable id {fields[0]!r}"
    if row_id in seen_ids:
        return f"duplicate id {row_id}"
    try:
        year = int(fields[2])
    except ValueError:
        return f"unparseable year {fields[2]!r}"
    if not YEAR_MIN <= year <= YEAR_MAX:
        return f"year {year} outside [{YEAR_MIN}, {YEAR_MAX}]"
    if not fields[1]:
        return "empty PMID"
    if not fields[3] or not fields[8]:
        return "empty subject or object CUI"
    predicate = fields[7]
    if not predicate or predicate != predicate.upper():
        return f"predicate must be nonempty uppercase, got {predicate!r}"
    for idx, name in ((6, "SUBJ_GENERIC"), (11, "OBJ_GENERIC")):
        if fields[idx] not in ("0", "1"):
            return f"{name} must be 0 or 1, got {fields[idx]!r}"
    return None


def treatments_for(store: Store, disorder_cui: str) -> list[TreatmentCandidate]:
    """All subjects that TREAT the disorder, one candidate per subject CUI.

    Applies the novelty constraint: predications with a generic subject or
    generic object argument are excluded. Evidence is the set of distinct
    (pmid, year) pairs. The candidate's display name comes from its
    lowest-id predication, so results do not depend on input row order.
    Output is sorted by CUI; an unknown disorder yields an empty list.
    """
    evidence: dict[str, set[tuple[str, int]]] = {}
    name_source: dict[str, Predication] = {}
    for pred in store.by_predicate_object(TREATS, disorder_cui):
        if pred.subject_is_generic or pred.object_is_generic:
            continue
        evidence.setdefault(pred.subject_cui, set()).add((pred.pmid, pred.year))
        best = name_source.get(pred.subject_cui)
        if best is None or pred.id < best.id:
            name_source[pred.subject_cui] = pred
    return [
        TreatmentCandidate(
            cui=cui,
            name=name_source[cui].subject_name,
            evidence=frozenset(pairs),
        )
        for cui, pairs in sorted(evidence.items())
    ]


def epoch_evidence(
    store: Store, treatment_cui: str, disorder_cui: str
) -> list[tuple[str, int]]:
    """Distinct (pmid, year) pairs linking treatment TREATS disorder.

    A pmid appearing in multiple sentences counts once. Generic-argument
    predications are excluded, consistent with ``treatments_for``.
    """
    pairs: set[tuple[str, int]] = set()
    for pred in store.by_predicate_object(TREATS, disorder_cui):
        if pred.subject_cui != treatment_cui:
            continue
        if pred.subject_is_generic or pred.object_is_generic:
            continue
        pairs.add((pred.pmid, pred.year))
    return sorted(pairs)


@dataclass(frozen=True)
class ComparisonSets:
    """Per-treatment abstract sets for a disorder, plus their intersection."""

    pmids: dict[str, frozenset[str]]
    intersection: frozenset[str]
    # Same sets partitioned by epoch index for charting; pmids whose year
    # falls outside the schedule appear in the totals but in no epoch.
    pmids_by_epoch: dict[str, tuple[frozenset[str], ...]]
    intersection_by_epoch: tuple[frozenset[str], ...]


def pmid_sets(
    store: Store,
    disorder_cui: str,
    treatment_cuis: Sequence[str],
    schedule: Sequence[tuple[int, int]],
) -> ComparisonSets:
    """Per-treatment pmid sets and their common intersection.

    ``schedule`` is a sequence of (start_year, end_year) inclusive ranges
    used to partition each set for charting.
    """
    if not treatment_cuis:
        raise ValueError("treatment_cuis must be nonempty")
    pair_sets = {cui: epoch_evidence(store, cui, disorder_cui) for cui in treatment_cuis}
    pmid_year: dict[str, int] = {}
    for pairs in pair_sets.values():
        for pmid, year in pairs:
            # Duplicate pmids with conflicting years: keep the earliest.
            if pmid not in pmid_year or year < pmid_year[pmid]:
                pmid_year[pmid] = year

    pmids = {cui: frozenset(p for p, _ in pairs) for cui, pairs in pair_sets.items()}
    intersection = frozenset.intersection(*(pmids[cui] for cui in treatment_cuis))

    def partition(members: frozenset[str]) -> tuple[frozenset[str], ...]:
        return tuple(
            frozenset(p for p in members if start <= pmid_year[p] <= end)
            for start, end in schedule
        )

    return ComparisonSets(
        pmids=pmids,
        intersection=intersection,
        pmids_by_epoch={cui: partition(members) for cui, members in pmids.items()},
        intersection_by_epoch=partition(intersection),
    )
