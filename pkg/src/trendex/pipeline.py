"""Wire the stages together over a data directory.

A data directory holds the five required files (dictionary.tsv,
lexicon.tsv, semantic_groups.tsv, predications.tsv, counts.tsv,
cocounts.tsv) plus an optional epochs.tsv override. ``load_bundle`` reads
them once into an immutable bundle that the CLI and the HTTP service
share.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from .concept_extraction import (
    DISORDER_GROUP,
    extract_concepts,
    load_semantic_groups,
    screen_disorders,
)
from .errors import LoadError
from .evaluation import GoldStandard, curve, EvalRow
from .predication_store import (
    ComparisonSets,
    Store,
    ingest,
    pmid_sets,
    treatments_for,
)
from .specificity_filter import (
    FilterOutcome,
    LocalCountProvider,
    MentionCountProvider,
    filter_nonspecific,
    load_cocounts,
    load_counts,
)
from .terminology import (
    Concept,
    ConceptMatcher,
    NormalizationTable,
    build_matcher,
    compress_lexicon,
    load_dictionary,
    load_lexicon,
)
from .trend_ranking import (
    DEFAULT_EPOCHS,
    Epoch,
    RankedTreatment,
    WeightProfile,
    bin_by_epoch,
    load_epochs,
    rank,
)

REQUIRED_FILES = (
    "dictionary.tsv",
    "lexicon.tsv",
    "semantic_groups.tsv",
    "predications.tsv",
    "counts.tsv",
    "cocounts.tsv",
)


@dataclass(frozen=True)
class DataBundle:
    """Everything loaded from a data directory, immutable after loading."""

    concepts: list[Concept]
    concepts_by_cui: dict[str, Concept]
    table: NormalizationTable
    matcher: ConceptMatcher
    disorder_types: frozenset[str]
    store: Store
    provider: MentionCountProvider
    schedule: tuple[Epoch, ...]

    def is_known_cui(self, cui: str) -> bool:
        return cui in self.concepts_by_cui

    def is_disorder(self, concept: Concept) -> bool:
        return bool(concept.semantic_types & self.disorder_types)


def load_bundle(
    data_dir: Path,
    epoch_override: Path | None = None,
    provider: MentionCountProvider | None = None,
) -> DataBundle:
    """Load all data files from a directory.

    Raises ``LoadError`` naming the first missing file. ``provider``
    overrides the default local count provider (e.g. with a remote one).
    """
    data_dir = Path(data_dir)
    for name in REQUIRED_FILES:
        if not (data_dir / name).is_file():
            raise LoadError(f"missing data file: {data_dir / name}")

    concepts, entries = load_dictionary(_read(data_dir / "dictionary.tsv"))
    table = compress_lexicon(load_lexicon(_read(data_dir / "lexicon.tsv")))
    matcher = build_matcher(entries, table)
    groups = load_semantic_groups(_read(data_dir / "semantic_groups.tsv"))
    disorder_types = groups.get(DISORDER_GROUP, frozenset())
    store = ingest(_read(data_dir / "predications.tsv"))
    if provider is None:
        provider = LocalCountProvider(
            totals=load_counts(_read(data_dir / "counts.tsv")),
            cocounts=load_cocounts(_read(data_dir / "cocounts.tsv")),
        )
    if epoch_override is not None:
        schedule = load_epochs(_read(epoch_override, source=str(epoch_override)))
    else:
        schedule = DEFAULT_EPOCHS
    return DataBundle(
        concepts=concepts,
        concepts_by_cui={c.cui: c for c in concepts},
        table=table,
        matcher=matcher,
        disorder_types=disorder_types,
        store=store,
        provider=provider,
        schedule=schedule,
    )


def _read(path: Path, source: str | None = None) -> list[str]:
    with open(path, encoding="utf-8") as handle:
        return handle.readlines()


def resolve_disorders(bundle: DataBundle, query: str) -> list[Concept]:
    """Map a free-text or CUI query to screened disorder concepts.

    A query that is exactly a dictionary CUI resolves to that concept,
    still subject to disorder screening; anything else goes through
    extraction. An empty result means "no disorder found".
    """
    query = query.strip()
    if query in bundle.concepts_by_cui:
        concept = bundle.concepts_by_cui[query]
        return [concept] if bundle.is_disorder(concept) else []
    mentions = extract_concepts(query, bundle.matcher, bundle.table)
    return screen_disorders(mentions, bundle.concepts_by_cui, bundle.disorder_types)


@dataclass(frozen=True)
class RankingResult:
    disorder_cui: str
    profile: WeightProfile
    ranked: list[RankedTreatment]
    filter_outcome: FilterOutcome
    dropped_pairs: int  # evidence pairs outside the epoch schedule


def rank_for_disorder(
    bundle: DataBundle,
    disorder_cui: str,
    profile: WeightProfile,
    threshold: Fraction | str | float = Fraction(1, 100),
) -> RankingResult:
    """Full pipeline for one disorder: extract, filter, bin, rank."""
    candidates = treatments_for(bundle.store, disorder_cui)
    outcome = filter_nonspecific(candidates, disorder_cui, bundle.provider, threshold)
    dropped_total = 0
    triples = []
    for candidate in outcome.retained:
        counts, dropped = bin_by_epoch(sorted(candidate.evidence), bundle.schedule)
        dropped_total += dropped
        triples.append((candidate.cui, candidate.name, counts))
    ranked = rank(triples, profile) if triples else []
    return RankingResult(
        disorder_cui=disorder_cui,
        profile=profile,
        ranked=ranked,
        filter_outcome=outcome,
        dropped_pairs=dropped_total,
    )


def compare_treatments(
    bundle: DataBundle, disorder_cui: str, treatment_cuis: list[str]
) -> ComparisonSets:
    schedule = [(e.start_year, e.end_year) for e in bundle.schedule]
    return pmid_sets(bundle.store, disorder_cui, treatment_cuis, schedule)


def evaluate_ranking(
    ranked_cuis: list[str], gold: GoldStandard, ks: list[int]
) -> list[EvalRow]:
    return curve(ranked_cuis, gold, ks)
