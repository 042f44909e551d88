"""Epoch binning, min-max normalization, and weighted trend scoring.

Evidence is counted as distinct abstracts per fixed publication-year
range. Counts are normalized per epoch *column* across all treatments
(each year range independently), then combined linearly under a weight
profile: the "new" profile weights the seven ranges 1..7 so recent epochs
dominate; "established" weights them all 1. All arithmetic is exact
(fractions), so rankings and their tie-breaks are fully deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import LoadError
from .terminology import _tsv_rows

EPOCHS_HEADER = ("START", "END")


@dataclass(frozen=True, order=True)
class Epoch:
    start_year: int
    end_year: int  # inclusive

    def __post_init__(self) -> None:
        if self.start_year > self.end_year:
            raise ValueError(f"epoch start {self.start_year} after end {self.end_year}")

    @property
    def label(self) -> str:
        return f"{self.start_year}-{self.end_year}"

    def __contains__(self, year: int) -> bool:
        return self.start_year <= year <= self.end_year


DEFAULT_EPOCHS: tuple[Epoch, ...] = (
    Epoch(1980, 1985),
    Epoch(1986, 1990),
    Epoch(1991, 1995),
    Epoch(1996, 2000),
    Epoch(2001, 2005),
    Epoch(2006, 2010),
    Epoch(2011, 2013),
)

NEW_WEIGHTS = tuple(Fraction(w) for w in (1, 2, 3, 4, 5, 6, 7))
ESTABLISHED_WEIGHTS = tuple(Fraction(1) for _ in range(7))


def validate_schedule(schedule: Sequence[Epoch]) -> None:
    """Epochs must be ordered and pairwise disjoint."""
    if not schedule:
        raise ValueError("epoch schedule is empty")
    for before, after in zip(schedule, schedule[1:]):
        if before.end_year >= after.start_year:
            raise ValueError(f"epochs {before.label} and {after.label} overlap or are unordered")


def load_epochs(lines: Iterable[str], source: str = "epochs.tsv") -> tuple[Epoch, ...]:
    """Read an epoch schedule override from an epochs.tsv stream."""
    epochs: list[Epoch] = []
    for lineno, (start, end) in _tsv_rows(lines, EPOCHS_HEADER, source):
        try:
            epochs.append(Epoch(int(start), int(end)))
        except ValueError as exc:
            raise LoadError(f"{source}:{lineno}: {exc}") from None
    try:
        validate_schedule(epochs)
    except ValueError as exc:
        raise LoadError(f"{source}: {exc}") from None
    return tuple(epochs)


def bin_by_epoch(
    evidence: Iterable[tuple[str, int]],
    schedule: Sequence[Epoch] = DEFAULT_EPOCHS,
) -> tuple[tuple[int, ...], int]:
    """Count distinct abstracts per epoch.

    Returns (counts, dropped) where counts[j] is the number of distinct
    pmids whose year falls in epoch j and dropped is the number of
    distinct (pmid, year) pairs outside every epoch.
    """
    validate_schedule(schedule)
    per_epoch: list[set[str]] = [set() for _ in schedule]
    dropped: set[tuple[str, int]] = set()
    for pmid, year in evidence:
        for j, epoch in enumerate(schedule):
            if year in epoch:
                per_epoch[j].add(pmid)
                break
        else:
            dropped.add((pmid, year))
    return tuple(len(s) for s in per_epoch), len(dropped)


@dataclass(frozen=True)
class WeightProfile:
    """A named set of nonnegative epoch weights, not all zero."""

    name: str
    weights: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        if not self.weights:
            raise ValueError("weight profile needs at least one weight")
        if any(w < 0 for w in self.weights):
            raise ValueError("weights must be nonnegative")
        if all(w == 0 for w in self.weights):
            raise ValueError("weights must not all be zero")

    @classmethod
    def new(cls) -> "WeightProfile":
        return cls("new", NEW_WEIGHTS)

    @classmethod
    def established(cls) -> "WeightProfile":
        return cls("established", ESTABLISHED_WEIGHTS)

    @classmethod
    def custom(cls, weights: Sequence[Fraction | int | str]) -> "WeightProfile":
        return cls("custom", tuple(Fraction(w) for w in weights))


def parse_weights(text: str, expected: int = 7) -> tuple[Fraction, ...]:
    """Parse a comma-separated list of nonnegative decimal weights."""
    parts = [p.strip() for p in text.split(",")]
    if len(parts) != expected:
        raise ValueError(f"expected {expected} weights, got {len(parts)}")
    try:
        weights = tuple(Fraction(p) for p in parts)
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"unparseable weight in {text!r}: {exc}") from None
    if any(w < 0 for w in weights):
        raise ValueError("weights must be nonnegative")
    return weights


def normalize_epoch_matrix(matrix: Sequence[Sequence[int]]) -> list[list[Fraction]]:
    """Min-max normalize each epoch column across all treatments.

    out[i][j] = (e[i][j] - min_j) / (max_j - min_j) over the column's
    minimum and maximum. A constant column (max_j == min_j) carries no
    ranking signal and normalizes to all zeros.
    """
    if not matrix:
        raise ValueError("matrix must have at least one row")
    width = len(matrix[0])
    if any(len(row) != width for row in matrix):
        raise ValueError("matrix rows must have equal length")
    columns = list(zip(*matrix))
    lows = [min(col) for col in columns]
    highs = [max(col) for col in columns]
    return [
        [
            Fraction(0) if highs[j] == lows[j] else Fraction(value - lows[j], highs[j] - lows[j])
            for j, value in enumerate(row)
        ]
        for row in matrix
    ]


def score(normalized_vector: Sequence[Fraction], profile: WeightProfile) -> Fraction:
    """Weighted sum of a normalized epoch vector."""
    if len(normalized_vector) != len(profile.weights):
        raise ValueError(
            f"vector length {len(normalized_vector)} != weight count {len(profile.weights)}"
        )
    return sum((w * n for w, n in zip(profile.weights, normalized_vector)), Fraction(0))


@dataclass(frozen=True)
class RankedTreatment:
    cui: str
    name: str
    score: Fraction
    epoch_vector: tuple[int, ...]
    normalized_vector: tuple[Fraction, ...]
    rank: int

    @property
    def total_abstracts(self) -> int:
        return sum(self.epoch_vector)


def rank(
    candidates: Sequence[tuple[str, str, Sequence[int]]],
    profile: WeightProfile,
) -> list[RankedTreatment]:
    """Normalize over the full candidate matrix, score, and sort.

    ``candidates`` are (cui, name, epoch_counts) triples. Sort order is
    score descending, ties broken by total abstract count descending,
    then CUI ascending; ranks are assigned 1..N in that order.
    """
    if not candidates:
        raise ValueError("candidates must be nonempty")
    matrix = [tuple(counts) for _, _, counts in candidates]
    normalized = normalize_epoch_matrix(matrix)
    scored = [
        (cui, name, vector, tuple(norm), score(norm, profile))
        for (cui, name, _), vector, norm in zip(candidates, matrix, normalized)
    ]
    scored.sort(key=lambda item: (-item[4], -sum(item[2]), item[0]))
    return [
        RankedTreatment(
            cui=cui,
            name=name,
            score=value,
            epoch_vector=vector,
            normalized_vector=norm,
            rank=position,
        )
        for position, (cui, name, vector, norm, value) in enumerate(scored, start=1)
    ]
