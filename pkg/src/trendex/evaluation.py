"""Score a ranked treatment list against a guideline gold standard.

Metrics at a cutoff k: hits is the overlap between the top-k ranked CUIs
and the gold set, precision divides by the number of list items actually
available (min(k, list length)), recall divides by the gold size, and the
F-score is the harmonic mean of the two. Matching is by CUI string
equality only; an optional synonym map can merge CUIs beforehand.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .errors import LoadError
from .terminology import _tsv_rows

logger = logging.getLogger(__name__)

GOLD_HEADER = ("CUI", "NAME")
SYNONYMS_HEADER = ("CUI", "CANONICAL")

REPORT_FORMATS = ("csv", "plot")


@dataclass(frozen=True)
class GoldStandard:
    """Curated guideline-endorsed treatment CUIs for one disorder."""

    disorder_cui: str
    treatment_cuis: frozenset[str]
    source_label: str = ""

    def __post_init__(self) -> None:
        if not self.treatment_cuis:
            raise ValueError("gold standard must be nonempty")


@dataclass(frozen=True)
class EvalRow:
    k: int
    hits: int
    precision: Fraction
    recall: Fraction
    f_score: Fraction


def load_gold(
    lines: Iterable[str],
    disorder_cui: str = "",
    source_label: str = "",
    source: str = "gold.tsv",
) -> GoldStandard:
    """Read a gold standard file; duplicate CUIs deduplicate with a warning."""
    cuis: list[str] = []
    seen: set[str] = set()
    for lineno, (cui, _name) in _tsv_rows(lines, GOLD_HEADER, source):
        if not cui:
            raise LoadError(f"{source}:{lineno}: empty CUI")
        if cui in seen:
            logger.warning("%s:%d: duplicate gold CUI %s ignored", source, lineno, cui)
            continue
        seen.add(cui)
        cuis.append(cui)
    if not cuis:
        raise LoadError(f"{source}: gold standard is empty")
    return GoldStandard(disorder_cui, frozenset(cuis), source_label)


def load_ranked_list(lines: Iterable[str], source: str = "ranked.tsv") -> list[str]:
    """Read a pre-ranked CUI list (same CUI/NAME format as gold files).

    Row order is rank order. Duplicate CUIs are an error here, since
    metrics require a distinct ranking.
    """
    cuis: list[str] = []
    seen: set[str] = set()
    for lineno, (cui, _name) in _tsv_rows(lines, GOLD_HEADER, source):
        if not cui:
            raise LoadError(f"{source}:{lineno}: empty CUI")
        if cui in seen:
            raise LoadError(f"{source}:{lineno}: duplicate ranked CUI {cui}")
        seen.add(cui)
        cuis.append(cui)
    return cuis


def load_synonyms(lines: Iterable[str], source: str = "synonyms.tsv") -> dict[str, str]:
    """Read a CUI -> canonical-CUI merge map."""
    mapping: dict[str, str] = {}
    for lineno, (cui, canonical) in _tsv_rows(lines, SYNONYMS_HEADER, source):
        if not cui or not canonical:
            raise LoadError(f"{source}:{lineno}: empty CUI or CANONICAL")
        mapping[cui] = canonical
    return mapping


def apply_synonyms(cuis: Sequence[str], synonyms: Mapping[str, str]) -> list[str]:
    """Map CUIs to canonical form, deduplicating while keeping first (best) rank."""
    out: list[str] = []
    seen: set[str] = set()
    for cui in cuis:
        canonical = synonyms.get(cui, cui)
        if canonical not in seen:
            seen.add(canonical)
            out.append(canonical)
    return out


def merge_gold(gold: GoldStandard, synonyms: Mapping[str, str]) -> GoldStandard:
    return GoldStandard(
        disorder_cui=gold.disorder_cui,
        treatment_cuis=frozenset(synonyms.get(c, c) for c in gold.treatment_cuis),
        source_label=gold.source_label,
    )


def metrics_at_k(ranked: Sequence[str], gold: GoldStandard, k: int) -> EvalRow:
    """Precision, recall, and F-score of the top-k ranked CUIs.

    precision = hits / min(k, len(ranked)) so a list shorter than k is
    not penalized for items it never produced; recall = hits / |gold|;
    F = 2PR / (P + R), defined as 0 when P + R = 0.
    """
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    if len(set(ranked)) != len(ranked):
        raise ValueError("ranked list contains duplicate CUIs")
    top = ranked[:k]
    hits = sum(1 for cui in top if cui in gold.treatment_cuis)
    denominator = min(k, len(ranked))
    precision = Fraction(hits, denominator) if denominator else Fraction(0)
    recall = Fraction(hits, len(gold.treatment_cuis))
    if precision + recall > 0:
        f_score = 2 * precision * recall / (precision + recall)
    else:
        f_score = Fraction(0)
    return EvalRow(k=k, hits=hits, precision=precision, recall=recall, f_score=f_score)


def curve(ranked: Sequence[str], gold: GoldStandard, ks: Sequence[int]) -> list[EvalRow]:
    """One EvalRow per cutoff; ks must be sorted ascending."""
    if list(ks) != sorted(ks):
        raise ValueError("ks must be sorted ascending")
    return [metrics_at_k(ranked, gold, k) for k in ks]


def max_f_row(rows: Sequence[EvalRow]) -> EvalRow:
    """The row with the highest F-score; ties go to the smallest k."""
    if not rows:
        raise ValueError("no rows")
    return max(rows, key=lambda r: (r.f_score, -r.k))


def emit_report(rows: Sequence[EvalRow], format: str = "csv") -> str:
    """Render evaluation rows as a CSV table or a plot-data document.

    "csv" produces `k,hits,precision,recall,f_score` with LF endings;
    "plot" produces a JSON precision-vs-recall point series for external
    plotting tools.
    """
    if not rows:
        raise ValueError("no rows to report")
    if format == "csv":
        lines = ["k,hits,precision,recall,f_score"]
        for row in rows:
            lines.append(
                f"{row.k},{row.hits},{float(row.precision):.6f},"
                f"{float(row.recall):.6f},{float(row.f_score):.6f}"
            )
        return "\n".join(lines) + "\n"
    if format == "plot":
        points = [
            {
                "k": row.k,
                "recall": float(row.recall),
                "precision": float(row.precision),
                "f_score": float(row.f_score),
            }
            for row in rows
        ]
        return json.dumps({"points": points}, indent=2) + "\n"
    raise ValueError(f"unknown report format {format!r}; expected one of {REPORT_FORMATS}")
