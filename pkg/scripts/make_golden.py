#!/usr/bin/env python3
"""Regenerate the committed golden outputs under tests/golden/.

Every value is recomputed here from the raw fixture files with plain
loops and exact fractions, deliberately NOT importing the package, so
the goldens stay an independent check on the pipeline: if both this
script and the package contained the same bug, it would have to be
introduced twice.

Outputs (byte-identical to the corresponding CLI commands):
  extract_af.tsv   trendex extract --disease "atrial fibrillation"
  rank_af_new.tsv  trendex rank --disease C0004238 --profile new
  eval_af_new.csv  trendex eval --ranked ... --gold ... --out ...

Run from the repository root after scripts/build_fixtures.py.
"""

from __future__ import annotations

from fractions import Fraction
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent
FIXTURE_DIR = ROOT / "data" / "fixture"
GOLDEN_DIR = ROOT / "tests" / "golden"

AF_CUI = "C0004238"
THRESHOLD = Fraction(1, 100)
EPOCHS = [(1980, 1985), (1986, 1990), (1991, 1995), (1996, 2000),
          (2001, 2005), (2006, 2010), (2011, 2013)]
NEW_WEIGHTS = [1, 2, 3, 4, 5, 6, 7]
EVAL_KS = [10, 20, 30, 40, 50, 60, 70, 80, 90, 100]


def read_tsv(path: Path) -> list[list[str]]:
    lines = path.read_text(encoding="utf-8").splitlines()
    return [line.split("\t") for line in lines[1:] if line]


def af_candidates() -> list[tuple[str, str, set[tuple[str, int]]]]:
    """(cui, name, distinct (pmid, year) pairs), sorted by cui."""
    evidence: dict[str, set[tuple[str, int]]] = {}
    names: dict[str, tuple[int, str]] = {}  # cui -> (lowest id, name)
    for row in read_tsv(FIXTURE_DIR / "predications.tsv"):
        (row_id, pmid, year, subj_cui, subj_name, _semtype, subj_generic,
         predicate, obj_cui, _obj_name, _obj_semtype, obj_generic, _sentence) = row
        if predicate != "TREATS" or obj_cui != AF_CUI:
            continue
        if subj_generic == "1" or obj_generic == "1":
            continue
        evidence.setdefault(subj_cui, set()).add((pmid, int(year)))
        if subj_cui not in names or int(row_id) < names[subj_cui][0]:
            names[subj_cui] = (int(row_id), subj_name)
    return [(cui, names[cui][1], pairs) for cui, pairs in sorted(evidence.items())]


def write_extract_golden(candidates) -> None:
    lines = ["CUI\tNAME\tABSTRACTS"]
    for cui, name, pairs in candidates:
        lines.append(f"{cui}\t{name}\t{len(pairs)}")
    out = GOLDEN_DIR / "extract_af.tsv"
    out.write_text("\n".join(lines) + "\n", encoding="utf-8", newline="")
    print(f"wrote {out.relative_to(ROOT)}")


def write_rank_golden(candidates) -> None:
    totals = {cui: int(total) for cui, total in read_tsv(FIXTURE_DIR / "counts.tsv")}
    cocounts = {
        (t, d): int(c) for t, d, c in read_tsv(FIXTURE_DIR / "cocounts.tsv")
    }
    retained = []
    for cui, name, pairs in candidates:
        ratio = Fraction(cocounts.get((cui, AF_CUI), 0), totals[cui])
        if ratio < THRESHOLD:
            continue
        counts = []
        for start, end in EPOCHS:
            counts.append(len({p for p, y in pairs if start <= y <= end}))
        retained.append((cui, name, counts))

    columns = list(zip(*(counts for _, _, counts in retained)))
    scored = []
    for cui, name, counts in retained:
        total = Fraction(0)
        for j, value in enumerate(counts):
            low, high = min(columns[j]), max(columns[j])
            if high != low:
                total += NEW_WEIGHTS[j] * Fraction(value - low, high - low)
        scored.append((cui, name, counts, total))
    scored.sort(key=lambda item: (-item[3], -sum(item[2]), item[0]))

    lines = ["RANK\tCUI\tNAME\tSCORE"]
    for position, (cui, name, _counts, total) in enumerate(scored, start=1):
        lines.append(f"{position}\t{cui}\t{name}\t{float(total):.6f}")
    out = GOLDEN_DIR / "rank_af_new.tsv"
    out.write_text("\n".join(lines) + "\n", encoding="utf-8", newline="")
    print(f"wrote {out.relative_to(ROOT)}")


def write_eval_golden() -> None:
    ranked = [row[0] for row in read_tsv(FIXTURE_DIR / "eval" / "ranked_af_new.tsv")]
    gold = {row[0] for row in read_tsv(FIXTURE_DIR / "eval" / "gold_af_new.tsv")}
    lines = ["k,hits,precision,recall,f_score"]
    for k in EVAL_KS:
        hits = sum(1 for cui in ranked[:k] if cui in gold)
        precision = Fraction(hits, min(k, len(ranked)))
        recall = Fraction(hits, len(gold))
        if precision + recall > 0:
            f_score = 2 * precision * recall / (precision + recall)
        else:
            f_score = Fraction(0)
        lines.append(
            f"{k},{hits},{float(precision):.6f},{float(recall):.6f},{float(f_score):.6f}"
        )
    out = GOLDEN_DIR / "eval_af_new.csv"
    out.write_text("\n".join(lines) + "\n", encoding="utf-8", newline="")
    print(f"wrote {out.relative_to(ROOT)}")


def main() -> None:
    GOLDEN_DIR.mkdir(parents=True, exist_ok=True)
    candidates = af_candidates()
    write_extract_golden(candidates)
    write_rank_golden(candidates)
    write_eval_golden()


if __name__ == "__main__":
    main()
