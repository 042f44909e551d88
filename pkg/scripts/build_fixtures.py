#!/usr/bin/env python3
"""Regenerate the bundled fixture corpus under data/fixture/.

The corpus is small enough to audit by hand but covers every pipeline
stage: a dictionary with nested surface forms, a lexicon exercising all
compression rules, a 50-row predication file with generic-argument and
non-TREATS noise, count tables that drive the specificity filter
(including one candidate sitting exactly on the 1% boundary), and
synthetic ranked/gold lists whose cumulative hit profile matches the
evaluation vectors the acceptance suite checks.

Everything is deterministic; rerunning the script reproduces the same
bytes. Run from the repository root:

    python scripts/build_fixtures.py
"""

from __future__ import annotations

from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent
FIXTURE_DIR = ROOT / "data" / "fixture"

AF = ("C0004238", "Atrial Fibrillation", "Disease or Syndrome")
CHF = ("C0018802", "Congestive Heart Failure", "Disease or Syndrome")
STROKE = ("C0038454", "Stroke", "Disease or Syndrome")

# Treatment concepts: cui -> (name, semantic type).
TREATMENTS = {
    "C0547070": ("Ablation", "Therapeutic or Preventive Procedure"),
    "C0013778": ("Electric Countershock", "Therapeutic or Preventive Procedure"),
    "C0003281": ("Anticoagulation", "Therapeutic or Preventive Procedure"),
    "C1277289": ("Stroke Prevention", "Therapeutic or Preventive Procedure"),
    "C0162563": ("Cardiac Ablation", "Therapeutic or Preventive Procedure"),
    "C0002598": ("Amiodarone", "Pharmacologic Substance"),
    "C0087111": ("Therapeutic procedure", "Therapeutic or Preventive Procedure"),
    "C0456081": ("Adjustment Action", "Health Care Activity"),
    "C0003015": ("Angiotensin-Converting Enzyme Inhibitors", "Pharmacologic Substance"),
    "C0001645": ("Adrenergic beta-Antagonists", "Pharmacologic Substance"),
    "C0012265": ("Digoxin", "Pharmacologic Substance"),
    "C0043031": ("Warfarin", "Pharmacologic Substance"),
    "C1522326": ("Therapy", "Functional Concept"),
}

DICTIONARY_ROWS = [
    ("C0004238", "Atrial Fibrillation", "Disease or Syndrome", "1"),
    ("C0004238", "auricular fibrillation", "Disease or Syndrome", "0"),
    ("C0004238", "AF", "Disease or Syndrome", "0"),
    ("C0018802", "Congestive Heart Failure", "Disease or Syndrome", "1"),
    ("C0018802", "congestive cardiac failure", "Disease or Syndrome", "0"),
    ("C0018801", "Heart Failure", "Disease or Syndrome", "1"),
    ("C0232197", "Fibrillation", "Finding", "1"),
    ("C0038454", "Stroke", "Disease or Syndrome", "1"),
    ("C0547070", "Ablation", "Therapeutic or Preventive Procedure", "1"),
    ("C0013778", "Electric Countershock", "Therapeutic or Preventive Procedure", "1"),
    ("C0013778", "electrical cardioversion", "Therapeutic or Preventive Procedure", "0"),
    ("C0003281", "Anticoagulation", "Therapeutic or Preventive Procedure", "1"),
    ("C1277289", "Stroke Prevention", "Therapeutic or Preventive Procedure", "1"),
    ("C0162563", "Cardiac Ablation", "Therapeutic or Preventive Procedure", "1"),
    ("C0002598", "Amiodarone", "Pharmacologic Substance", "1"),
    ("C0087111", "Therapeutic procedure", "Therapeutic or Preventive Procedure", "1"),
    ("C0456081", "Adjustment Action", "Health Care Activity", "1"),
    ("C0003015", "Angiotensin-Converting Enzyme Inhibitors", "Pharmacologic Substance", "1"),
    ("C0001645", "Adrenergic beta-Antagonists", "Pharmacologic Substance", "1"),
    ("C0012265", "Digoxin", "Pharmacologic Substance", "1"),
    ("C0043031", "Warfarin", "Pharmacologic Substance", "1"),
    ("C1522326", "Therapy", "Functional Concept", "1"),
]

# Raw lexicon records. Only the first four survive compression: one row
# is an identity mapping, one is multi-token on both sides, one has a
# multi-token term, and one is a duplicate of an earlier term.
LEXICON_ROWS = [
    ("fibrillations", "fibrillation"),
    ("ablations", "ablation"),
    ("anticoagulants", "anticoagulation"),
    ("strokes", "stroke"),
    ("atrial", "atrial"),
    ("heart attacks", "heart attack"),
    ("beta-antagonists", "beta antagonist"),
    ("Fibrillations", "fibrilation"),
]

DISORDER_SEMTYPES = [
    "Abnormality",
    "Dysfunction",
    "Disease or Syndrome",
    "Finding",
    "Injury or Poisoning",
    "Pathologic Function",
    "Sign or Symptom",
]

# Evidence years per (treatment cui, disorder). One entry = one abstract.
# Epochs: 1980-1985, 1986-1990, 1991-1995, 1996-2000, 2001-2005,
# 2006-2010, 2011-2013. The per-epoch count matrix this produces fixes
# the fixture rankings: Ablation tops the recency-weighted profile,
# Electric Countershock tops the flat profile, and the two orders differ.
AF_EVIDENCE = [
    ("C0013778", [1981, 1983, 1987, 1989, 1992, 1994, 1997, 1999, 2003]),
    ("C0003281", [1982, 1988, 1993, 1998, 2002, 2007, 2012]),
    ("C0002598", [1984, 1999, 2012]),
    ("C0547070", [2003, 2005, 2006, 2008, 2010, 2011, 2012, 2013]),
    ("C1277289", [2009, 2011, 2013]),
    ("C0162563", [2004, 2008]),
    ("C0087111", [1995, 2005]),
    ("C0456081", [1998]),
]

CHF_EVIDENCE = [
    ("C0003015", [2002, 2007, 2011, 2013]),
    ("C0001645", [2008, 2012, 2013]),
    ("C0012265", [1987, 1992, 1997]),
]

# counts.tsv totals and cocounts.tsv co-mention counts. Ratios for the
# AF candidates: 0.05, 0.05, 0.03, 0.1, 0.06, exactly 0.01 (retained
# under the strict-< rule), 0.0008 (removed), 2/9000 (removed).
TOTALS = {
    "C0013778": 1200,
    "C0003281": 900,
    "C0002598": 400,
    "C0547070": 800,
    "C1277289": 150,
    "C0162563": 600,
    "C0087111": 50000,
    "C0456081": 9000,
    "C0003015": 700,
    "C0001645": 650,
    "C0012265": 500,
    "C0043031": 350,
    "C1522326": 12000,
}

COCOUNTS = [
    ("C0013778", "C0004238", 60),
    ("C0003281", "C0004238", 45),
    ("C0002598", "C0004238", 12),
    ("C0547070", "C0004238", 80),
    ("C1277289", "C0004238", 9),
    ("C0162563", "C0004238", 6),
    ("C0087111", "C0004238", 40),
    ("C0456081", "C0004238", 2),
    ("C0003015", "C0018802", 210),
    ("C0001645", "C0018802", 130),
    ("C0012265", "C0018802", 100),
]

EPOCHS = [(1980, 1985), (1986, 1990), (1991, 1995), (1996, 2000),
          (2001, 2005), (2006, 2010), (2011, 2013)]

# Guideline-style gold standard over the fixture AF treatments.
GOLD_AF = [
    ("C0547070", "Ablation"),
    ("C0013778", "Electric Countershock"),
    ("C0003281", "Anticoagulation"),
    ("C0043031", "Warfarin"),
]

# Synthetic evaluation lists: within each block of ten ranked items, the
# first `increment` are gold members, so cumulative hits at k=10..100
# follow the target profile exactly. Extra gold entries never appear in
# the ranked list, which sets the gold size (and so recall) on its own.
EVAL_SETS = {
    "af_new": {
        "increments": [7, 10, 6, 5, 7, 5, 3, 2, 3, 3],  # 51 hits in top 100
        "gold_size": 71,
        "ranked_prefix": "C85",
        "extra_prefix": "C86",
    },
    "chf_new": {
        "increments": [8, 6, 5, 5, 3, 4, 4, 4, 2, 4],  # 45 hits in top 100
        "gold_size": 79,
        "ranked_prefix": "C87",
        "extra_prefix": "C88",
    },
}


def write_tsv(path: Path, header: tuple[str, ...], rows) -> None:
    lines = ["\t".join(header)]
    lines.extend("\t".join(str(field) for field in row) for row in rows)
    path.write_text("\n".join(lines) + "\n", encoding="utf-8", newline="")
    print(f"wrote {path.relative_to(ROOT)} ({len(lines) - 1} rows)")


def build_predications() -> list[tuple]:
    rows: list[tuple] = []
    next_id = 1
    next_pmid = 100001
    pmid_of: dict[tuple[str, int], str] = {}

    def add(subj_cui, subj_name, subj_semtype, subj_generic, predicate,
            obj_cui, obj_name, obj_semtype, obj_generic, year, sentence,
            pmid=None):
        nonlocal next_id, next_pmid
        if pmid is None:
            pmid = str(next_pmid)
            next_pmid += 1
        rows.append((next_id, pmid, year, subj_cui, subj_name, subj_semtype,
                     subj_generic, predicate, obj_cui, obj_name, obj_semtype,
                     obj_generic, sentence))
        next_id += 1
        return pmid

    def add_treats(treatment_cui, disorder, year, pmid=None, subj_name=None,
                   sentence=None):
        name, semtype = TREATMENTS[treatment_cui]
        subj_name = subj_name or name
        obj_cui, obj_name, obj_semtype = disorder
        sentence = sentence or (
            f"{subj_name} was used to treat {obj_name.lower()} in a {year} cohort."
        )
        return add(treatment_cui, subj_name, semtype, "0", "TREATS",
                   obj_cui, obj_name, obj_semtype, "0", year, sentence, pmid)

    for treatment_cui, years in AF_EVIDENCE:
        for year in years:
            # The Cardiac Ablation 2008 abstract is the same paper as the
            # Ablation 2008 abstract, giving that pair a pmid overlap.
            shared = None
            if (treatment_cui, year) == ("C0162563", 2008):
                shared = pmid_of[("C0547070", 2008)]
            pmid = add_treats(treatment_cui, AF, year, pmid=shared)
            pmid_of[(treatment_cui, year)] = pmid

    # Same abstract asserting the same predication in a second sentence;
    # evidence still counts this pmid once.
    add_treats("C0547070", AF, 2012, pmid=pmid_of[("C0547070", 2012)],
               sentence="A second sentence in the same abstract repeats the claim.")

    # Generic-argument predications: excluded from every evidence count.
    add("C1522326", "Therapy", "Functional Concept", "1", "TREATS",
        *AF, "0", 2001, "Therapy improved outcomes for patients with atrial fibrillation.")
    add("C0013778", "Electric Countershock", "Therapeutic or Preventive Procedure", "0",
        "TREATS", *AF, "1", 2004,
        "Electric countershock treats this condition in selected patients.")

    # Non-TREATS predicates: present in the store, invisible to ranking.
    add("C0003281", "Anticoagulation", "Therapeutic or Preventive Procedure", "0",
        "PREVENTS", *STROKE, "0", 2005,
        "Anticoagulation prevents stroke in high-risk patients.")
    add("C0043031", "Warfarin", "Pharmacologic Substance", "0",
        "PREVENTS", *AF, "0", 2009,
        "Warfarin prevented recurrence of atrial fibrillation.")

    for treatment_cui, years in CHF_EVIDENCE:
        for year in years:
            add_treats(treatment_cui, CHF, year)

    return rows


def build_eval_files(name: str, spec: dict) -> None:
    increments = spec["increments"]
    ranked: list[tuple[str, str]] = []
    gold: list[tuple[str, str]] = []
    position = 0
    for block, hits_in_block in enumerate(increments):
        for slot in range(10):
            position += 1
            cui = f"{spec['ranked_prefix']}{position:05d}"
            ranked.append((cui, f"ranked item {position}"))
            if slot < hits_in_block:
                gold.append((cui, f"ranked item {position}"))
    extras = spec["gold_size"] - len(gold)
    assert extras >= 0, f"{name}: gold smaller than hit total"
    for j in range(1, extras + 1):
        gold.append((f"{spec['extra_prefix']}{j:05d}", f"unranked gold item {j}"))
    assert len(gold) == spec["gold_size"]

    eval_dir = FIXTURE_DIR / "eval"
    eval_dir.mkdir(parents=True, exist_ok=True)
    write_tsv(eval_dir / f"ranked_{name}.tsv", ("CUI", "NAME"), ranked)
    write_tsv(eval_dir / f"gold_{name}.tsv", ("CUI", "NAME"), gold)


def main() -> None:
    FIXTURE_DIR.mkdir(parents=True, exist_ok=True)

    write_tsv(FIXTURE_DIR / "dictionary.tsv",
              ("CUI", "TERM", "SEMTYPE", "PREFERRED"), DICTIONARY_ROWS)
    write_tsv(FIXTURE_DIR / "lexicon.tsv", ("TERM", "BASE_FORM"), LEXICON_ROWS)
    write_tsv(FIXTURE_DIR / "semantic_groups.tsv", ("GROUP", "SEMTYPE"),
              [("disorder", semtype) for semtype in DISORDER_SEMTYPES])

    predications = build_predications()
    assert len(predications) == 50, f"corpus must have 50 rows, got {len(predications)}"
    write_tsv(FIXTURE_DIR / "predications.tsv",
              ("ID", "PMID", "YEAR", "SUBJ_CUI", "SUBJ_NAME", "SUBJ_SEMTYPE",
               "SUBJ_GENERIC", "PREDICATE", "OBJ_CUI", "OBJ_NAME",
               "OBJ_SEMTYPE", "OBJ_GENERIC", "SENTENCE"),
              predications)

    write_tsv(FIXTURE_DIR / "counts.tsv", ("CUI", "TOTAL_ABSTRACTS"),
              sorted(TOTALS.items()))
    write_tsv(FIXTURE_DIR / "cocounts.tsv",
              ("TREATMENT_CUI", "DISORDER_CUI", "CO_ABSTRACTS"), COCOUNTS)
    write_tsv(FIXTURE_DIR / "epochs.tsv", ("START", "END"), EPOCHS)
    write_tsv(FIXTURE_DIR / "gold_af.tsv", ("CUI", "NAME"), GOLD_AF)

    for name, spec in EVAL_SETS.items():
        build_eval_files(name, spec)


if __name__ == "__main__":
    main()
