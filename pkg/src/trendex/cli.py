"""Operator entry point: extract, rank, evaluate, and serve.

Exit codes: 0 success, 1 operational error (missing files, bad flags,
busy port), 2 empty-result conditions (no disorder found, nothing to
rank). No command mutates its input files.
"""

from __future__ import annotations

import argparse
import os
import socket
import sys
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from .errors import LoadError, TrendexError
from .evaluation import (
    apply_synonyms,
    emit_report,
    load_gold,
    load_ranked_list,
    load_synonyms,
    max_f_row,
    merge_gold,
)
from .pipeline import DataBundle, load_bundle, rank_for_disorder, resolve_disorders
from .specificity_filter import RemoteCountProvider, as_threshold
from .trend_ranking import WeightProfile, parse_weights

DEFAULT_KS = "10,20,30,40,50,60,70,80,90,100"


@dataclass
class CliConfig:
    data_dir: Path
    epoch_override: Path | None
    threshold: Fraction
    provider: str  # "local" or "remote"
    counts_url: str | None


def entrypoint() -> None:
    sys.exit(main())


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        config = _config_from(args)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    try:
        return args.handler(args, config)
    except (TrendexError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="trendex", description=__doc__)
    parser.add_argument(
        "--data-dir",
        default=os.environ.get("TRENDEX_DATA_DIR", "data"),
        help="directory with the TSV data files (env TRENDEX_DATA_DIR)",
    )
    parser.add_argument("--epochs", default=None, help="optional epochs.tsv override")
    parser.add_argument(
        "--threshold", default="0.01", help="specificity ratio cutoff in (0,1), default 0.01"
    )
    parser.add_argument(
        "--provider", choices=("local", "remote"), default="local",
        help="mention-count provider backing the specificity filter",
    )
    parser.add_argument("--counts-url", default=None, help="base URL for --provider remote")
    sub = parser.add_subparsers(dest="command", required=True)

    p_extract = sub.add_parser("extract", help="list treatment candidates for a disease")
    p_extract.add_argument("--disease", required=True, help="disease name or CUI")
    p_extract.set_defaults(handler=_cmd_extract)

    p_rank = sub.add_parser("rank", help="rank treatments under a weight profile")
    p_rank.add_argument("--disease", required=True, help="disorder CUI or name")
    p_rank.add_argument(
        "--profile", choices=("new", "established", "custom"), default="new"
    )
    p_rank.add_argument("--weights", default=None, help="7 comma-separated weights for custom")
    p_rank.add_argument("--limit", type=int, default=None)
    p_rank.set_defaults(handler=_cmd_rank)

    p_eval = sub.add_parser("eval", help="score a ranking against a gold standard")
    group = p_eval.add_mutually_exclusive_group(required=True)
    group.add_argument("--disease", help="disorder CUI; ranking computed from the store")
    group.add_argument("--ranked", help="pre-ranked CUI list file (CUI/NAME TSV)")
    p_eval.add_argument("--gold", required=True, help="gold standard file (CUI/NAME TSV)")
    p_eval.add_argument("--ks", default=DEFAULT_KS, help="comma-separated cutoffs, ascending")
    p_eval.add_argument("--out", default=None, help="write the CSV report here")
    p_eval.add_argument("--synonyms", default=None, help="optional CUI merge map file")
    p_eval.add_argument(
        "--profile", choices=("new", "established", "custom"), default="new"
    )
    p_eval.add_argument("--weights", default=None)
    p_eval.set_defaults(handler=_cmd_eval)

    p_serve = sub.add_parser("serve", help="run the HTTP service")
    p_serve.add_argument(
        "--port", type=int, default=int(os.environ.get("TRENDEX_PORT", "8750"))
    )
    p_serve.add_argument("--host", default="127.0.0.1")
    p_serve.set_defaults(handler=_cmd_serve)
    return parser


def _config_from(args: argparse.Namespace) -> CliConfig:
    return CliConfig(
        data_dir=Path(args.data_dir),
        epoch_override=Path(args.epochs) if args.epochs else None,
        threshold=as_threshold(args.threshold),
        provider=args.provider,
        counts_url=args.counts_url,
    )


def _load(config: CliConfig) -> DataBundle:
    provider = None
    if config.provider == "remote":
        if not config.counts_url:
            raise LoadError("--provider remote requires --counts-url")
        provider = RemoteCountProvider(config.counts_url)
    return load_bundle(config.data_dir, config.epoch_override, provider)


def _pick_disorder(bundle: DataBundle, query: str) -> str | None:
    disorders = resolve_disorders(bundle, query)
    if not disorders:
        return None
    if len(disorders) > 1:
        names = ", ".join(f"{c.cui} ({c.preferred_name})" for c in disorders)
        print(f"query matched multiple disorders: {names}; using {disorders[0].cui}",
              file=sys.stderr)
    return disorders[0].cui


def _profile_from(args: argparse.Namespace) -> WeightProfile:
    if args.profile == "custom":
        if not args.weights:
            raise ValueError("--profile custom requires --weights w1,...,w7")
        return WeightProfile.custom(parse_weights(args.weights))
    return WeightProfile.new() if args.profile == "new" else WeightProfile.established()


def _cmd_extract(args: argparse.Namespace, config: CliConfig) -> int:
    from .predication_store import treatments_for

    bundle = _load(config)
    disorder_cui = _pick_disorder(bundle, args.disease)
    if disorder_cui is None:
        print("no disorder found")
        return 2
    candidates = treatments_for(bundle.store, disorder_cui)
    print("CUI\tNAME\tABSTRACTS")
    for candidate in candidates:
        print(f"{candidate.cui}\t{candidate.name}\t{len(candidate.evidence)}")
    return 0


def _cmd_rank(args: argparse.Namespace, config: CliConfig) -> int:
    try:
        profile = _profile_from(args)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        print("usage: trendex rank --profile custom --weights w1,w2,w3,w4,w5,w6,w7",
              file=sys.stderr)
        return 1
    if args.limit is not None and args.limit < 1:
        print("error: --limit must be >= 1", file=sys.stderr)
        return 1
    bundle = _load(config)
    disorder_cui = _pick_disorder(bundle, args.disease)
    if disorder_cui is None:
        print("no disorder found")
        return 2
    result = rank_for_disorder(bundle, disorder_cui, profile, config.threshold)
    if not result.ranked:
        print("no treatments found")
        return 2
    rows = result.ranked[: args.limit] if args.limit else result.ranked
    print("RANK\tCUI\tNAME\tSCORE")
    for treatment in rows:
        print(f"{treatment.rank}\t{treatment.cui}\t{treatment.name}\t{float(treatment.score):.6f}")
    return 0


def _cmd_eval(args: argparse.Namespace, config: CliConfig) -> int:
    try:
        ks = [int(k) for k in args.ks.split(",") if k.strip()]
    except ValueError:
        print(f"error: unparseable --ks {args.ks!r}", file=sys.stderr)
        return 1
    if not ks or ks != sorted(ks) or ks[0] < 1:
        print("error: --ks must be positive integers in ascending order", file=sys.stderr)
        return 1

    if args.ranked:
        with open(args.ranked, encoding="utf-8") as handle:
            ranked_cuis = load_ranked_list(handle, source=args.ranked)
    else:
        try:
            profile = _profile_from(args)
        except ValueError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return 1
        bundle = _load(config)
        disorder_cui = _pick_disorder(bundle, args.disease)
        if disorder_cui is None:
            print("no disorder found")
            return 2
        result = rank_for_disorder(bundle, disorder_cui, profile, config.threshold)
        ranked_cuis = [t.cui for t in result.ranked]

    with open(args.gold, encoding="utf-8") as handle:
        gold = load_gold(handle, source=args.gold)
    if args.synonyms:
        with open(args.synonyms, encoding="utf-8") as handle:
            synonyms = load_synonyms(handle, source=args.synonyms)
        ranked_cuis = apply_synonyms(ranked_cuis, synonyms)
        gold = merge_gold(gold, synonyms)

    from .evaluation import curve

    rows = curve(ranked_cuis, gold, ks)
    report = emit_report(rows, "csv")
    if args.out:
        Path(args.out).write_text(report, encoding="utf-8", newline="")
    else:
        print(report, end="")
    best = max_f_row(rows)
    print(
        f"max F={float(best.f_score):.3f} at k={best.k} "
        f"(precision={float(best.precision):.3f}, recall={float(best.recall):.3f})"
    )
    return 0


def _cmd_serve(args: argparse.Namespace, config: CliConfig) -> int:
    import uvicorn

    from .service_api import create_app

    bundle = _load(config)
    port = args.port
    try:
        with socket.socket(socket.AF_INET, socket.SOCK_STREAM) as probe:
            probe.setsockopt(socket.SOL_SOCKET, socket.SO_REUSEADDR, 1)
            probe.bind((args.host, port))
            port = probe.getsockname()[1]  # resolves an ephemeral --port 0
    except OSError as exc:
        print(f"error: cannot bind {args.host}:{args.port}: {exc}", file=sys.stderr)
        return 1
    print(f"listening on http://{args.host}:{port}", flush=True)
    app = create_app(bundle, config.threshold)
    uvicorn.run(app, host=args.host, port=port, log_level="info")
    return 0
