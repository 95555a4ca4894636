"""Pipeline CLI: run one release pair, or rank importances across reports."""
from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from . import __version__
from .errors import MissingToolError, PipelineError
from .model import DEFAULT_SEARCH_BUDGET, ModelReport
from .pipeline import run_pair
from .ranking import rank_importances


def _load_report(path: str) -> ModelReport:
    payload = json.loads(Path(path).read_text(encoding="utf-8"))
    return ModelReport(
        pair_id=payload["pair_id"],
        seed=payload["seed"],
        search_budget=payload["search_budget"],
        selected_features=payload["selected_features"],
        hyperparameters=payload["hyperparameters"],
        auc=payload["auc"],
        importances=payload["importances"],
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="defectpipe",
        description="Cross-release defect modeling over ownership feature CSVs",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="train, evaluate, and explain one release pair")
    p_run.add_argument("--train", required=True, help="features CSV of release i-1")
    p_run.add_argument("--test", required=True, help="features CSV of release i")
    p_run.add_argument("--out", required=True, help="output directory")
    p_run.add_argument("--seed", type=int, default=0)
    p_run.add_argument("--budget", type=int, default=DEFAULT_SEARCH_BUDGET)
    p_run.add_argument("--top-k", type=int, default=5, dest="top_k")
    p_run.add_argument("-v", "--verbose", action="store_true")

    p_rank = sub.add_parser(
        "rank", help="pool importances from model reports and rank via the miner CLI"
    )
    p_rank.add_argument("reports", nargs="+", help="model_report_*.json files")
    p_rank.add_argument("--out", required=True, help="output directory")
    p_rank.add_argument("-v", "--verbose", action="store_true")

    sub.add_parser("version", help="print the version")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        stream=sys.stderr,
        level=logging.INFO if getattr(args, "verbose", False) else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        if args.command == "version":
            print(__version__)
        elif args.command == "run":
            result = run_pair(
                args.train,
                args.test,
                args.out,
                seed=args.seed,
                search_budget=args.budget,
                top_k=args.top_k,
            )
            auc = result.model.report.auc
            print(f"auc: {'absent' if auc is None else f'{auc:.4f}'}")
        elif args.command == "rank":
            reports = [_load_report(p) for p in args.reports]
            ranks = rank_importances(reports, args.out)
            for feature, rank in sorted(ranks.items(), key=lambda kv: (kv[1], kv[0])):
                print(f"{rank}\t{feature}")
    except PipelineError as exc:
        print(f"defectpipe: error: {exc}", file=sys.stderr)
        return 2
    except MissingToolError as exc:
        print(f"defectpipe: environment error: {exc}", file=sys.stderr)
        return 3
    return 0


if __name__ == "__main__":
    sys.exit(main())
