"""Command line entry point: ``facediversity {extract,report,validate}``.

Exit codes: 0 success, 1 fatal input error, 2 partial (some records
rejected or unreadable; outputs are still written).
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from .diversity import BinConfig
from .errors import EmptyTable, ManifestParseError
from .pipeline import PipelineConfig, load_manifest, policy_from_dict, run_extract, run_report

EXIT_OK, EXIT_FATAL, EXIT_PARTIAL = 0, 1, 2


def _read_json(path):
    return json.loads(Path(path).read_text())


def _extract(args) -> int:
    policy = policy_from_dict(_read_json(args.policy)) if args.policy else policy_from_dict({})
    config = PipelineConfig.from_dict(_read_json(args.config)) if args.config else PipelineConfig()
    result = run_extract(args.manifest, args.out, policy, config, args.workers)
    print(f"{len(result.rows)} faces extracted, {len(result.rejections)} rejected -> {args.out}")
    return EXIT_PARTIAL if result.partial else EXIT_OK


def _report(args) -> int:
    bins = BinConfig.from_dict(_read_json(args.bins)) if args.bins else BinConfig()
    rep = run_report(args.features, args.out, bins)
    scored = sum(r.scores is not None for r in rep.rows)
    print(f"{scored}/{len(rep.rows)} dimensions scored -> {args.out}")
    return EXIT_OK


def _validate(args) -> int:
    records = load_manifest(args.manifest)
    print(f"{args.manifest}: {len(records)} valid records")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="facediversity", description=__doc__.splitlines()[0])
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    e = sub.add_parser("extract", help="compute the feature table for a manifest")
    e.add_argument("--manifest", required=True)
    e.add_argument("--out", required=True)
    e.add_argument("--policy", help="JSON quality policy")
    e.add_argument("--config", help="JSON pipeline config")
    e.add_argument("--workers", type=int, default=1)
    e.set_defaults(func=_extract)

    r = sub.add_parser("report", help="diversity statistics for a feature table")
    r.add_argument("--features", required=True, help="features.json or features.csv")
    r.add_argument("--out", required=True)
    r.add_argument("--bins", help="JSON bin configuration")
    r.set_defaults(func=_report)

    v = sub.add_parser("validate", help="schema-check a manifest")
    v.add_argument("--manifest", required=True)
    v.set_defaults(func=_validate)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (ManifestParseError, EmptyTable, OSError, ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FATAL


if __name__ == "__main__":
    sys.exit(main())
