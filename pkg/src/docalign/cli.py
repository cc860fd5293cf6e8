"""Command-line entry point: one subcommand per pipeline stage.

Exit codes: 0 success, 1 usage problems, 2 data or file errors.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Optional

from . import FORMAT_VERSION, __version__
from . import pipeline
from .config import PipelineConfig
from .errors import ConfigurationError, DocalignError

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2

METHOD_CHOICES = ("de", "sa", "sl", "idf", "slidf")


class UsageError(Exception):
    """Bad or missing settings; maps to exit code 1."""


class _Parser(argparse.ArgumentParser):
    """argparse exits 2 on usage problems; this toolkit reserves 2 for data."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, "%s: error: %s\n" % (self.prog, message))


def build_parser() -> _Parser:
    parser = _Parser(
        prog="docalign",
        description="Cross-lingual document alignment pipeline.",
    )
    parser.add_argument(
        "--version",
        action="version",
        version="docalign %s (format %s)" % (__version__, FORMAT_VERSION),
    )
    parser.add_argument("--config", help="JSON config file with per-stage sections")
    parser.add_argument("--log-level", default=None, help="stderr log level")
    parser.add_argument("--manifest", help="run manifest JSONL (default: beside outputs)")
    parser.add_argument("--parallelism", type=int, default=None, help="worker threads")
    sub = parser.add_subparsers(dest="command", metavar="stage", parser_class=_Parser)

    p = sub.add_parser("dedup", help="normalize URLs and keep the longest duplicate")
    p.add_argument("--in", dest="in_path", help="raw documents JSONL")
    p.add_argument("--out", dest="out_path", help="deduplicated documents JSONL")
    p.add_argument("--report", dest="report_path", help="write counts JSON here")

    p = sub.add_parser("langid", help="tag documents with their dominant language")
    p.add_argument("--profiles", dest="profiles", help="directory of profile JSON files")
    p.add_argument("--in", dest="in_path")
    p.add_argument("--out", dest="out_path")

    p = sub.add_parser("match-urls", help="emit candidate pairs from URL structure")
    p.add_argument("--patterns", dest="patterns", help="pattern table JSON (optional)")
    p.add_argument("--in", dest="in_path")
    p.add_argument("--out", dest="out_path")

    p = sub.add_parser("align", help="score and competitively match documents")
    p.add_argument("--method", dest="method", choices=METHOD_CHOICES)
    p.add_argument("--embeddings", dest="embeddings")
    p.add_argument("--sidecar", dest="sidecar", help="embedding offset sidecar (optional)")
    p.add_argument("--docs", dest="docs")
    p.add_argument("--src-lang", dest="src_lang")
    p.add_argument("--tgt-lang", dest="tgt_lang")
    p.add_argument("--out", dest="out_path")

    p = sub.add_parser("eval", help="recall of predicted pairs against gold pairs")
    p.add_argument("--pred", dest="pred", action="append")
    p.add_argument("--gold", dest="gold", action="append")
    p.add_argument("--lang", dest="lang", action="append")
    p.add_argument("--tier-map", dest="tier_map", help="JSON map language -> tier")
    p.add_argument("--report", dest="report_path")

    p = sub.add_parser("mine", help="mine parallel sentences from aligned pairs")
    p.add_argument("--aligned", dest="aligned")
    p.add_argument("--docs", dest="docs")
    p.add_argument("--embeddings", dest="embeddings")
    p.add_argument("--sidecar", dest="sidecar")
    p.add_argument("--k", dest="k", type=int)
    p.add_argument("--threshold", dest="threshold", type=float)
    p.add_argument("--out", dest="out_path")

    p = sub.add_parser("agreement", help="Krippendorff alpha over an annotation CSV")
    p.add_argument("--in", dest="in_path", help="CSV of unit_id,rater_id,label")
    p.add_argument("--report", dest="report_path")

    p = sub.add_parser("segment", help="split documents into the sentences JSONL")
    p.add_argument("--in", dest="in_path")
    p.add_argument("--out", dest="out_path")

    p = sub.add_parser("hash-embed", help="deterministic hash vectors, no model needed")
    p.add_argument("--in", dest="in_path", help="sentences JSONL")
    p.add_argument("--dim", dest="dim", type=int)
    p.add_argument("--out", dest="out_path", help="binary embedding file")
    p.add_argument("--sidecar", dest="sidecar", help="offset sidecar JSONL to write")
    p.add_argument("--export-manifest", dest="export_manifest", help="manifest JSON to write")

    return parser


def _need(cfg: PipelineConfig, stage: str, key: str, cli_value, default=None, cast=None):
    value = _opt(cfg, stage, key, cli_value, default=default, cast=cast)
    if value is None:
        raise UsageError("missing --%s for %s" % (key, stage))
    return value


def _opt(cfg: PipelineConfig, stage: str, key: str, cli_value, default=None, cast=None):
    # Bad settings are usage problems no matter which layer supplied them.
    try:
        return cfg.resolve(key, stage=stage, cli=cli_value, default=default, cast=cast)
    except ConfigurationError as exc:
        raise UsageError(str(exc))


def _default_manifest(cfg: PipelineConfig, stage: str, args, out_path: Optional[str]):
    explicit = _opt(cfg, stage, "manifest", args.manifest, cast=str)
    if explicit:
        return explicit
    if out_path:
        return str(Path(out_path).parent / "docalign-manifest.jsonl")
    return None


def _dispatch(args, cfg: PipelineConfig) -> int:
    stage = args.command
    if stage == "dedup":
        in_path = _need(cfg, stage, "in", args.in_path, cast=str)
        out_path = _need(cfg, stage, "out", args.out_path, cast=str)
        pipeline.run_dedup(
            in_path,
            out_path,
            report_path=_opt(cfg, stage, "report", args.report_path, cast=str),
            manifest_path=_default_manifest(cfg, stage, args, out_path),
        )
        return EXIT_OK
    if stage == "langid":
        out_path = _need(cfg, stage, "out", args.out_path, cast=str)
        pipeline.run_langid(
            _need(cfg, stage, "profiles", args.profiles, cast=str),
            _need(cfg, stage, "in", args.in_path, cast=str),
            out_path,
            manifest_path=_default_manifest(cfg, stage, args, out_path),
        )
        return EXIT_OK
    if stage == "match-urls":
        out_path = _need(cfg, stage, "out", args.out_path, cast=str)
        pipeline.run_match_urls(
            _need(cfg, stage, "in", args.in_path, cast=str),
            out_path,
            patterns_path=_opt(cfg, stage, "patterns", args.patterns, cast=str),
            manifest_path=_default_manifest(cfg, stage, args, out_path),
        )
        return EXIT_OK
    if stage == "align":
        method = str(_need(cfg, stage, "method", args.method)).lower()
        if method not in METHOD_CHOICES:
            raise UsageError("unknown method %r" % method)
        out_path = _need(cfg, stage, "out", args.out_path, cast=str)
        parallelism = _opt(cfg, stage, "parallelism", args.parallelism, default=1, cast=int)
        if parallelism < 1:
            raise UsageError("parallelism must be at least 1")
        pipeline.run_align(
            docs_path=_need(cfg, stage, "docs", args.docs, cast=str),
            embeddings_path=_need(cfg, stage, "embeddings", args.embeddings, cast=str),
            method=method,
            src_lang=_need(cfg, stage, "src-lang", args.src_lang, cast=str),
            tgt_lang=_need(cfg, stage, "tgt-lang", args.tgt_lang, cast=str),
            out_path=out_path,
            sidecar_path=_opt(cfg, stage, "sidecar", args.sidecar, cast=str),
            parallelism=parallelism,
            manifest_path=_default_manifest(cfg, stage, args, out_path),
        )
        return EXIT_OK
    if stage == "eval":
        pred = args.pred or []
        gold = args.gold or []
        langs = args.lang or []
        if not pred:
            raise UsageError("missing --pred for eval")
        if not gold:
            raise UsageError("missing --gold for eval")
        report_path = _opt(cfg, stage, "report", args.report_path, cast=str)
        report = pipeline.run_eval(
            pred,
            gold,
            langs,
            report_path=report_path,
            tier_map_path=_opt(cfg, stage, "tier-map", args.tier_map, cast=str),
            manifest_path=_default_manifest(cfg, stage, args, report_path or pred[0]),
        )
        if not report_path:
            print(json.dumps(report, sort_keys=True, indent=2))
        return EXIT_OK
    if stage == "mine":
        out_path = _need(cfg, stage, "out", args.out_path, cast=str)
        pipeline.run_mine(
            aligned_path=_need(cfg, stage, "aligned", args.aligned, cast=str),
            docs_path=_need(cfg, stage, "docs", args.docs, cast=str),
            embeddings_path=_need(cfg, stage, "embeddings", args.embeddings, cast=str),
            out_path=out_path,
            k=_opt(cfg, stage, "k", args.k, default=4, cast=int),
            threshold=_opt(cfg, stage, "threshold", args.threshold, default=1.06, cast=float),
            sidecar_path=_opt(cfg, stage, "sidecar", args.sidecar, cast=str),
            manifest_path=_default_manifest(cfg, stage, args, out_path),
        )
        return EXIT_OK
    if stage == "agreement":
        in_path = _need(cfg, stage, "in", args.in_path, cast=str)
        report_path = _opt(cfg, stage, "report", args.report_path, cast=str)
        report = pipeline.run_agreement(
            in_path,
            report_path=report_path,
            manifest_path=_default_manifest(cfg, stage, args, report_path or in_path),
        )
        if not report_path:
            print(json.dumps(report, sort_keys=True, indent=2))
        return EXIT_OK
    if stage == "segment":
        out_path = _need(cfg, stage, "out", args.out_path, cast=str)
        pipeline.run_segment(
            _need(cfg, stage, "in", args.in_path, cast=str),
            out_path,
            manifest_path=_default_manifest(cfg, stage, args, out_path),
        )
        return EXIT_OK
    if stage == "hash-embed":
        out_path = _need(cfg, stage, "out", args.out_path, cast=str)
        pipeline.run_hash_embed(
            _need(cfg, stage, "in", args.in_path, cast=str),
            out_path,
            dim=_need(cfg, stage, "dim", args.dim, default=128, cast=int),
            sidecar_path=_opt(cfg, stage, "sidecar", args.sidecar, cast=str),
            manifest_out=_opt(cfg, stage, "export-manifest", args.export_manifest, cast=str),
            manifest_path=_default_manifest(cfg, stage, args, out_path),
        )
        return EXIT_OK
    raise UsageError("unknown stage %r" % stage)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if not args.command:
        parser.error("a stage subcommand is required")
    level = args.log_level or "WARNING"
    logging.basicConfig(
        level=getattr(logging, str(level).upper(), logging.WARNING),
        stream=sys.stderr,
        format="%(levelname)s %(name)s %(message)s",
    )
    try:
        try:
            cfg = PipelineConfig.load(args.config)
        except ConfigurationError as exc:
            raise UsageError(str(exc))
        return _dispatch(args, cfg)
    except UsageError as exc:
        print("docalign: %s" % exc, file=sys.stderr)
        return EXIT_USAGE
    except (DocalignError, OSError) as exc:
        print("docalign: error: %s" % exc, file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
