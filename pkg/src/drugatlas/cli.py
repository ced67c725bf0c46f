"""Command line entry point.

Subcommands: run (all stages), ingest, compute, export, serve. Flags override
config-file values. Exit codes: 0 success, 2 config error, 3 data or I/O
error, 4 numeric failure. Log lines go to stderr, one event per line, with a
stable [stage] prefix for scraping.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from . import pipeline
from .config import PipelineConfig, load_config, validate_config
from .errors import ConfigError, DataError, IoFailure, NumericError
from .export import make_server

log = logging.getLogger("drugatlas")

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_DATA = 3
EXIT_NUMERIC = 4

_OVERRIDE_PATHS = [
    "input_csv",
    "output_dir",
    "country_registry",
    "alias_table",
    "drug_registry",
    "conversion_table",
]
_OVERRIDE_VALUES = [
    "year_min",
    "year_max",
    "duplicate_policy",
    "unknown_country_policy",
    "bandwidth_years",
    "ridge_lambda",
    "mds_tol",
    "mds_max_iter",
    "threads",
]


def _add_common_options(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", type=Path, help="flat key/value config file")
    parser.add_argument("--input-csv", type=Path)
    parser.add_argument("--output-dir", type=Path)
    parser.add_argument("--country-registry", type=Path)
    parser.add_argument("--alias-table", type=Path)
    parser.add_argument("--drug-registry", type=Path)
    parser.add_argument("--conversion-table", type=Path)
    parser.add_argument("--year-min", type=int)
    parser.add_argument("--year-max", type=int)
    parser.add_argument("--duplicate-policy", choices=["error", "sum"])
    parser.add_argument("--unknown-country-policy", choices=["error", "skip"])
    parser.add_argument("--bandwidth-years", type=float)
    parser.add_argument("--ridge-lambda", type=float)
    parser.add_argument("--mds-tol", type=float)
    parser.add_argument("--mds-max-iter", type=int)
    parser.add_argument(
        "--per-drug-embeddings",
        choices=["on", "off"],
        help="compute one extra layout per drug (default on)",
    )
    parser.add_argument("--threads", type=int, help="worker cap; never changes outputs")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="drugatlas",
        description="Consumption-series analytics: normalize, summarize, embed, export.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    for name, help_text in [
        ("run", "run every stage: ingest, compute, export"),
        ("ingest", "parse the input CSV into the series_raw artifact"),
        ("compute", "run the numeric stages over the ingested series"),
        ("export", "assemble bundle.json from computed artifacts"),
        ("serve", "serve the output directory over local HTTP"),
    ]:
        p = sub.add_parser(name, help=help_text)
        _add_common_options(p)
        if name == "compute":
            p.add_argument(
                "--stage",
                choices=["all", "transform", "cognostics", "embedding", "trends"],
                default="all",
                help="recompute only one stage (others reuse artifacts on disk)",
            )
        if name == "serve":
            p.add_argument("--host", default="127.0.0.1")
            p.add_argument("--port", type=int, default=8000)
    return parser


def _build_config(args: argparse.Namespace) -> PipelineConfig:
    cfg = load_config(args.config) if args.config else PipelineConfig()
    for key in _OVERRIDE_PATHS + _OVERRIDE_VALUES:
        value = getattr(args, key, None)
        if value is not None:
            setattr(cfg, key, value)
    if getattr(args, "per_drug_embeddings", None) is not None:
        cfg.per_drug_embeddings = args.per_drug_embeddings == "on"
    return cfg


def _run_command(args: argparse.Namespace) -> int:
    cfg = _build_config(args)
    if args.command == "serve":
        validate_config(cfg, require_input=False)
        server = make_server(cfg.output_dir, args.host, args.port)
        log.info("[serve] serving %s at http://%s:%d/", cfg.output_dir, args.host, args.port)
        try:
            server.serve_forever()
        except KeyboardInterrupt:
            pass
        finally:
            server.server_close()
        return EXIT_OK

    validate_config(cfg, require_input=args.command in ("run", "ingest"))
    regs = pipeline.load_registries(cfg)
    if args.command == "run":
        pipeline.run_pipeline(cfg)
    elif args.command == "ingest":
        pipeline.stage_ingest(cfg, regs)
    elif args.command == "compute":
        stages = (
            ("transform", "cognostics", "embedding", "trends")
            if args.stage == "all"
            else (args.stage,)
        )
        series_raw = (
            pipeline.load_series_raw(cfg, regs) if "transform" in stages else {}
        )
        pipeline.run_compute(cfg, regs, series_raw, stages)
    elif args.command == "export":
        pipeline.stage_export(cfg, regs)
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    logging.basicConfig(stream=sys.stderr, level=logging.INFO, format="%(message)s")
    args = build_parser().parse_args(argv)
    stage = args.command
    try:
        return _run_command(args)
    except ConfigError as exc:
        for problem in exc.problems:
            log.error("[%s] config error: %s", stage, problem)
        return EXIT_CONFIG
    except (DataError, IoFailure) as exc:
        log.error("[%s] data error: %s", stage, exc)
        return EXIT_DATA
    except NumericError as exc:
        log.error("[%s] numeric failure: %s", stage, exc)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
