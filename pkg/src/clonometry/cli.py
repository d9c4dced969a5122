"""Command line entry point: ``clonometry run|list|schema``.

Exit codes: 0 success, 2 unreadable or malformed config, 3 config fails
validation, 4 a tolerance check failed under ``--strict``.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
from concurrent.futures import ProcessPoolExecutor

from . import __version__
from ._config import tolerance_scale
from .runner import (ConfigError, ValidationError, bundled_path, bundled_scenarios,
                     load_config, load_schema, run_scenario, write_result)

EXIT_OK, EXIT_PARSE, EXIT_INVALID, EXIT_TOLERANCE = 0, 2, 3, 4

log = logging.getLogger("clonometry")


def _resolve(config: str) -> str:
    """A path, or the name of a bundled scenario."""
    bundled = bundled_path(config)
    if not config.endswith((".yaml", ".yml")) and bundled.is_file():
        return str(bundled)
    return config


def cmd_run(args) -> int:
    try:
        scale = tolerance_scale()
    except ValueError as exc:
        log.error("%s", exc)
        return EXIT_INVALID
    try:
        doc = load_config(_resolve(args.config))
    except ConfigError as exc:
        log.error("cannot parse config: %s", exc)
        return EXIT_PARSE
    except ValidationError as exc:
        log.error("invalid config: %s", exc)
        return EXIT_INVALID
    scenarios = doc["scenarios"]
    try:
        if args.parallel and len(scenarios) > 1:
            with ProcessPoolExecutor() as pool:
                results = list(pool.map(run_scenario, scenarios))
        else:
            results = [run_scenario(s) for s in scenarios]
    except ValidationError as exc:
        log.error("invalid config: %s", exc)
        return EXIT_INVALID
    failed = False
    for res in results:
        csv_path, _ = write_result(res, args.out, scale)
        ok = res.passed(scale)
        failed |= not ok
        print(f"{res.name}: {'ok' if ok else 'FAIL'} ({len(res.rows)} rows) -> {csv_path}")
        for row in res.rows:
            if not row.passed(scale):
                print(f"  {row.quantity} [{row.parameter}] measured={row.measured!r} "
                      f"target={row.target!r} tolerance={row.tolerance!r}")
    if failed and args.strict:
        return EXIT_TOLERANCE
    return EXIT_OK


def cmd_list(args) -> int:
    for stem, doc in bundled_scenarios().items():
        for scen in doc["scenarios"]:
            print(f"{stem:26s} {scen['kind']:24s} {scen.get('description', '')}")
            print(f"{'':26s} reproduces: {scen.get('reproduces', '')}")
    return EXIT_OK


def cmd_schema(args) -> int:
    print(json.dumps(load_schema(), indent=2))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="clonometry", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)
    run = sub.add_parser("run", help="run the scenarios in a config file")
    run.add_argument("config", help="YAML config path or bundled scenario name")
    run.add_argument("--strict", action="store_true", help="exit 4 on any tolerance failure")
    run.add_argument("--parallel", action="store_true", help="run scenarios in worker processes")
    run.add_argument("--out", default="results", help="output directory (default: results)")
    run.set_defaults(func=cmd_run)
    sub.add_parser("list", help="list bundled scenarios").set_defaults(func=cmd_list)
    sub.add_parser("schema", help="print the config JSON schema").set_defaults(func=cmd_schema)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s")
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
