"""Command line entry point.

    fluxdelay run --config cfg.json [--out DIR] [--threads N]
    fluxdelay validate --config cfg.json

Exit status: 0 on success, 2 for an invalid configuration, 3 when the
numerics or the physical regime checks fail.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys

from .errors import ConfigError, FluxDelayError
from .scenarios import SCENARIOS, run_scenario, validate_config

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERIC = 3

log = logging.getLogger("fluxdelay")


def _load(path: str):
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path} is not valid JSON: {exc}") from exc


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="fluxdelay", description="Fluxon readout simulations.")
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help=f"run a scenario ({', '.join(SCENARIOS)})")
    run.add_argument("--config", required=True, help="JSON scenario configuration")
    run.add_argument("--out", default=None, help="output directory (overrides output_dir)")
    run.add_argument("--threads", type=int, default=1, help="worker processes for sweeps")

    val = sub.add_parser("validate", help="check a configuration without running it")
    val.add_argument("--config", required=True)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    try:
        cfg = validate_config(_load(args.config))
        if args.command == "validate":
            print(f"ok: {cfg.scenario}")
            return EXIT_OK
        if args.threads < 1:
            raise ConfigError("--threads must be >= 1")
        manifest = run_scenario(cfg, args.out, threads=args.threads)
    except ConfigError as exc:
        for p in exc.problems:
            print(f"config error: {p}", file=sys.stderr)
        return EXIT_CONFIG
    except FluxDelayError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    log.info("%s finished in %.2f s", cfg.scenario, manifest.duration_s)
    for entry in manifest.outputs:
        print(entry["path"])
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
