"""Command-line front end: ``magnomol {point,sweep,preset,stability}``.

Exit codes: 0 success, 1 error, 2 success but the point (or some grid
points) is dynamically unstable.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import logging
import os
import sys

from .config import SECTIONS, ConfigError, build_params, load_config
from .dynamics import is_stable
from .errors import MagnomolError
from .model import linearize
from .output import write_result, to_csv, to_json
from .presets import PRESET_NAMES, preset
from .sweep import run_point, run_sweep, summarize

log = logging.getLogger("magnomol")

EXIT_OK, EXIT_ERROR, EXIT_UNSTABLE = 0, 1, 2
WORKERS_ENV = "MAGNOMOL_WORKERS"


class _Parser(argparse.ArgumentParser):
    # usage errors exit 1; 2 is reserved for "ran, but unstable"
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_ERROR, f"{self.prog}: error: {message}\n")


def _common(p: argparse.ArgumentParser, out: bool = False) -> None:
    p.add_argument("--config", metavar="PATH", help="INI config with [system]/[sweep]/[output]")
    p.add_argument("--set", dest="overrides", action="append", default=[], metavar="K=V",
                   help="override a config key (repeatable); 'section.key=v' for non-[system] keys")
    if out:
        p.add_argument("--out", metavar="PATH", help="output file (default: [output] path)")
        p.add_argument("--format", choices=("csv", "json"), help="output format (default csv)")
        p.add_argument("--workers", type=int, metavar="N",
                       help=f"worker processes (default: ${WORKERS_ENV} or 1)")
        p.add_argument("--no-meta", action="store_true",
                       help="omit timestamp metadata so reruns are byte-identical")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="magnomol", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    _common(sub.add_parser("point", help="correlations at a single parameter point (JSON)"))
    _common(sub.add_parser("stability", help="drift-matrix eigenvalues and spectral abscissa (JSON)"))
    _common(sub.add_parser("sweep", help="grid sweep from the [sweep] config section"), out=True)
    p = sub.add_parser("preset", help=f"run a figure preset: {', '.join(PRESET_NAMES)}")
    p.add_argument("name")
    _common(p, out=True)
    return parser


def _workers(args, cfg_workers=None) -> int:
    if args.workers is not None:
        return args.workers
    if cfg_workers is not None:
        return int(cfg_workers)
    return int(os.environ.get(WORKERS_ENV, "1"))


def _emit(result, args, output_cfg, default_path=None) -> None:
    fmt = args.format or output_cfg.get("format", "csv")
    path = args.out or output_cfg.get("path") or default_path
    meta = not args.no_meta and output_cfg.get("meta", "true").lower() not in ("false", "0", "no")
    if path is None:
        sys.stdout.write(to_csv(result) if fmt == "csv" else to_json(result, meta))
        return
    try:
        write_result(result, path, fmt, meta)
    except OSError as exc:
        raise MagnomolError(f"cannot write {path}: {exc}") from None
    log.info("wrote %d rows to %s", len(result.rows), path)


def cmd_point(args) -> int:
    cfg = load_config(args.config, args.overrides)
    report = run_point(cfg.params)
    print(json.dumps(report.to_flat(), indent=1))
    return EXIT_OK if report.stable else EXIT_UNSTABLE


def cmd_stability(args) -> int:
    cfg = load_config(args.config, args.overrides)
    _, lin = linearize(cfg.params)
    report = is_stable(lin.drift)
    print(json.dumps(report.to_dict(), indent=1))
    return EXIT_OK if report.stable else EXIT_UNSTABLE


def cmd_sweep(args) -> int:
    cfg = load_config(args.config, args.overrides)
    spec = cfg.sweep_spec()
    spec = spec.with_workers(_workers(args, cfg.sweep.get("workers")))
    result = run_sweep(spec)
    _emit(result, args, cfg.output)
    return EXIT_UNSTABLE if result.any_unstable else EXIT_OK


def cmd_preset(args) -> int:
    if args.name not in PRESET_NAMES:
        print(f"magnomol: unknown preset {args.name!r}; valid names: {', '.join(PRESET_NAMES)}",
              file=sys.stderr)
        return EXIT_ERROR
    spec = preset(args.name)
    system = {}
    if args.config:
        load_config(args.config)  # validation only; values reapplied onto the preset base
        system.update(_raw_system(args.config))
    for item in args.overrides:
        key, _, value = item.partition("=")
        section, _, key = key.strip().rpartition(".")
        if (section or "system") != "system" or key not in SECTIONS["system"]:
            raise ConfigError(f"preset overrides accept [system] keys only, got {item!r}")
        system[key] = value
    if system:
        spec = dataclasses.replace(spec, base=build_params(system, base=spec.base))
    spec = spec.with_workers(_workers(args))
    result = run_sweep(spec)
    fmt = args.format or "csv"
    _emit(result, args, {}, default_path=f"{args.name}.{fmt}")
    print(summarize(result))
    return EXIT_UNSTABLE if result.any_unstable else EXIT_OK


def _raw_system(path) -> dict:
    import configparser

    parser = configparser.ConfigParser(interpolation=None, inline_comment_prefixes=("#", ";"))
    parser.optionxform = str
    parser.read(path)
    return dict(parser["system"]) if parser.has_section("system") else {}


COMMANDS = {"point": cmd_point, "stability": cmd_stability, "sweep": cmd_sweep, "preset": cmd_preset}


def main(argv=None) -> int:
    logging.basicConfig(level=logging.WARNING, format="%(name)s: %(message)s")
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except ConfigError as exc:
        print(f"magnomol: config error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except MagnomolError as exc:
        print(f"magnomol: error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
