"""
Command-line scenario runner: ``python -m mocshock SUBCOMMAND``.

Subcommands ``simulate``, ``shock-scan``, ``reconstruct`` and ``validate``
share the flags ``--config``, ``--preset``, ``--override`` and ``--out``.
Exit status: 0 success, 1 configuration error, 2 runtime error,
3 validation failure.
"""

from __future__ import annotations

import argparse
import sys

from . import pipelines
from .config import PRESETS, load_config
from .errors import ConfigError, MocShockError, NormalizationError

EXIT_OK, EXIT_CONFIG, EXIT_RUNTIME, EXIT_VALIDATION = 0, 1, 2, 3

_RUNNERS = {
    "simulate": pipelines.run_simulate,
    "shock-scan": pipelines.run_shock_scan,
    "reconstruct": pipelines.run_reconstruct,
    "validate": pipelines.run_validate,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="mocshock", description=__doc__.strip().splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name in _RUNNERS:
        p = sub.add_parser(name)
        p.add_argument("--config", metavar="PATH", help="INI scenario file")
        p.add_argument("--preset", choices=sorted(PRESETS), help="built-in scenario to start from")
        p.add_argument(
            "--override", action="append", default=[], metavar="KEY=VALUE",
            help="set section.key=value after loading (repeatable)",
        )
        p.add_argument("--out", metavar="DIR", help="output directory (default: output.directory)")
    return parser


def _print_checks(man, stream):
    for c in man["checks"]:
        status = "PASS" if c["passed"] else "FAIL"
        stream.write(f"{status} {c['name']}: error={c['error']:.3e} tolerance={c['tolerance']:.3e}\n")
    stream.write(f"overall: {'PASS' if man['passed'] else 'FAIL'}\n")


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = load_config(args.config, args.preset, args.override)
        out = args.out or cfg.get("output", "directory")
        man = _RUNNERS[args.command](cfg, out)
    except (ConfigError, NormalizationError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (MocShockError, ArithmeticError, ValueError, OSError) as exc:
        print(f"runtime error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    for w in man.get("warnings", []):
        print(f"warning: {w}", file=sys.stderr)
    if args.command == "validate":
        _print_checks(man, sys.stdout)
        return EXIT_OK if man["passed"] else EXIT_VALIDATION
    print(f"wrote {len(man['files'])} file(s) to {out}")
    return EXIT_OK
