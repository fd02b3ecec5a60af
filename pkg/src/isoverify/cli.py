"""Command-line entry point: ``verify <suite> [options]``.

Exit status: 0 all checks pass, 1 some check fails, 2 configuration error,
3 internal error.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import fields
from pathlib import Path

from .suites import (SUITES, ConfigError, SuiteConfig, convert_value, dumps_report, parse_config,
                     run_suite, summary_table, validate_report)

EXIT_PASS, EXIT_FAIL, EXIT_CONFIG, EXIT_INTERNAL = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_CONFIG, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="verify", description="Run exact and numerical verification suites.")
    p.add_argument("suite", choices=SUITES + ("all",))
    p.add_argument("--n", help="comma list of factor dimensions, e.g. 2,3,4")
    p.add_argument("--m", help="comma list of Euclidean dimensions")
    p.add_argument("--c", help="comma list of curvature signs (-1 or 1)")
    p.add_argument("--tau", help="comma list of rationals in (0,1), e.g. 1/3,1/2")
    p.add_argument("--kappa", help="comma list of circle-family parameters")
    p.add_argument("--a", help="comma list of hyperbolic-family parameters")
    p.add_argument("--kmax", help="integer or 'auto' for (m+1)n+2")
    p.add_argument("--seed", help="64-bit seed")
    p.add_argument("--trials", help="random trials per parameter point")
    p.add_argument("--family", help="geometry family: s1, hn or both")
    p.add_argument("--workers", help="worker processes (default 1)")
    p.add_argument("--out", help="write the JSON report here")
    p.add_argument("--config", help="key=value configuration file; flags override it")
    p.add_argument("--quiet", action="store_true", help="suppress the summary table")
    return p


def config_from_args(args: argparse.Namespace) -> SuiteConfig:
    overrides = {"suite": args.suite}
    for f in fields(SuiteConfig):
        raw = getattr(args, f.name, None)
        if f.name != "suite" and raw is not None:
            overrides[f.name] = convert_value(f.name, raw)
    if args.config:
        return parse_config(args.config, overrides)
    return SuiteConfig(**overrides).validate()


VALUE_FLAGS = ("--n", "--m", "--c", "--tau", "--kappa", "--a", "--kmax", "--seed")


def _attach_values(argv: list[str]) -> list[str]:
    """Rewrite ``--c -1,1`` as ``--c=-1,1`` so negative lists are not read as options."""
    out, i = [], 0
    while i < len(argv):
        tok = argv[i]
        if tok in VALUE_FLAGS and i + 1 < len(argv) and argv[i + 1].startswith("-") \
                and argv[i + 1][1:2].isdigit():
            out.append(f"{tok}={argv[i + 1]}")
            i += 2
            continue
        out.append(tok)
        i += 1
    return out


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    args = build_parser().parse_args(_attach_values(argv))
    try:
        config = config_from_args(args)
    except ConfigError as exc:
        print(f"verify: configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"verify: cannot read configuration: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    try:
        report = run_suite(config)
        validate_report(report)
    except Exception as exc:  # noqa: BLE001 - anything here is a toolkit bug
        print(f"verify: internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    text = dumps_report(report)
    if config.out:
        Path(config.out).write_text(text)
    if not args.quiet:
        print(summary_table(report))
    return EXIT_PASS if report["status"] == "pass" else EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
