"""``holonomy`` command-line entry point."""
from __future__ import annotations

import argparse
import os
import sys
import tempfile
from pathlib import Path

from .errors import ConfigError, HolonomyError
from .scenarios import BUILTINS, FORMATS, emit, parse_config, parse_grid, run_scenario, override, validate

EXIT_PASS, EXIT_FAIL, EXIT_CONFIG, EXIT_NUMERIC = 0, 1, 2, 3


def _write_atomic(path: Path, text: str) -> None:
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _output(docs: dict[str, str], out: str | None) -> None:
    if out is None:
        many = len(docs) > 1
        for name, text in docs.items():
            if many:
                sys.stdout.write(f"# file: {name}\n")
            sys.stdout.write(text)
        return
    target = Path(out)
    target.mkdir(parents=True, exist_ok=True)
    for name, text in docs.items():
        _write_atomic(target / name, text)


def _load(source: str) -> str:
    path = Path(source)
    if path.is_file():
        return path.read_text(encoding="utf-8")
    if source in BUILTINS:
        return BUILTINS[source][1]
    raise ConfigError(f"no config file or built-in scenario named {source!r}")


def _execute(cfg, fmt, out, timing) -> int:
    try:
        report = run_scenario(cfg)
    except HolonomyError as exc:
        print(f"error: {cfg.kind}: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    try:
        docs = emit(report, fmt, include_timing=timing)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    _output(docs, out)
    for name, check in report.checks.items():
        if not check["pass"]:
            print(f"FAIL {name}: {check['value']:.3e} (tolerance {check['tolerance']:.1e})", file=sys.stderr)
    return EXIT_PASS if report.passed else EXIT_FAIL


def cmd_run(args) -> int:
    try:
        cfg = parse_config(_load(args.config))
        cfg = override(
            cfg,
            steps=args.steps,
            grid=parse_grid(args.grid) if args.grid else None,
            tolerance=args.tolerance,
        )
    except (ConfigError, OSError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    return _execute(cfg, args.format, args.out, args.timing)


def cmd_list(args) -> int:
    width = max(len(k) for k in BUILTINS)
    for name, (desc, _) in BUILTINS.items():
        print(f"{name:<{width}}  {desc}")
    return EXIT_PASS


def cmd_gate(args) -> int:
    try:
        values = {"kind": "gate-check", "gate": args.gate, "dim": args.dim}
        if args.tolerance is not None:
            values["tolerance"] = args.tolerance
        cfg = validate(values)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    return _execute(cfg, "json", args.out, args.timing)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="holonomy", description="Geometric phase sum-rule scenarios")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run a scenario config file (or a built-in name)")
    run.add_argument("config")
    run.add_argument("--format", choices=FORMATS, default="json")
    run.add_argument("--out", default=None, help="directory for output files (default: stdout)")
    run.add_argument("--steps", type=int, default=None)
    run.add_argument("--grid", default=None, help="AxB")
    run.add_argument("--tolerance", type=float, default=None)
    run.add_argument("--timing", action="store_true", help="include wall time in the json report")
    run.set_defaults(func=cmd_run)

    ls = sub.add_parser("list-scenarios", help="list built-in scenarios")
    ls.set_defaults(func=cmd_list)

    gate = sub.add_parser("gate-check", help="determinant verdict for a standard gate")
    gate.add_argument("--gate", default="hadamard", choices=["hadamard", "identity"])
    gate.add_argument("--dim", type=int, required=True)
    gate.add_argument("--tolerance", type=float, default=None)
    gate.add_argument("--out", default=None)
    gate.add_argument("--timing", action="store_true")
    gate.set_defaults(func=cmd_gate)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code else EXIT_PASS
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
