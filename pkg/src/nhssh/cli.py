"""``nhssh`` command-line entry point.

Exit codes: 0 success, 1 configuration or I/O failure, 2 when a result was
computed but two numerical routes disagree.
"""
from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from pathlib import Path

from . import report
from .errors import ConfigError, NHSSHError, NumericalInconsistency
from .presets import PRESETS

EXIT_OK, EXIT_FAILURE, EXIT_INCONSISTENT = 0, 1, 2


def _output_dir(requested: str) -> str:
    return os.environ.get("NHSSH_OUT") or requested


def _load_config(path: str) -> report.ExperimentConfig:
    try:
        with open(path, encoding="utf-8") as fh:
            obj = json.load(fh)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: not valid JSON ({exc})") from None
    return report.ExperimentConfig.from_json(obj)


def _execute(cfg: report.ExperimentConfig, out: str | None) -> int:
    cfg = report.with_output(cfg, _output_dir(out or cfg.output.directory))
    bundle = report.run(cfg)
    written = bundle.write(cfg.output.directory)
    for path in written:
        print(path)
    if bundle.inconsistent:
        for msg in bundle.report["inconsistencies"]:
            print(f"inconsistent: {msg}", file=sys.stderr)
        return EXIT_INCONSISTENT
    return EXIT_OK


def _cmd_run(args) -> int:
    return _execute(_load_config(args.config), args.out)


def _cmd_reproduce(args) -> int:
    return _execute(report.preset_config(args.preset), args.out)


def _cmd_sweep(args) -> int:
    cfg = _load_config(args.config)
    try:
        values = [float(v) for v in args.values.split(",") if v.strip()]
    except ValueError:
        raise ConfigError(f"--values must be comma-separated numbers, got {args.values!r}") from None
    rows, text = report.sweep(cfg, args.axis, values, enforce_qh=args.qh_enforce)
    out = Path(_output_dir(args.out or cfg.output.directory))
    out.mkdir(parents=True, exist_ok=True)
    path = out / "sweep.csv"
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)
    print(path)
    for row in rows:
        if row.transition:
            print(f"transition at {args.axis} = {row.value:g}")
    return EXIT_OK


def _cmd_presets(args) -> int:
    for p in PRESETS.values():
        amps = ", ".join(f"{a:g}" for a in p.amplitudes)
        print(f"{p.id:6s} {p.kind.value:4s} sites={p.chain.n_sites:<3d} ({amps})  {p.citation}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="nhssh", description="Spectra, windings and edge states "
                                 "of non-Hermitian SSH and extended SSH chains.")
    ap.add_argument("-v", "--verbose", action="store_true", help="log solver diagnostics")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="run the analyses listed in a JSON config")
    p.add_argument("config")
    p.add_argument("--out", help="output directory (NHSSH_OUT takes precedence)")
    p.set_defaults(func=_cmd_run)

    p = sub.add_parser("reproduce", help="run every analysis on a named preset")
    p.add_argument("preset", choices=sorted(PRESETS))
    p.add_argument("--out")
    p.set_defaults(func=_cmd_reproduce)

    p = sub.add_parser("sweep", help="topology along one parameter axis")
    p.add_argument("config")
    p.add_argument("--axis", required=True, help="t.<bond>.<L|R> or tbar.<bond>, e.g. tbar.1")
    p.add_argument("--values", required=True, help="comma-separated values")
    p.add_argument("--qh-enforce", action="store_true",
                   help="restore quasi-Hermiticity after changing a raw amplitude")
    p.add_argument("--out")
    p.set_defaults(func=_cmd_sweep)

    p = sub.add_parser("presets", help="list the embedded parameter sets")
    p.set_defaults(func=_cmd_presets)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except NumericalInconsistency as exc:
        print(f"nhssh: numerical inconsistency: {exc}", file=sys.stderr)
        return EXIT_INCONSISTENT
    except (NHSSHError, OSError, ValueError) as exc:
        print(f"nhssh: {exc}", file=sys.stderr)
        return EXIT_FAILURE


if __name__ == "__main__":
    sys.exit(main())
