"""Command-line front end.

::

    permdetect run <preset|config.yaml> [--seed S] [--reps R] [--perms P] [--threads T]
                   [--alpha A] [--out DIR] [--pvalue-mode paper|add-one] [--tie-break on|off]
    permdetect list-presets
    permdetect plot <power.csv> [--out DIR]
    permdetect selftest

``run`` writes ``power.csv``, ``config.yaml`` (the resolved config) and, last,
``manifest.json`` with SHA-256 digests of the other files. Exit status is 1 for
configuration errors and 2 for failures while running.
"""
from __future__ import annotations

import argparse
import hashlib
import json
import logging
import sys
from pathlib import Path

from . import __version__
from .config import config_digest, dump_config, load_config, preset_description, preset_names
from .exceptions import ConfigError
from .harness import run_scenario

log = logging.getLogger("permdetect")


def _sha256(path):
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def _on_off(value):
    if value not in ("on", "off"):
        raise argparse.ArgumentTypeError("expected 'on' or 'off'")
    return value == "on"


def _parser():
    ap = argparse.ArgumentParser(prog="permdetect", description=__doc__.splitlines()[0])
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run a preset or YAML config and write power.csv")
    run.add_argument("config", help="preset name or path to a YAML config")
    run.add_argument("--seed", type=int, default=0)
    run.add_argument("--reps", type=int, default=None, help="replications (overrides config)")
    run.add_argument("--perms", type=int, default=None, help="permutations (overrides config)")
    run.add_argument("--threads", type=int, default=1, help="worker processes")
    run.add_argument("--alpha", type=float, default=None)
    run.add_argument("--out", default="out")
    run.add_argument("--pvalue-mode", choices=("paper", "add-one"), default=None)
    run.add_argument("--tie-break", type=_on_off, default=None, metavar="{on,off}")

    sub.add_parser("list-presets", help="list embedded scenario presets")

    plot = sub.add_parser("plot", help="dot plots of a power.csv")
    plot.add_argument("csv")
    plot.add_argument("--out", default=None)

    sub.add_parser("selftest", help="run the fast built-in consistency checks")
    return ap


def _cmd_run(args):
    try:
        cfg = load_config(
            args.config,
            replications=args.reps,
            permutations=args.perms,
            alpha=args.alpha,
            pvalue_mode=None if args.pvalue_mode is None else args.pvalue_mode.replace("-", "_"),
            tie_break=args.tie_break,
        )
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1
    if args.seed < 0 or args.seed >= 2**64:
        print("config error: --seed must be an unsigned 64-bit integer", file=sys.stderr)
        return 1
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    log.info("running %s: %d replications x %d permutations x %d statistics x %d effects",
             cfg.name, cfg.replications, cfg.permutations, len(cfg.statistics), len(cfg.effects))

    def progress(done):
        log.info("%s: %d/%d replications", cfg.name, done, cfg.replications)

    try:
        report = run_scenario(cfg, args.seed, workers=args.threads, progress=progress)
    except Exception as exc:
        print(f"runtime failure: {exc}", file=sys.stderr)
        return 2
    files = []
    csv_path = out / "power.csv"
    report.to_csv(csv_path)
    files.append(csv_path)
    cfg_path = out / "config.yaml"
    cfg_path.write_text(dump_config(cfg), encoding="utf-8")
    files.append(cfg_path)
    manifest = {
        "source": args.config,
        "seed": args.seed,
        "threads": args.threads,
        "output_dir": str(out),
        "config_sha256": config_digest(cfg),
        "version": __version__,
        "files": [{"path": f.name, "sha256": _sha256(f)} for f in files],
    }
    (out / "manifest.json").write_text(json.dumps(manifest, indent=2) + "\n", encoding="utf-8")
    print(csv_path)
    return 0


def _cmd_plot(args):
    from .plotting import plot_power_csv

    try:
        paths = plot_power_csv(args.csv, args.out)
    except (OSError, KeyError, ValueError) as exc:
        print(f"plot failed: {exc}", file=sys.stderr)
        return 2
    for p in paths:
        print(p)
    return 0


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(asctime)s %(levelname)s %(message)s")
    if args.command == "run":
        return _cmd_run(args)
    if args.command == "list-presets":
        for name in preset_names():
            print(f"{name:10s} {preset_description(name)}")
        return 0
    if args.command == "plot":
        return _cmd_plot(args)
    from .selftest import run

    return 0 if run() else 2


if __name__ == "__main__":
    sys.exit(main())
