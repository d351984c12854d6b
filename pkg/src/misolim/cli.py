"""Command-line experiment runner.

Usage:

    misolim --experiment capacity-vs-n --out fig.csv
    misolim --config run.cfg --seed 7

Defaults reproduce the reference figure setups with zero extra arguments
beyond the experiment name. A flat key=value config file may supply any
option; command-line flags override it. Progress and warnings go to
stderr; only the CSV goes to the output file (or stdout when --out is
omitted).
"""

from __future__ import annotations

import argparse
import sys

from .experiments import (
    EXPERIMENTS,
    ExperimentConfig,
    SweepTable,
    run_experiment,
    write_csv,
)

_LIST_KEYS = {"n_grid", "snr_db", "kappa", "t"}
_INT_KEYS = {"seed", "samples", "workers"}


def _parse_list(text: str, cast):
    items = [p for p in text.replace(",", " ").split() if p]
    return [cast(p) for p in items]


def parse_config_file(path: str) -> dict:
    """Flat key = value file; lists are comma- or space-separated.
    Lines starting with '#' are comments."""
    opts: dict = {}
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{lineno}: expected 'key = value'")
            key, _, value = line.partition("=")
            key = key.strip().replace("-", "_")
            value = value.strip()
            if key in _LIST_KEYS:
                cast = int if key == "n_grid" else float
                opts[key] = _parse_list(value, cast)
            elif key in _INT_KEYS:
                opts[key] = int(value)
            elif key in ("experiment", "out"):
                opts[key] = value
            else:
                raise ValueError(f"{path}:{lineno}: unknown option {key!r}")
    return opts


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="misolim",
        description="Run a seeded sweep experiment and emit a CSV table.",
    )
    parser.add_argument("--config", help="flat key=value config file")
    parser.add_argument("--experiment", choices=EXPERIMENTS)
    parser.add_argument("--seed", type=int, help="master 64-bit seed (default 1)")
    parser.add_argument("--samples", type=int,
                        help="Monte-Carlo samples per grid point "
                             "(default: 10000 for N <= 256, else 1000)")
    parser.add_argument("--out", help="output CSV path (default: stdout)")
    parser.add_argument("--n-grid", help="antenna counts, e.g. 1,2,4,...,1024")
    parser.add_argument("--snr-db", help="SNR grid in dB")
    parser.add_argument("--kappa", help="impairment levels (EVM squared)")
    parser.add_argument("--t", help="power-scaling exponents")
    parser.add_argument("--workers", type=int,
                        help="worker threads (does not affect output values)")
    return parser


def config_from_args(argv=None) -> ExperimentConfig:
    args = build_parser().parse_args(argv)
    opts: dict = {}
    if args.config:
        opts.update(parse_config_file(args.config))
    for key in ("experiment", "seed", "samples", "out", "workers"):
        v = getattr(args, key)
        if v is not None:
            opts[key] = v
    for key in ("n_grid", "snr_db", "kappa", "t"):
        v = getattr(args, key)
        if v is not None:
            opts[key] = _parse_list(v, int if key == "n_grid" else float)
    if "experiment" not in opts:
        raise ValueError("no experiment selected (use --experiment or a config file)")
    return ExperimentConfig(
        experiment=opts["experiment"],
        seed=opts.get("seed", 1),
        n_samples=opts.get("samples"),
        out=opts.get("out"),
        n_grid=opts.get("n_grid"),
        snr_db=opts.get("snr_db"),
        kappa=opts.get("kappa"),
        t=opts.get("t"),
        workers=opts.get("workers", 1),
    )


def main(argv=None) -> int:
    try:
        cfg = config_from_args(argv)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    table = run_experiment(cfg)
    if cfg.out:
        write_csv(table, cfg.out)
        print(f"wrote {len(table.rows)} rows to {cfg.out}", file=sys.stderr)
    else:
        _write_stdout(table)
    return 0


def _write_stdout(table: SweepTable) -> None:
    from .experiments import _fmt

    print(",".join(table.columns))
    for row in table.rows:
        print(",".join(_fmt(v) for v in row))


if __name__ == "__main__":
    raise SystemExit(main())
