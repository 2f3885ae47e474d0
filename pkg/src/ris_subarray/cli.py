"""Command-line experiments: SNR, CSI loss, power trade-off, energy and the optimizer.

Every subcommand reads a ``key = value`` config file and writes CSV (or JSON
for ``optimize``) to ``--out`` or stdout. Exit codes: 0 success, 2 invalid
configuration, 3 unwritable output path.
"""
from __future__ import annotations

import argparse
import io
import json
import os
import sys

from . import config as cfgmod
from .montecarlo import mc_mean_max_snr
from .optimizer import Regime, optimize_subarrays
from .pilots import csi_loss
from .snr import (
    SnrVariant,
    data_power,
    energy,
    pilot_power,
    snr_baseline_individual,
    snr_exact,
    snr_lower_bound,
)
from .system import ValidationError, db_to_linear, feasible_subarray_counts, linear_to_db, watts_to_dbm

EXIT_CONFIG = 2
EXIT_OUTPUT = 3


def fmt(x) -> str:
    if isinstance(x, int):
        return str(x)
    return format(float(x), ".9g")


def _csv(header, rows) -> str:
    buf = io.StringIO()
    buf.write(",".join(header) + "\n")
    for row in rows:
        buf.write(",".join(fmt(v) for v in row) + "\n")
    return buf.getvalue()


def snr_vs_n(cfg: cfgmod.ExperimentConfig, workers: int = 1) -> str:
    params, snr_tx = cfg.params, cfg.transmit_snr
    rows = []
    for n in feasible_subarray_counts(cfg.m_elements):
        mc = mc_mean_max_snr(params, n, snr_tx, 1.0, cfg.trials, cfg.seed, workers)
        rows.append(
            (
                n,
                linear_to_db(snr_exact(params, n, snr_tx, 1.0)),
                linear_to_db(snr_lower_bound(params, n, snr_tx, 1.0)),
                linear_to_db(snr_baseline_individual(params, n, snr_tx, 1.0)),
                linear_to_db(mc.mean),
                mc.std_error,
            )
        )
    header = ("n", "snr_exact_db", "snr_lower_bound_db", "snr_baseline_db", "snr_mc_db", "mc_std_error")
    return _csv(header, rows)


def csi_loss_table(cfg: cfgmod.ExperimentConfig, workers: int = 1) -> str:
    grid = [db_to_linear(g) for g in cfg.csi_grid_db]
    estimates = csi_loss(cfg.params, cfg.csi_n, grid, cfg.trials, cfg.seed, workers)
    rows = [(g, e.mean, e.std_error) for g, e in zip(cfg.csi_grid_db, estimates)]
    return _csv(("gamma_p_db", "mean_ratio", "std_error"), rows)


def power_tradeoff(cfg: cfgmod.ExperimentConfig, workers: int = 1) -> str:
    params, link = cfg.params, cfg.link
    best = optimize_subarrays(params, link, cfg.variant).n_optimal
    rows = [
        (
            n,
            watts_to_dbm(pilot_power(params, link, n)),
            watts_to_dbm(data_power(params, link, n, cfg.variant)),
            int(n == best),
        )
        for n in feasible_subarray_counts(cfg.m_elements)
    ]
    return _csv(("n", "pilot_power_dbm", "data_power_dbm", "energy_optimal"), rows)


def energy_vs_n(cfg: cfgmod.ExperimentConfig, workers: int = 1) -> str:
    params, link = cfg.params, cfg.link
    rows = [(n, energy(params, link, n, cfg.variant)) for n in feasible_subarray_counts(cfg.m_elements)]
    result = optimize_subarrays(params, link, cfg.variant)
    # last row: minimizer of the relaxation over [1, M] (an endpoint outside the interior regime)
    if result.regime is Regime.INTERIOR:
        n_star = result.n_continuous
    elif result.regime is Regime.SINGLE_SUBARRAY:
        n_star = 1.0
    else:
        n_star = float(cfg.m_elements)
    rows.append((float(n_star), energy(params, link, n_star, cfg.variant)))
    return _csv(("n", "energy_joules"), rows)


def optimize(cfg: cfgmod.ExperimentConfig, workers: int = 1) -> str:
    result = optimize_subarrays(cfg.params, cfg.link, cfg.variant)
    return json.dumps(result.to_dict(), indent=2) + "\n"


COMMANDS = {
    "snr-vs-n": (snr_vs_n, "average data SNR versus subarray count (analytic and Monte Carlo)"),
    "csi-loss": (csi_loss_table, "achieved / maximal data SNR versus pilot SNR"),
    "power-tradeoff": (power_tradeoff, "pilot and data power per subarray count"),
    "energy-vs-n": (energy_vs_n, "UE energy per subarray count plus the relaxed optimum"),
    "optimize": (optimize, "energy-optimal subarray count as JSON"),
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", required=True, help="key = value configuration file")
    common.add_argument("--out", help="output file (default: stdout)")
    common.add_argument("--trials", type=int, help="override Monte Carlo trials")
    common.add_argument("--seed", type=int, help="override master seed")
    common.add_argument("--variant", choices=[v.value for v in SnrVariant], help="average-SNR expression")
    common.add_argument("--workers", type=int, default=1, help="Monte Carlo worker threads (output is identical)")

    parser = argparse.ArgumentParser(prog="ris-subarray", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name, (_, help_text) in COMMANDS.items():
        sub.add_parser(name, parents=[common], help=help_text)
    return parser


def _output_writable(path: str) -> bool:
    if os.path.isdir(path):
        return False
    if os.path.exists(path):
        return os.access(path, os.W_OK)
    parent = os.path.dirname(os.path.abspath(path))
    return os.path.isdir(parent) and os.access(parent, os.W_OK)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = cfgmod.load_config(args.config)
        cfg = cfg.with_overrides(trials=args.trials, seed=args.seed, variant=args.variant)
    except OSError as exc:
        print(f"error: cannot read config: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except ValidationError as exc:
        for name, msg in exc.errors:
            print(f"config error: {name}: {msg}", file=sys.stderr)
        return EXIT_CONFIG
    if args.workers < 1:
        print("error: --workers must be >= 1", file=sys.stderr)
        return EXIT_CONFIG

    if args.out is not None and not _output_writable(args.out):
        print(f"error: cannot write output {args.out}", file=sys.stderr)
        return EXIT_OUTPUT

    text = COMMANDS[args.command][0](cfg, workers=args.workers)
    if args.out is None:
        sys.stdout.write(text)
        return 0
    try:
        with open(args.out, "w", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        print(f"error: cannot write output {args.out}: {exc}", file=sys.stderr)
        return EXIT_OUTPUT
    return 0


if __name__ == "__main__":
    sys.exit(main())
