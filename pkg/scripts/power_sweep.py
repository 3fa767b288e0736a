#!/usr/bin/env python3
"""Sweep transmit power at fixed lattice dimensions and record how the block
error rate falls; writes one result JSON per power plus an SVG curve."""

import argparse
from pathlib import Path

from lattice_pir.experiments import ExperimentConfig, run_experiment
from lattice_pir.plotting import plot_error_vs_power


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--servers", type=int, default=2)
    parser.add_argument("--messages", type=int, default=3)
    parser.add_argument("--dim", type=int, default=4)
    parser.add_argument("--ratio", type=int, default=2)
    parser.add_argument("--powers", type=float, nargs="+",
                        default=[0.5, 1.0, 2.0, 4.0, 8.0, 16.0])
    parser.add_argument("--rounds", type=int, default=2000)
    parser.add_argument("--seed", type=int, default=7)
    parser.add_argument("--out", default="out/power_sweep")
    args = parser.parse_args()

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    results = []
    print("P, block_error_rate, empirical_sigma_eq, analytic_sigma_eq, rate")
    for power in args.powers:
        cfg = ExperimentConfig(scheme="nonfading", servers=args.servers,
                               messages=args.messages, dim=args.dim, ratio=args.ratio,
                               power=power, rounds=args.rounds, seed=args.seed)
        res = run_experiment(cfg)
        res.save(out / f"power_{power:g}.result.json")
        results.append(res)
        print(f"{power:g}, {res.block_error_rate:.4f}, {res.empirical_sigma_eq:.4f}, "
              f"{res.analytic_sigma_eq:.4f}, {res.rate_formula:.4f}")
    plot_error_vs_power(results, out / "error_rate_vs_power.svg")
    print(f"artifacts in {out}")


if __name__ == "__main__":
    main()
