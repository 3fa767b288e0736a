"""Static SVG emission for simulation results and rate tables."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt


def _scatter_line(ax, pairs, xlabel, ylabel):
    pairs = sorted(pairs)
    ax.plot([p[0] for p in pairs], [p[1] for p in pairs], marker="o")
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    ax.grid(True, alpha=0.3)


def plot_rate_vs_servers(results, path):
    """Formula rate against server count, one point per result."""
    fig, ax = plt.subplots(figsize=(5, 3.5))
    _scatter_line(ax, [(r.config.servers, r.rate_formula) for r in results],
                  "servers", "rate [bits/channel use]")
    fig.tight_layout()
    fig.savefig(path, format="svg")
    plt.close(fig)


def plot_gap_vs_power(results, path):
    """Capacity gap against power (non-fading results only)."""
    fig, ax = plt.subplots(figsize=(5, 3.5))
    pairs = [(r.config.power, r.gap) for r in results if r.gap is not None]
    _scatter_line(ax, pairs, "power", "capacity gap [bits]")
    fig.tight_layout()
    fig.savefig(path, format="svg")
    plt.close(fig)


def plot_error_vs_power(results, path):
    """Measured block error rate against power."""
    fig, ax = plt.subplots(figsize=(5, 3.5))
    _scatter_line(ax, [(r.config.power, r.block_error_rate) for r in results],
                  "power", "block error rate")
    ax.set_yscale("symlog", linthresh=1e-4)
    fig.tight_layout()
    fig.savefig(path, format="svg")
    plt.close(fig)
