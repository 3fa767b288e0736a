"""Config-driven Monte Carlo harness with JSON/CSV persistence.

Experiments are declarative: a JSON config names the scheme and every
parameter, including a mandatory seed. Per-round randomness is derived from
(seed, round index), so results are bit-identical regardless of thread count
or scheduling order. Fading gains are drawn once per experiment block from a
dedicated stream unless given explicitly.
"""

from __future__ import annotations

import csv
import json
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .channel import SubsetPartition, default_partition
from .codebook import build_codebook, max_packet_bits
from .protocol import FadingRoundConfig, RoundConfig, run_round, run_round_fading
from .rates import (alpha_opt_fading, alpha_opt_nonfading, capacity_gap, gap_bound,
                    miso_capacity, rate_fading, rate_nonfading, sigma_eq_fading,
                    sigma_eq_nonfading)

SCHEMES = ("nonfading", "fading")
GAIN_DISTRIBUTIONS = ("normal",)

# Namespacing constants for derived rng streams.
_GAIN_STREAM = 0
_ROUND_STREAM = 1


class ConfigError(ValueError):
    """Invalid experiment configuration; the message lists field-level problems."""


@dataclass(frozen=True)
class ExperimentConfig:
    scheme: str
    servers: int
    messages: int
    dim: int
    ratio: int
    power: float
    rounds: int
    seed: int
    packet_bits: int | None = None
    noiseless: bool = False
    alpha: float | None = None
    index: int | None = None
    gains: tuple | None = None
    gain_distribution: str = "normal"
    subset_first: tuple | None = None
    subset_second: tuple | None = None
    coeffs: tuple = (1, 1)

    def __post_init__(self):
        errors = []
        if self.scheme not in SCHEMES:
            errors.append(f"scheme: must be one of {SCHEMES}")
        for name in ("servers", "messages", "dim", "ratio", "rounds", "seed"):
            if not isinstance(getattr(self, name), int):
                errors.append(f"{name}: must be an integer")
        if not errors:
            if self.servers < 2:
                errors.append("servers: must be >= 2")
            if self.messages < 1:
                errors.append("messages: must be >= 1")
            if self.dim < 1:
                errors.append("dim: must be >= 1")
            if self.ratio < 2:
                errors.append("ratio: must be >= 2")
            if self.rounds < 1:
                errors.append("rounds: must be >= 1")
            if self.seed < 0:
                errors.append("seed: must be non-negative")
        if not (isinstance(self.power, (int, float)) and self.power > 0):
            errors.append("power: must be positive")
        if self.packet_bits is not None:
            if not isinstance(self.packet_bits, int) or self.packet_bits < 1:
                errors.append("packet_bits: must be a positive integer")
            elif not errors and self.packet_bits > max_packet_bits(self.dim, self.ratio):
                errors.append(
                    f"packet_bits: at most {max_packet_bits(self.dim, self.ratio)} "
                    f"for dim={self.dim}, ratio={self.ratio}")
        if self.alpha is not None and not np.isfinite(self.alpha):
            errors.append("alpha: must be finite")
        if self.index is not None and not (isinstance(self.index, int)
                                           and 1 <= self.index <= self.messages):
            errors.append("index: must be in [1, messages]")
        if self.scheme == "fading":
            errors.extend(self._validate_fading())
        if errors:
            raise ConfigError("; ".join(errors))

    def _validate_fading(self):
        errors = []
        if self.gains is not None:
            gains = tuple(self.gains)
            if len(gains) != self.servers:
                errors.append(f"fading.gains: expected {self.servers} entries")
            elif not all(isinstance(g, (int, float)) and np.isfinite(g) for g in gains):
                errors.append("fading.gains: entries must be finite numbers")
            object.__setattr__(self, "gains", gains)
        if self.gain_distribution not in GAIN_DISTRIBUTIONS:
            errors.append(f"fading.distribution: must be one of {GAIN_DISTRIBUTIONS}")
        if (self.subset_first is None) != (self.subset_second is None):
            errors.append("fading.first/second: give both subsets or neither")
        elif self.subset_first is not None:
            try:
                part = SubsetPartition(tuple(self.subset_first), tuple(self.subset_second))
                part.validate_for(self.servers)
            except ValueError as exc:
                errors.append(f"fading.first/second: {exc}")
            object.__setattr__(self, "subset_first", tuple(self.subset_first))
            object.__setattr__(self, "subset_second", tuple(self.subset_second))
        coeffs = tuple(self.coeffs)
        if len(coeffs) != 2 or not all(isinstance(c, int) and c != 0 for c in coeffs):
            errors.append("fading.coeffs: must be two non-zero integers")
        object.__setattr__(self, "coeffs", coeffs)
        return errors

    def partition(self):
        if self.subset_first is not None:
            return SubsetPartition(self.subset_first, self.subset_second)
        return default_partition(self.servers)

    def to_dict(self):
        out = {
            "scheme": self.scheme, "servers": self.servers, "messages": self.messages,
            "dim": self.dim, "ratio": self.ratio, "power": self.power,
            "packet_bits": self.packet_bits, "rounds": self.rounds,
            "noiseless": self.noiseless, "alpha": self.alpha, "index": self.index,
            "seed": self.seed,
        }
        if self.scheme == "fading":
            out["fading"] = {
                "gains": list(self.gains) if self.gains is not None else None,
                "distribution": self.gain_distribution,
                "first": list(self.subset_first) if self.subset_first is not None else None,
                "second": list(self.subset_second) if self.subset_second is not None else None,
                "coeffs": list(self.coeffs),
            }
        return out

    @classmethod
    def from_dict(cls, data):
        if not isinstance(data, dict):
            raise ConfigError("config: expected a JSON object")
        known = {"scheme", "servers", "messages", "dim", "ratio", "power",
                 "packet_bits", "rounds", "noiseless", "alpha", "index", "seed",
                 "fading"}
        unknown = set(data) - known
        if unknown:
            raise ConfigError(f"config: unknown fields {sorted(unknown)}")
        missing = [k for k in ("scheme", "servers", "messages", "dim", "ratio",
                               "power", "rounds", "seed") if k not in data]
        if missing:
            raise ConfigError(f"config: missing required fields {missing}")
        fading = data.get("fading") or {}
        if not isinstance(fading, dict):
            raise ConfigError("fading: expected a JSON object")
        unknown = set(fading) - {"gains", "distribution", "first", "second", "coeffs"}
        if unknown:
            raise ConfigError(f"fading: unknown fields {sorted(unknown)}")
        return cls(
            scheme=data["scheme"], servers=data["servers"], messages=data["messages"],
            dim=data["dim"], ratio=data["ratio"], power=data["power"],
            rounds=data["rounds"], seed=data["seed"],
            packet_bits=data.get("packet_bits"),
            noiseless=bool(data.get("noiseless", False)),
            alpha=data.get("alpha"), index=data.get("index"),
            gains=tuple(fading["gains"]) if fading.get("gains") is not None else None,
            gain_distribution=fading.get("distribution", "normal"),
            subset_first=tuple(fading["first"]) if fading.get("first") is not None else None,
            subset_second=tuple(fading["second"]) if fading.get("second") is not None else None,
            coeffs=tuple(fading.get("coeffs", (1, 1))),
        )


def load_config(path):
    path = Path(path)
    if not path.exists():
        raise ConfigError(f"config: no such file: {path}")
    try:
        data = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config: invalid JSON in {path}: {exc}") from exc
    return ExperimentConfig.from_dict(data)


@dataclass
class ExperimentResult:
    config: ExperimentConfig
    rounds: int
    failures: int
    block_error_rate: float
    empirical_sigma_eq: float
    analytic_sigma_eq: float
    sigma_samples: int
    alpha: float
    rate_formula: float
    lattice_rate: float
    miso: float | None
    gap: float | None
    eff_gains: tuple | None
    gains_used: tuple | None
    wall_time_s: float
    traces: list = field(default_factory=list, repr=False)

    def payload(self):
        """The deterministic part of the result (everything but wall time)."""
        return {
            "config": self.config.to_dict(),
            "result": {
                "rounds": self.rounds,
                "failures": self.failures,
                "block_error_rate": self.block_error_rate,
                "empirical_sigma_eq": self.empirical_sigma_eq,
                "analytic_sigma_eq": self.analytic_sigma_eq,
                "sigma_samples": self.sigma_samples,
                "alpha": self.alpha,
                "rate_formula": self.rate_formula,
                "lattice_rate": self.lattice_rate,
                "miso": self.miso,
                "gap": self.gap,
                "eff_gains": list(self.eff_gains) if self.eff_gains is not None else None,
                "gains_used": list(self.gains_used) if self.gains_used is not None else None,
            },
        }

    def to_dict(self):
        out = self.payload()
        out["runtime"] = {"wall_time_s": self.wall_time_s}
        return out

    def save(self, path):
        Path(path).write_text(json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n")

    @classmethod
    def from_dict(cls, data):
        cfg = ExperimentConfig.from_dict(data["config"])
        res = data["result"]
        return cls(
            config=cfg, rounds=res["rounds"], failures=res["failures"],
            block_error_rate=res["block_error_rate"],
            empirical_sigma_eq=res["empirical_sigma_eq"],
            analytic_sigma_eq=res["analytic_sigma_eq"],
            sigma_samples=res["sigma_samples"], alpha=res["alpha"],
            rate_formula=res["rate_formula"], lattice_rate=res["lattice_rate"],
            miso=res["miso"], gap=res["gap"],
            eff_gains=tuple(res["eff_gains"]) if res["eff_gains"] is not None else None,
            gains_used=tuple(res["gains_used"]) if res["gains_used"] is not None else None,
            wall_time_s=data.get("runtime", {}).get("wall_time_s", 0.0),
        )


def load_result(path):
    return ExperimentResult.from_dict(json.loads(Path(path).read_text()))


def _round_rng(seed, round_index):
    return np.random.default_rng([seed, _ROUND_STREAM, round_index])


def _resolve_gains(cfg):
    if cfg.gains is not None:
        return tuple(float(g) for g in cfg.gains)
    rng = np.random.default_rng([cfg.seed, _GAIN_STREAM])
    return tuple(float(g) for g in rng.standard_normal(cfg.servers))


def run_experiment(cfg, threads=1, keep_traces=False):
    """Run cfg.rounds independent protocol rounds and aggregate.

    Deterministic given cfg.seed: each round draws from its own derived
    stream, so the thread count does not change any result.
    """
    start = time.perf_counter()
    cb = build_codebook(cfg.dim, cfg.ratio, cfg.power, cfg.packet_bits)

    if cfg.scheme == "fading":
        gains = _resolve_gains(cfg)
        partition = cfg.partition()
        round_cfg = FadingRoundConfig(
            codebook=cb, gains=gains, partition=partition, coeffs=cfg.coeffs,
            num_messages=cfg.messages, noiseless=cfg.noiseless, alpha=cfg.alpha,
            index=cfg.index)
        runner = run_round_fading
        h_eff = (sum(gains[k - 1] for k in partition.first),
                 sum(gains[k - 1] for k in partition.second))
        alpha = cfg.alpha if cfg.alpha is not None else alpha_opt_fading(
            cfg.power, h_eff, cfg.coeffs)
        analytic = sigma_eq_fading(alpha, cfg.power, h_eff, cfg.coeffs)
        rate = rate_fading(cfg.power, h_eff, cfg.coeffs)
        miso = None
        gap = None
    else:
        round_cfg = RoundConfig(
            codebook=cb, num_servers=cfg.servers, num_messages=cfg.messages,
            noiseless=cfg.noiseless, alpha=cfg.alpha, index=cfg.index)
        runner = run_round
        h_eff = None
        gains = None
        alpha = cfg.alpha if cfg.alpha is not None else alpha_opt_nonfading(
            cfg.servers, cfg.power)
        analytic = sigma_eq_nonfading(alpha, cfg.servers, cfg.power)
        rate = rate_nonfading(cfg.servers, cfg.power)
        miso = miso_capacity(cfg.servers, cfg.power)
        gap = capacity_gap(cfg.servers, cfg.power)

    def one(r):
        return runner(round_cfg, _round_rng(cfg.seed, r))

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            traces = list(pool.map(one, range(cfg.rounds)))
    else:
        traces = [one(r) for r in range(cfg.rounds)]

    failures = sum(1 for t in traces if not t.success)
    sq_sum = float(sum(np.dot(t.z_eq, t.z_eq) for t in traces))
    samples = cfg.rounds * cfg.dim

    return ExperimentResult(
        config=cfg, rounds=cfg.rounds, failures=failures,
        block_error_rate=failures / cfg.rounds,
        empirical_sigma_eq=sq_sum / samples, analytic_sigma_eq=analytic,
        sigma_samples=samples, alpha=alpha, rate_formula=rate,
        lattice_rate=cb.packet_bits / cfg.dim, miso=miso, gap=gap,
        eff_gains=h_eff, gains_used=gains,
        wall_time_s=time.perf_counter() - start,
        traces=traces if keep_traces else [])


RATE_TABLE_COLUMNS = ("N", "P", "R", "C_miso", "gap", "bound", "ok")


def rates_table(servers_range, powers):
    """Rows of (N, P, rate, MISO capacity, gap, gap bound, bound satisfied)."""
    rows = []
    for n in servers_range:
        for p in powers:
            r = rate_nonfading(n, p)
            c = miso_capacity(n, p)
            g = c - r
            b = gap_bound(n)
            rows.append({"N": n, "P": float(p), "R": r, "C_miso": c,
                         "gap": g, "bound": b, "ok": g <= b})
    return rows


def gap_scan(servers_range=range(2, 21), powers=None):
    """The capacity-gap verification grid; default P grid is logspace 0.01..100."""
    if powers is None:
        powers = np.logspace(np.log10(0.01), np.log10(100.0), 50)
    return rates_table(servers_range, powers)


def write_rate_table_csv(rows, path):
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(RATE_TABLE_COLUMNS)
        for row in rows:
            writer.writerow([row["N"], repr(row["P"]), repr(row["R"]),
                             repr(row["C_miso"]), repr(row["gap"]),
                             repr(row["bound"]), str(row["ok"]).lower()])
