"""AWGN multiple-access channel, optionally with per-server block-fading gains."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class ChannelRealization:
    """One block's channel: per-server gains (all ones when there is no fading)
    and unit noise variance, which the rate formulas assume."""

    gains: tuple
    noise_variance: float = 1.0

    def __post_init__(self):
        gains = tuple(float(g) for g in self.gains)
        if len(gains) < 2:
            raise ValueError("gains: need at least two servers")
        if not all(np.isfinite(gains)):
            raise ValueError("gains: must be finite")
        if self.noise_variance != 1.0:
            raise ValueError("noise_variance: fixed at 1 (rates assume unit noise)")
        object.__setattr__(self, "gains", gains)

    @property
    def num_servers(self):
        return len(self.gains)


def mac_output(signals, ch, rng):
    """y = sum_k gains[k] * x_k + z with z i.i.d. standard normal per coordinate.

    Pass rng=None for the noiseless channel (z = 0). One signal per server.
    """
    if len(signals) != ch.num_servers:
        raise ValueError(f"signals: expected {ch.num_servers}, got {len(signals)}")
    stack = np.stack([np.asarray(x, dtype=float) for x in signals])
    if stack.ndim != 2:
        raise ValueError("signals: must be 1-d vectors of a common dimension")
    y = np.asarray(ch.gains, dtype=float) @ stack
    if rng is not None:
        y = y + rng.standard_normal(stack.shape[1])
    return y


@dataclass(frozen=True)
class SubsetPartition:
    """Two disjoint non-empty sets of 1-based server indices; servers outside
    both sets take no part in a round."""

    first: tuple
    second: tuple

    def __post_init__(self):
        first = tuple(int(k) for k in self.first)
        second = tuple(int(k) for k in self.second)
        if not first or not second:
            raise ValueError("partition: both subsets must be non-empty")
        if min(first + second) < 1:
            raise ValueError("partition: server indices are 1-based")
        if len(set(first)) != len(first) or len(set(second)) != len(second):
            raise ValueError("partition: duplicate server index")
        if set(first) & set(second):
            raise ValueError("partition: subsets must be disjoint")
        object.__setattr__(self, "first", first)
        object.__setattr__(self, "second", second)

    def validate_for(self, num_servers):
        if max(self.first + self.second) > num_servers:
            raise ValueError(f"partition: server index exceeds {num_servers}")


def default_partition(num_servers):
    """Odd-indexed servers against even-indexed ones; with an odd server count
    the last server is left out."""
    if num_servers < 2:
        raise ValueError("num_servers: need at least two servers")
    active = 2 * (num_servers // 2)
    return SubsetPartition(tuple(range(1, active + 1, 2)), tuple(range(2, active + 1, 2)))


def effective_gains(partition, ch):
    """Summed gain seen from each subset: (sum over first, sum over second)."""
    partition.validate_for(ch.num_servers)
    return np.array([sum(ch.gains[k - 1] for k in partition.first),
                     sum(ch.gains[k - 1] for k in partition.second)])
