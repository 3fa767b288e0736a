"""Closed-form achievable rates, equivalent-noise variances, and capacity gaps.

All logarithms are base 2 (rates in bits per channel use); log2_pos clamps at
zero. Formulas assume unit channel noise variance, which the channel module
enforces.
"""

from __future__ import annotations

import math

import numpy as np


def log2_pos(x):
    """max(log2(x), 0) for x > 0."""
    if not x > 0:
        raise ValueError("x: must be positive")
    return max(math.log2(x), 0.0)


def _check_servers(num_servers):
    if isinstance(num_servers, bool) or not isinstance(num_servers, (int, np.integer)):
        raise ValueError("num_servers: must be an integer")
    if num_servers < 2:
        raise ValueError("num_servers: must be >= 2")


def _check_power(power):
    if not power > 0:
        raise ValueError("power: must be positive")


def _check_coeffs(coeffs):
    coeffs = tuple(coeffs)
    if len(coeffs) != 2:
        raise ValueError("coeffs: must have exactly two entries")
    for c in coeffs:
        if isinstance(c, bool) or not isinstance(c, (int, np.integer)):
            raise ValueError("coeffs: entries must be integers")
        if c == 0:
            raise ValueError("coeffs: entries must be non-zero")
    return coeffs


def rate_nonfading(num_servers, power):
    """Achievable retrieval rate (1/2) log2+(1/2 + floor(N/2)^2 P)."""
    _check_servers(num_servers)
    _check_power(power)
    half = num_servers // 2
    return 0.5 * log2_pos(0.5 + half * half * power)


def sigma_eq_nonfading(alpha, num_servers, power):
    """Equivalent-noise variance 2 (1-alpha)^2 P + alpha^2 / floor(N/2)^2.

    The first term is self-noise from the two group signals, the second the
    scaled channel noise left after averaging the floor(N/2) group copies.
    """
    _check_servers(num_servers)
    _check_power(power)
    half = num_servers // 2
    return 2.0 * (1.0 - alpha) ** 2 * power + alpha * alpha / (half * half)


def alpha_opt_nonfading(num_servers, power):
    """Scaling 2P / (2P + s) with s = floor(N/2)^{-2}, the minimizer of
    sigma_eq_nonfading over alpha."""
    _check_servers(num_servers)
    _check_power(power)
    s = 1.0 / (num_servers // 2) ** 2
    return 2.0 * power / (2.0 * power + s)


def sigma_eq_opt_nonfading(num_servers, power):
    """Minimized equivalent-noise variance 2 P s / (2P + s), s = floor(N/2)^{-2}."""
    _check_servers(num_servers)
    _check_power(power)
    s = 1.0 / (num_servers // 2) ** 2
    return 2.0 * power * s / (2.0 * power + s)


def sigma_eq_fading(alpha, power, eff_gains, coeffs):
    """Equivalent-noise variance alpha^2 + P ||alpha h - a||^2 for effective
    gains h and integer combination coefficients a."""
    _check_power(power)
    h1, h2 = (float(g) for g in eff_gains)
    a1, a2 = _check_coeffs(coeffs)
    return alpha ** 2 + power * ((alpha * h1 - a1) ** 2 + (alpha * h2 - a2) ** 2)


def alpha_opt_fading(power, eff_gains, coeffs):
    """Minimizer P (h . a) / (1 + P ||h||^2) of sigma_eq_fading over alpha."""
    _check_power(power)
    h1, h2 = (float(g) for g in eff_gains)
    a1, a2 = _check_coeffs(coeffs)
    return power * (h1 * a1 + h2 * a2) / (1.0 + power * (h1 * h1 + h2 * h2))


def rate_fading_forms(power, eff_gains, coeffs):
    """The fading rate in its three algebraically equal forms.

    The denominators differ only in how the Gram determinant
    ||a||^2 ||h||^2 - (h . a)^2 = (a1 h2 - a2 h1)^2 is written out.
    """
    _check_power(power)
    h1, h2 = (float(g) for g in eff_gains)
    a1, a2 = _check_coeffs(coeffs)
    norm_h2 = h1 * h1 + h2 * h2
    norm_a2 = float(a1 * a1 + a2 * a2)
    num = 1.0 + power * norm_h2
    dot = np.dot([h1, h2], [a1, a2])
    den_gram = norm_a2 + power * (norm_a2 * norm_h2 - dot * dot)
    den_expanded = norm_a2 + power * (norm_a2 * norm_h2 - (a1 * h1 + a2 * h2) ** 2)
    den_cross = norm_a2 + power * (a1 * h2 - a2 * h1) ** 2
    return tuple(0.5 * log2_pos(num / d) for d in (den_gram, den_expanded, den_cross))


def rate_fading(power, eff_gains, coeffs):
    """Achievable fading rate
    (1/2) log2+((1 + P ||h||^2) / (||a||^2 + P (a1 h2 - a2 h1)^2))."""
    return rate_fading_forms(power, eff_gains, coeffs)[2]


def miso_capacity(num_servers, power):
    """Cooperative upper bound (1/2) log2(1 + N^2 P)."""
    _check_servers(num_servers)
    _check_power(power)
    return 0.5 * math.log2(1.0 + num_servers * num_servers * power)


def gap_bound(num_servers):
    """Bound on the capacity gap: 1 bit for even server counts, 2 for odd."""
    _check_servers(num_servers)
    return 1.0 if num_servers % 2 == 0 else 2.0


def capacity_gap(num_servers, power):
    """miso_capacity - rate_nonfading; stays within gap_bound."""
    return miso_capacity(num_servers, power) - rate_nonfading(num_servers, power)


def gap_bound_ratio(num_servers, power):
    """(1 + N^2 P) / (2 + (N-1)^2 P), which stays below 4 for N >= 2; this
    ratio is what pins the odd-N gap at 2 bits."""
    _check_servers(num_servers)
    _check_power(power)
    n = num_servers
    return (1.0 + n * n * power) / (2.0 + (n - 1) ** 2 * power)
