"""The two-group retrieval protocol, non-fading and block-fading.

One round retrieves one packet out of M without any single server learning
which. The user draws a uniform binary mask b and sends it (as the query) to
one half of the servers; the other half receives a masked complement that
differs from -b only at the requested position. Each server folds its stored
packets' codewords under the query weights mod the coarse lattice, subtracts
its group's dither, and transmits. Because the two queries sum to plus or
minus the requested unit vector, scaling the channel sum, adding the dithers
back, and reducing mod the coarse lattice leaves the requested codeword plus
an equivalent noise; the scaling parameter alpha trades channel noise against
self-noise.

Block fading replaces the two fixed groups by an arbitrary disjoint pair of
server subsets; the queries carry inverse integer coefficients (a1, a2) so
that the user can decode the integer combination a1 x1 + a2 x2 from the
faded sum.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .channel import ChannelRealization, SubsetPartition, effective_gains, mac_output
from .codebook import Codebook, Packet, PhiRangeError, phi, phi_inv
from .lattices import mod_lattice, quantize, sample_dither
from .rates import alpha_opt_fading, alpha_opt_nonfading


def _scaled_by_inverse(values, coeff):
    """values / coeff as exact rationals; plain ints when coeff is 1."""
    if coeff == 1:
        return np.asarray(values, dtype=int)
    return np.array([Fraction(int(v), int(coeff)) for v in values], dtype=object)


def first_query_vector(mask, coeff=1):
    """Query for the first group: the mask itself, scaled by 1/coeff."""
    return _scaled_by_inverse(np.asarray(mask, dtype=int), coeff)


def second_query_vector(mask, index, coeff=1):
    """Query for the second group: -mask with the entry at the 1-based index
    complemented, scaled by 1/coeff. Together the two queries sum to
    (2 b_i - 1)/1 times the index's unit vector (before scaling)."""
    mask = np.asarray(mask, dtype=int)
    if not 1 <= index <= mask.shape[0]:
        raise ValueError(f"index: must be in [1, {mask.shape[0]}]")
    raw = -mask.copy()
    raw[index - 1] += 1 if mask[index - 1] == 1 else -1
    return _scaled_by_inverse(raw, coeff)


@dataclass(frozen=True)
class QueryPair:
    """The two per-group queries of one round, plus what generated them."""

    mask: tuple
    index: int
    first: np.ndarray
    second: np.ndarray
    coeffs: tuple = (1, 1)

    @property
    def mask_bit(self):
        return self.mask[self.index - 1]

    @property
    def sign(self):
        """+1 when the group sum carries +codeword, -1 when it carries -codeword."""
        return 2 * self.mask_bit - 1


def _check_coeffs(coeffs):
    coeffs = tuple(coeffs)
    if len(coeffs) != 2:
        raise ValueError("coeffs: must have exactly two entries")
    for c in coeffs:
        if isinstance(c, bool) or not isinstance(c, (int, np.integer)):
            raise ValueError("coeffs: entries must be integers")
        if c == 0:
            raise ValueError("coeffs: entries must be non-zero")
    return tuple(int(c) for c in coeffs)


def gen_queries(num_messages, index, rng):
    """Draw a uniform mask over {0,1}^M and form the two group queries."""
    if not 1 <= index <= num_messages:
        raise ValueError(f"index: must be in [1, {num_messages}]")
    mask = rng.integers(0, 2, num_messages)
    return QueryPair(tuple(int(b) for b in mask), index,
                     first_query_vector(mask), second_query_vector(mask, index))


def gen_queries_fading(num_messages, index, coeffs, rng):
    """Fading variant: the group queries are scaled by the inverses of the
    integer combination coefficients."""
    a1, a2 = _check_coeffs(coeffs)
    if not 1 <= index <= num_messages:
        raise ValueError(f"index: must be in [1, {num_messages}]")
    mask = rng.integers(0, 2, num_messages)
    return QueryPair(tuple(int(b) for b in mask), index,
                     first_query_vector(mask, a1), second_query_vector(mask, index, a2),
                     (a1, a2))


@dataclass
class ServerState:
    """One server's view: the replicated packet store, its group, its dither."""

    packets: tuple
    codebook: Codebook
    dither: np.ndarray
    group: int

    def __post_init__(self):
        if self.group not in (1, 2):
            raise ValueError("group: must be 1 or 2")
        if any(len(p) != self.codebook.packet_bits for p in self.packets):
            raise ValueError("packets: every packet must have the codebook's bit length")
        self._codewords = None

    @property
    def codewords(self):
        """(M, dim) matrix of the packets' codewords."""
        if self._codewords is None:
            self._codewords = np.stack([phi(p, self.codebook) for p in self.packets])
        return self._codewords


def form_answer(query, server):
    """Fold the database under the query weights:
    [sum_m query_m * codeword_m] mod coarse."""
    q = np.asarray(query)
    if q.shape != (len(server.packets),):
        raise ValueError(f"query: expected length {len(server.packets)}, got {q.shape}")
    acc = q @ server.codewords
    acc = np.atleast_1d(acc)
    if acc.dtype == object and not server.codebook.exact:
        acc = acc.astype(float)
    return mod_lattice(acc, server.codebook.pair.coarse)


def encode_transmit(answer, dither, coarse):
    """x = [answer - dither] mod coarse; uniform on the coarse cell and
    independent of the answer when the dither is uniform."""
    return mod_lattice(np.asarray(answer, dtype=float) - dither, coarse)


def mlan_intermediate_nonfading(y, d1, d2, num_servers, codebook, alpha):
    """[(alpha / floor(N/2)) y + d1 + d2] mod coarse: removes the dithers and
    reduces the scaled channel output to codeword-plus-equivalent-noise."""
    half = num_servers // 2
    return mod_lattice((alpha / half) * y + d1 + d2, codebook.pair.coarse)


def mlan_intermediate_fading(y, d1, d2, coeffs, codebook, alpha):
    """[alpha y + a1 d1 + a2 d2] mod coarse."""
    a1, a2 = _check_coeffs(coeffs)
    return mod_lattice(alpha * y + a1 * d1 + a2 * d2, codebook.pair.coarse)


def _estimate_packet(v_tilde, mask_bit, cb):
    """Sign-correct, quantize to the fine lattice, reduce, and invert the mapping."""
    corrected = v_tilde if mask_bit == 1 else mod_lattice(-v_tilde, cb.pair.coarse)
    v_hat = mod_lattice(quantize(corrected, cb.pair.fine), cb.pair.coarse)
    try:
        packet = phi_inv(v_hat, cb)
    except PhiRangeError:
        packet = None
    return v_hat, packet


def decode_nonfading(y, d1, d2, num_servers, power, mask_bit, codebook, alpha=None):
    """Decode one round: scale, add dithers, reduce, fix the sign, read off.

    alpha defaults to the variance-minimizing value for (num_servers, power).
    Returns (codeword estimate, packet); the packet is None when the estimate
    is not an addressable codeword, which callers count as a decoding failure.
    """
    if num_servers < 2:
        raise ValueError("num_servers: must be >= 2")
    if alpha is None:
        alpha = alpha_opt_nonfading(num_servers, power)
    v_tilde = mlan_intermediate_nonfading(y, d1, d2, num_servers, codebook, alpha)
    return _estimate_packet(v_tilde, mask_bit, codebook)


def decode_fading(y, d1, d2, coeffs, eff_gains, power, mask_bit, codebook, alpha=None):
    """Fading decode; same contract as decode_nonfading with the integer
    combination coefficients and effective gains in place of the server count."""
    coeffs = _check_coeffs(coeffs)
    if alpha is None:
        alpha = alpha_opt_fading(power, eff_gains, coeffs)
    v_tilde = mlan_intermediate_fading(y, d1, d2, coeffs, codebook, alpha)
    return _estimate_packet(v_tilde, mask_bit, codebook)


@dataclass(frozen=True)
class RoundConfig:
    """Everything one non-fading round needs besides randomness."""

    codebook: Codebook
    num_servers: int
    num_messages: int
    noiseless: bool = False
    alpha: float | None = None
    index: int | None = None

    def __post_init__(self):
        if self.num_servers < 2:
            raise ValueError("num_servers: the scheme needs two server groups")
        if self.num_messages < 1:
            raise ValueError("num_messages: must be >= 1")
        if self.index is not None and not 1 <= self.index <= self.num_messages:
            raise ValueError("index: out of range")


@dataclass(frozen=True)
class FadingRoundConfig:
    """Everything one fading round needs besides randomness; the channel gains
    are fixed for the block and passed in, not drawn here."""

    codebook: Codebook
    gains: tuple
    partition: SubsetPartition
    coeffs: tuple = (1, 1)
    num_messages: int = 1
    noiseless: bool = False
    alpha: float | None = None
    index: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "gains", tuple(float(g) for g in self.gains))
        object.__setattr__(self, "coeffs", _check_coeffs(self.coeffs))
        if len(self.gains) < 2:
            raise ValueError("gains: the scheme needs two server groups")
        self.partition.validate_for(len(self.gains))
        if self.num_messages < 1:
            raise ValueError("num_messages: must be >= 1")
        if self.index is not None and not 1 <= self.index <= self.num_messages:
            raise ValueError("index: out of range")

    @property
    def num_servers(self):
        return len(self.gains)


@dataclass
class RoundTrace:
    """Full observability for one round: every wire value plus the realized
    equivalent noise, for calibration and algebra checks."""

    scheme: str
    index: int
    queries: QueryPair
    groups: tuple
    answers: tuple
    transmissions: tuple
    dithers: tuple
    output: np.ndarray
    noise: np.ndarray
    codeword: np.ndarray
    v_tilde: np.ndarray
    v_hat: np.ndarray
    decoded: Packet | None
    expected: Packet
    success: bool
    z_eq: np.ndarray
    alpha: float
    eff_gains: tuple | None = None
    coeffs: tuple | None = None
    gains: tuple | None = None


def _draw_round_inputs(cfg, rng):
    index = cfg.index if cfg.index is not None else int(rng.integers(1, cfg.num_messages + 1))
    packets = tuple(Packet.random(cfg.codebook.packet_bits, rng)
                    for _ in range(cfg.num_messages))
    return index, packets


def _group_signals(cfg, groups, queries, packets, rng):
    cb = cfg.codebook
    d1 = sample_dither(cb.pair, rng)
    d2 = sample_dither(cb.pair, rng)
    srv1 = ServerState(packets, cb, d1, 1)
    srv2 = ServerState(packets, cb, d2, 2)
    answer1 = form_answer(queries.first, srv1)
    answer2 = form_answer(queries.second, srv2)
    x1 = encode_transmit(answer1, d1, cb.pair.coarse)
    x2 = encode_transmit(answer2, d2, cb.pair.coarse)
    zero = np.zeros(cb.pair.dim)
    answers = tuple(answer1 if g == 1 else answer2 if g == 2 else None for g in groups)
    signals = [x1 if g == 1 else x2 if g == 2 else zero for g in groups]
    return d1, d2, answer1, answer2, x1, x2, answers, signals


def run_round(cfg, rng):
    """One full non-fading round. Odd server counts leave the last server
    unqueried and silent, so the channel carries floor(N/2) copies per group.

    Draw order (fixed for reproducibility): index, packets, mask, dithers, noise.
    """
    cb = cfg.codebook
    index, packets = _draw_round_inputs(cfg, rng)
    queries = gen_queries(cfg.num_messages, index, rng)
    groups = tuple((1 if j % 2 == 1 else 2) if j <= 2 * (cfg.num_servers // 2) else None
                   for j in range(1, cfg.num_servers + 1))
    d1, d2, _, _, x1, x2, answers, signals = _group_signals(cfg, groups, queries, packets, rng)
    ch = ChannelRealization((1.0,) * cfg.num_servers)
    y = mac_output(signals, ch, None if cfg.noiseless else rng)
    noise = y - np.asarray(ch.gains) @ np.stack(signals)
    alpha = cfg.alpha if cfg.alpha is not None else alpha_opt_nonfading(cfg.num_servers, cb.power)

    v_tilde = mlan_intermediate_nonfading(y, d1, d2, cfg.num_servers, cb, alpha)
    v_hat, decoded = _estimate_packet(v_tilde, queries.mask_bit, cb)
    expected = packets[index - 1]
    z_eq = (alpha / (cfg.num_servers // 2)) * noise - (1.0 - alpha) * (x1 + x2)

    return RoundTrace(
        scheme="nonfading", index=index, queries=queries, groups=groups,
        answers=answers,
        transmissions=tuple(x1 if g == 1 else x2 if g == 2 else None for g in groups),
        dithers=(d1, d2), output=y, noise=noise,
        codeword=phi(expected, cb), v_tilde=v_tilde, v_hat=v_hat,
        decoded=decoded, expected=expected, success=decoded == expected,
        z_eq=z_eq, alpha=alpha)


def run_round_fading(cfg, rng):
    """One full block-fading round over the configured partition and gains."""
    cb = cfg.codebook
    index, packets = _draw_round_inputs(cfg, rng)
    queries = gen_queries_fading(cfg.num_messages, index, cfg.coeffs, rng)
    groups = tuple(1 if j in cfg.partition.first else 2 if j in cfg.partition.second else None
                   for j in range(1, cfg.num_servers + 1))
    d1, d2, _, _, x1, x2, answers, signals = _group_signals(cfg, groups, queries, packets, rng)
    ch = ChannelRealization(cfg.gains)
    y = mac_output(signals, ch, None if cfg.noiseless else rng)
    noise = y - np.asarray(ch.gains) @ np.stack(signals)
    h_eff = effective_gains(cfg.partition, ch)
    alpha = cfg.alpha if cfg.alpha is not None else alpha_opt_fading(cb.power, h_eff, cfg.coeffs)

    v_tilde = mlan_intermediate_fading(y, d1, d2, cfg.coeffs, cb, alpha)
    v_hat, decoded = _estimate_packet(v_tilde, queries.mask_bit, cb)
    expected = packets[index - 1]
    psi1 = alpha * h_eff[0] - cfg.coeffs[0]
    psi2 = alpha * h_eff[1] - cfg.coeffs[1]
    z_eq = psi1 * x1 + psi2 * x2 + alpha * noise

    return RoundTrace(
        scheme="fading", index=index, queries=queries, groups=groups,
        answers=answers,
        transmissions=tuple(x1 if g == 1 else x2 if g == 2 else None for g in groups),
        dithers=(d1, d2), output=y, noise=noise,
        codeword=phi(expected, cb), v_tilde=v_tilde, v_hat=v_hat,
        decoded=decoded, expected=expected, success=decoded == expected,
        z_eq=z_eq, alpha=alpha,
        eff_gains=tuple(float(g) for g in h_eff), coeffs=cfg.coeffs, gains=cfg.gains)
