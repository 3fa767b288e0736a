"""Nested lattice codebooks and the packet <-> codeword mapping.

The code is the set of fine-lattice points inside the coarse cell; a packet of
bits addresses a codeword through base-ratio digits, so the mapping is
constructive, invertible, and independent of any stored message.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import product

import numpy as np

from .lattices import NestedLatticePair, ScaledIntegerLattice, mod_lattice


class PhiRangeError(ValueError):
    """The lattice point is not the image of any packet."""


@dataclass(frozen=True)
class Packet:
    """A fixed-length tuple of information bits."""

    bits: tuple

    def __post_init__(self):
        clean = tuple(int(b) for b in self.bits)
        if not clean or any(b not in (0, 1) for b in clean):
            raise ValueError("bits: must be a non-empty 0/1 sequence")
        object.__setattr__(self, "bits", clean)

    @classmethod
    def from_int(cls, value, num_bits):
        if not 0 <= value < 2 ** num_bits:
            raise ValueError(f"value: must be in [0, 2^{num_bits})")
        return cls(tuple(int(c) for c in format(value, f"0{num_bits}b")))

    @classmethod
    def random(cls, num_bits, rng):
        return cls(tuple(int(b) for b in rng.integers(0, 2, num_bits)))

    def to_int(self):
        out = 0
        for b in self.bits:
            out = (out << 1) | b
        return out

    def __len__(self):
        return len(self.bits)

    def __str__(self):
        return "".join(str(b) for b in self.bits)


def max_packet_bits(dim, ratio):
    """Largest packet size l with 2^l <= ratio^dim (injectivity of the mapping)."""
    return (ratio ** dim).bit_length() - 1


@dataclass(frozen=True)
class Codebook:
    """Nested code over a pair, sized so dither power equals the power budget.

    power is the per-dimension transmit power; packet_bits (l) many bits are
    addressable, out of ratio^dim codewords in total. exact=True keeps all
    mapping arithmetic in rational numbers.
    """

    pair: NestedLatticePair
    power: float | Fraction
    packet_bits: int
    exact: bool = False

    def __post_init__(self):
        if not self.power > 0:
            raise ValueError("power: must be positive")
        if self.packet_bits < 1:
            raise ValueError("packet_bits: must be >= 1")
        n, q = self.pair.dim, self.pair.ratio
        if 2 ** self.packet_bits > q ** n:
            raise ValueError(
                f"packet_bits: 2^{self.packet_bits} packets exceed the "
                f"{q}^{n} available codewords")

    @property
    def dim(self):
        return self.pair.dim

    @property
    def ratio(self):
        return self.pair.ratio

    def size(self):
        """Number of codewords |fine lattice intersect coarse cell| = ratio^dim."""
        return self.pair.ratio ** self.pair.dim

    def codewords(self):
        """All codewords as coset representatives in the coarse cell.

        Enumeration is exponential in dim; intended for small brute-force checks.
        """
        digits = range(self.pair.ratio)
        for combo in product(digits, repeat=self.pair.dim):
            yield _digits_to_codeword(combo, self)


def build_codebook(dim, ratio, power, packet_bits=None):
    """Codebook whose coarse cell is scaled so a uniform dither has per-dimension
    second moment equal to power: coarse spacing = sqrt(12 * power)."""
    if not power > 0:
        raise ValueError("power: must be positive")
    spacing = math.sqrt(12.0 * float(power)) / ratio
    pair = NestedLatticePair(ScaledIntegerLattice(dim, spacing), ratio)
    if packet_bits is None:
        packet_bits = max_packet_bits(dim, ratio)
    return Codebook(pair, float(power), packet_bits, exact=False)


def exact_codebook(dim, ratio, spacing=1, packet_bits=None):
    """Codebook over an exactly representable lattice (int or Fraction spacing);
    the mapping and all answer arithmetic stay rational."""
    b = Fraction(spacing)
    pair = NestedLatticePair(ScaledIntegerLattice(dim, b), ratio)
    if packet_bits is None:
        packet_bits = max_packet_bits(dim, ratio)
    power = (ratio * b) ** 2 / 12
    return Codebook(pair, power, packet_bits, exact=True)


def _digits_to_codeword(digits, cb):
    if cb.exact:
        b = Fraction(cb.pair.fine.spacing)
        coords = np.array([b * int(d) for d in digits], dtype=object)
    else:
        coords = float(cb.pair.fine.spacing) * np.asarray(digits, dtype=float)
    return mod_lattice(coords, cb.pair.coarse)


def phi(packet, cb):
    """Map a packet to its codeword.

    The packet's integer value is expanded in base ratio; each digit scales the
    fine spacing on its own coordinate and the result is reduced into the
    coarse cell. Injective because 2^packet_bits <= ratio^dim.
    """
    if len(packet) != cb.packet_bits:
        raise ValueError(f"packet: expected {cb.packet_bits} bits, got {len(packet)}")
    u = packet.to_int()
    digits = []
    for _ in range(cb.pair.dim):
        u, d = divmod(u, cb.pair.ratio)
        digits.append(d)
    return _digits_to_codeword(digits, cb)


def phi_inv(point, cb, tol=1e-9):
    """Recover the packet addressing a codeword (coset representative).

    Raises PhiRangeError when the point is off the fine lattice beyond tol or
    addresses a codeword outside the 2^packet_bits mapped ones.
    """
    arr = np.atleast_1d(np.asarray(point))
    if arr.shape != (cb.pair.dim,):
        raise ValueError(f"point: expected shape ({cb.pair.dim},), got {arr.shape}")
    q = cb.pair.ratio
    if arr.dtype == object:
        b = Fraction(cb.pair.fine.spacing)
        digits = []
        for x in arr:
            r = Fraction(x) / b
            if r.denominator != 1:
                raise PhiRangeError("point is not a fine-lattice point")
            digits.append(int(r) % q)
    else:
        ratio = arr.astype(float) / float(cb.pair.fine.spacing)
        nearest = np.round(ratio)
        if np.any(np.abs(ratio - nearest) > tol * np.maximum(1.0, np.abs(ratio))):
            raise PhiRangeError("point is not a fine-lattice point (beyond tolerance)")
        digits = [int(k) % q for k in nearest]
    u = 0
    for i, d in enumerate(digits):
        u += d * q ** i
    if u >= 2 ** cb.packet_bits:
        raise PhiRangeError(f"codeword index {u} is outside the mapped packet range")
    return Packet.from_int(u, cb.packet_bits)
