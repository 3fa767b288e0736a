"""Scaled integer lattices, nested pairs, and modulo-lattice arithmetic.

The lattice family is spacing * Z^dim with self-similar nesting
(coarse = ratio * fine). Nearest-point quantization is then coordinatewise
rounding, so quantize / mod / dither sampling are exact and every algebraic
identity is testable to machine precision.

All operations accept float vectors and, for zero-tolerance checks, object
arrays holding ints or fractions.Fraction; the exact lane never touches
floating point.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

_HALF = Fraction(1, 2)

# Relative tolerance for resolving quantizer ties under floating point: a
# ratio this close to a cell boundary is treated as exactly on it, so that
# lattice points reduced mod a coarser lattice (an exact tie in real
# arithmetic, hit with probability 1/ratio) resolve the same way the rational
# tie rule does instead of flipping on the last bit of a product.
_TIE_TOL = 1e-12

IDENTITY_KINDS = ("distributive", "quantize_mod", "int_scale", "real_scale")


def _as_array(point, dim):
    """Coerce to a vector (dim,) or a batch (k, dim); floats unless already object dtype."""
    arr = np.atleast_1d(np.asarray(point))
    if arr.ndim > 2 or arr.shape[-1] != dim:
        raise ValueError(f"expected vectors of length {dim}, got shape {arr.shape}")
    if arr.dtype != object:
        arr = arr.astype(float)
    return arr


def _round_half_up_exact(x):
    """floor(x + 1/2) in rational arithmetic; ties go toward +infinity."""
    return math.floor(Fraction(x) + _HALF)


def _round_half_up_float(x):
    """floor(x + 1/2) with near-ties snapped to the exact-tie resolution."""
    t = x + 0.5
    nearest = np.round(t)
    snap = np.abs(t - nearest) <= _TIE_TOL * np.maximum(1.0, np.abs(t))
    return np.where(snap, nearest, np.floor(t))


@dataclass(frozen=True)
class ScaledIntegerLattice:
    """The lattice spacing * Z^dim.

    spacing may be a float, an int, or a Fraction; the latter two make every
    downstream operation exact.
    """

    dim: int
    spacing: float | int | Fraction

    def __post_init__(self):
        if not isinstance(self.dim, (int, np.integer)) or self.dim < 1:
            raise ValueError("dim: must be an integer >= 1")
        if not self.spacing > 0:
            raise ValueError("spacing: must be positive")

    def scaled(self, factor):
        """The lattice (factor * spacing) * Z^dim; the sign of factor is irrelevant."""
        if factor == 0:
            raise ValueError("factor: must be non-zero")
        return ScaledIntegerLattice(self.dim, abs(factor) * self.spacing)

    def contains(self, point, rel_tol=1e-12):
        """Whether every coordinate is an integer multiple of the spacing."""
        arr = _as_array(point, self.dim)
        if arr.dtype == object:
            b = Fraction(self.spacing)
            return all((Fraction(x) / b).denominator == 1 for x in arr.ravel())
        ratio = arr / float(self.spacing)
        err = np.abs(ratio - np.round(ratio))
        return bool(np.all(err <= rel_tol * np.maximum(1.0, np.abs(ratio))))


@dataclass(frozen=True)
class NestedLatticePair:
    """Self-similar nested pair: coarse = ratio * fine with integer ratio >= 2.

    Every coarse point is a fine point, and the fine codewords inside the
    coarse cell form the nested code used by the retrieval scheme.
    """

    fine: ScaledIntegerLattice
    ratio: int

    def __post_init__(self):
        if isinstance(self.ratio, bool) or not isinstance(self.ratio, (int, np.integer)):
            raise ValueError("ratio: must be an integer")
        if self.ratio < 2:
            raise ValueError("ratio: must be >= 2")

    @property
    def dim(self):
        return self.fine.dim

    @property
    def coarse(self):
        return ScaledIntegerLattice(self.fine.dim, self.ratio * self.fine.spacing)


def quantize(point, lat):
    """Nearest lattice point, coordinatewise, with ties toward +infinity.

    For spacing * Z^dim this is spacing * round(x / spacing); the half-up tie
    rule puts the quantization error in [-spacing/2, spacing/2) per coordinate.
    """
    arr = _as_array(point, lat.dim)
    if arr.dtype == object:
        b = Fraction(lat.spacing)
        flat = np.array([b * _round_half_up_exact(Fraction(x) / b) for x in arr.ravel()],
                        dtype=object)
        return flat.reshape(arr.shape)
    b = float(lat.spacing)
    return b * _round_half_up_float(arr / b)


def mod_lattice(point, lat):
    """Quantization error point - quantize(point): the coset representative of
    point inside the fundamental cell [-spacing/2, spacing/2)^dim."""
    arr = _as_array(point, lat.dim)
    return arr - quantize(arr, lat)


def in_fundamental_cell(point, lat, tol=1e-9):
    """Whether every coordinate lies in the half-open cell [-spacing/2, spacing/2).

    Float inputs get a small slop on both ends; exact inputs are checked strictly.
    """
    arr = _as_array(point, lat.dim)
    if arr.dtype == object:
        half = Fraction(lat.spacing) / 2
        return all(-half <= Fraction(x) < half for x in arr.ravel())
    half = float(lat.spacing) / 2.0
    slop = tol * max(1.0, half)
    return bool(np.all((arr >= -half - slop) & (arr < half + slop)))


def coset_gap(x, y, lat):
    """Max-abs distance between the cosets of x and y in R^dim modulo the lattice.

    Zero (up to float noise) iff x and y represent the same coset; immune to
    which side of a cell boundary a representative happens to fall on.
    """
    diff = _as_array(x, lat.dim) - _as_array(y, lat.dim)
    rep = mod_lattice(diff, lat)
    return float(np.max(np.abs(rep.astype(float))))


def sample_dither(pair, rng):
    """One dither vector: i.i.d. uniform on the coarse cell [-c/2, c/2)^dim."""
    c = float(pair.coarse.spacing)
    return rng.uniform(-c / 2.0, c / 2.0, pair.dim)


def second_moment(pair):
    """Per-dimension second moment of the uniform distribution on the coarse
    cell: (coarse spacing)^2 / 12. Exact when the spacing is exact."""
    c = pair.coarse.spacing
    return c * c / 12


@dataclass(frozen=True)
class IdentityCheck:
    """Outcome of one identity evaluation; lhs/rhs are kept as a witness."""

    kind: str
    ok: bool
    lhs: np.ndarray
    rhs: np.ndarray
    max_abs_diff: float


def verify_identity(kind, *, s, lattice=None, pair=None, t=None, a=None, scale=None,
                    tol=1e-9):
    """Evaluate one modulo-lattice identity on concrete inputs.

    distributive: [s + t] mod L        == [[s] mod L + t] mod L
    quantize_mod: [Qf(s)] mod Lc       == [Qf([s] mod Lc)] mod Lc   (uses pair)
    int_scale:    [a s] mod L          == [a ([s] mod L)] mod L     (integer a)
    real_scale:   scale ([s] mod L)    == [scale s] mod (scale L)   (scale != 0)

    Returns an IdentityCheck whose ok flag means both sides agree within tol;
    both sides are always returned as the witness.
    """
    if kind == "distributive":
        if lattice is None or t is None:
            raise ValueError("distributive: needs s, t, lattice")
        lhs = mod_lattice(_as_array(s, lattice.dim) + _as_array(t, lattice.dim), lattice)
        rhs = mod_lattice(mod_lattice(s, lattice) + _as_array(t, lattice.dim), lattice)
    elif kind == "quantize_mod":
        if pair is None:
            raise ValueError("quantize_mod: needs s and a nested pair")
        lhs = mod_lattice(quantize(s, pair.fine), pair.coarse)
        rhs = mod_lattice(quantize(mod_lattice(s, pair.coarse), pair.fine), pair.coarse)
    elif kind == "int_scale":
        if lattice is None or a is None:
            raise ValueError("int_scale: needs s, a, lattice")
        if isinstance(a, bool) or not isinstance(a, (int, np.integer)):
            raise ValueError("int_scale: a must be an integer")
        lhs = mod_lattice(a * _as_array(s, lattice.dim), lattice)
        rhs = mod_lattice(a * mod_lattice(s, lattice), lattice)
    elif kind == "real_scale":
        if lattice is None or scale is None:
            raise ValueError("real_scale: needs s, scale, lattice")
        if scale == 0:
            raise ValueError("real_scale: scale must be non-zero")
        lhs = scale * mod_lattice(s, lattice)
        rhs = mod_lattice(scale * _as_array(s, lattice.dim), lattice.scaled(scale))
    else:
        raise ValueError(f"kind: must be one of {IDENTITY_KINDS}")
    diff = float(np.max(np.abs((lhs - rhs).astype(float))))
    return IdentityCheck(kind, diff <= tol, lhs, rhs, diff)


def counterexample_eval(alpha, answer1, answer2, dither, pair):
    """Evaluate both sides of the dither-splitting rearrangement

        lhs = [alpha ([A1 - d] mod Lc + [A2 - d] mod Lc)] mod Lc
        rhs = [alpha ([A1 + A2] mod Lc - [2 d] mod Lc)] mod Lc

    for fine-lattice points A1, A2. The two sides agree whenever alpha is an
    integer but differ in general; the caller compares them. Pass exact
    (int / Fraction) inputs to evaluate in rational arithmetic.
    """
    coarse = pair.coarse
    a1 = _as_array(answer1, pair.dim)
    a2 = _as_array(answer2, pair.dim)
    d = _as_array(dither, pair.dim)
    if not pair.fine.contains(a1, rel_tol=1e-9):
        raise ValueError("answer1: not a fine-lattice point")
    if not pair.fine.contains(a2, rel_tol=1e-9):
        raise ValueError("answer2: not a fine-lattice point")
    lhs = mod_lattice(alpha * (mod_lattice(a1 - d, coarse) + mod_lattice(a2 - d, coarse)),
                      coarse)
    rhs = mod_lattice(alpha * (mod_lattice(a1 + a2, coarse) - mod_lattice(2 * d, coarse)),
                      coarse)
    return lhs, rhs
