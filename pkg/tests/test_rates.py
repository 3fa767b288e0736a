"""Closed-form rates, equivalent-noise variances, optimal scaling, gap bounds."""

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from lattice_pir.rates import (alpha_opt_fading, alpha_opt_nonfading, capacity_gap,
                               gap_bound, gap_bound_ratio, log2_pos, miso_capacity,
                               rate_fading, rate_fading_forms, rate_nonfading,
                               sigma_eq_fading, sigma_eq_nonfading,
                               sigma_eq_opt_nonfading)


def refine_argmin(f, lo, hi, passes=5, points=201):
    """Brute-force grid minimizer with interval refinement; independent of any
    closed-form answer."""
    for _ in range(passes):
        xs = np.linspace(lo, hi, points)
        k = int(np.argmin(f(xs)))
        step = xs[1] - xs[0]
        lo, hi = xs[k] - step, xs[k] + step
    return xs[k]


class TestNonfadingRate:
    def test_reference_values(self):
        assert rate_nonfading(2, 1.0) == pytest.approx(0.2924812503605781, abs=1e-12)
        assert rate_nonfading(3, 1.0) == rate_nonfading(2, 1.0)

    def test_clamps_at_zero(self):
        # argument tends to 1/2 < 1 as P -> 0
        assert rate_nonfading(2, 1e-9) == 0.0

    def test_monotone_in_servers_and_power(self):
        powers = np.logspace(-2, 2, 20)
        for p in powers:
            rates = [rate_nonfading(n, p) for n in range(2, 15)]
            assert all(b >= a for a, b in zip(rates, rates[1:]))
        for n in (2, 5, 8):
            rates = [rate_nonfading(n, p) for p in powers]
            assert all(b >= a for a, b in zip(rates, rates[1:]))

    def test_invalid_inputs(self):
        with pytest.raises(ValueError):
            rate_nonfading(1, 1.0)
        with pytest.raises(ValueError):
            rate_nonfading(2, 0.0)


class TestSigmaNonfading:
    def test_reference_optimum(self):
        assert alpha_opt_nonfading(2, 1.0) == pytest.approx(2.0 / 3.0, abs=1e-15)
        assert sigma_eq_opt_nonfading(2, 1.0) == pytest.approx(2.0 / 3.0, abs=1e-15)

    def test_alpha_one_leaves_noise_term(self):
        for n in (2, 4, 7):
            assert sigma_eq_nonfading(1.0, n, 3.0) == pytest.approx(
                1.0 / (n // 2) ** 2, abs=1e-15)

    def test_optimum_consistency(self):
        for n in (2, 3, 6, 11):
            for p in (0.1, 1.0, 25.0):
                a = alpha_opt_nonfading(n, p)
                assert sigma_eq_nonfading(a, n, p) == pytest.approx(
                    sigma_eq_opt_nonfading(n, p), rel=1e-12)

    def test_rate_equals_snr_form(self):
        # (1/2) log2+(P / sigma_opt) reproduces the rate formula
        for n in range(2, 21):
            for p in np.logspace(-2, 2, 50):
                lhs = 0.5 * log2_pos(p / sigma_eq_opt_nonfading(n, p))
                assert lhs == pytest.approx(rate_nonfading(n, p), abs=1e-12)

    def test_alpha_matches_grid_search(self):
        for n in (2, 3, 8):
            for p in (0.2, 1.0, 12.0):
                bound = 1 + np.sqrt(2 * p) * (n // 2)
                star = refine_argmin(lambda a: sigma_eq_nonfading(a, n, p),
                                     -bound, bound)
                assert alpha_opt_nonfading(n, p) == pytest.approx(star, abs=1e-6)


class TestFadingRate:
    def test_reference_value(self):
        assert rate_fading(1.0, (1.0, 1.0), (1, 1)) == pytest.approx(
            0.2924812503605781, abs=1e-12)

    def test_proportional_coeffs_zero_cross_term(self):
        r_aligned = rate_fading(2.0, (2.0, 4.0), (1, 2))
        r_other = rate_fading(2.0, (2.0, 4.0), (2, 1))
        assert r_aligned > r_other

    def test_deep_fade_clamps(self):
        for p in (0.5, 1.0, 10.0):
            assert rate_fading(p, (1.0, 0.0), (1, 1)) == 0.0

    def test_forms_agree(self, rng):
        for _ in range(500):
            p = float(10 ** rng.uniform(-2, 2))
            h = tuple(rng.normal(size=2))
            a = tuple(int(c) for c in rng.choice([-3, -2, -1, 1, 2, 3], size=2))
            forms = rate_fading_forms(p, h, a)
            assert forms[0] == pytest.approx(forms[1], abs=1e-12)
            assert forms[1] == pytest.approx(forms[2], abs=1e-12)

    def test_zero_coeff_rejected(self):
        with pytest.raises(ValueError):
            rate_fading(1.0, (1.0, 1.0), (0, 1))
        with pytest.raises(ValueError):
            sigma_eq_fading(0.5, 1.0, (1.0, 1.0), (0, 0))


class TestSigmaFading:
    def test_reference_optimum(self):
        assert alpha_opt_fading(1.0, (1.0, 1.0), (1, 1)) == pytest.approx(
            2.0 / 3.0, abs=1e-15)
        a = alpha_opt_fading(1.0, (1.0, 1.0), (1, 1))
        assert sigma_eq_fading(a, 1.0, (1.0, 1.0), (1, 1)) == pytest.approx(
            2.0 / 3.0, abs=1e-15)

    def test_rate_equals_snr_form(self, rng):
        for _ in range(300):
            p = float(10 ** rng.uniform(-2, 2))
            h = tuple(rng.normal(size=2))
            a = tuple(int(c) for c in rng.choice([-3, -2, -1, 1, 2, 3], size=2))
            star = alpha_opt_fading(p, h, a)
            lhs = 0.5 * log2_pos(p / sigma_eq_fading(star, p, h, a))
            assert lhs == pytest.approx(rate_fading(p, h, a), abs=1e-12)

    def test_alpha_matches_grid_search(self, rng):
        for _ in range(30):
            p = float(10 ** rng.uniform(-1, 1.5))
            h = tuple(rng.normal(size=2))
            a = tuple(int(c) for c in rng.choice([-3, -2, -1, 1, 2, 3], size=2))
            bound = 1 + np.sqrt(p * (a[0] ** 2 + a[1] ** 2))
            star = refine_argmin(
                lambda al: al ** 2 + p * ((al * h[0] - a[0]) ** 2 + (al * h[1] - a[1]) ** 2),
                -bound, bound)
            assert alpha_opt_fading(p, h, a) == pytest.approx(star, abs=1e-6)


class TestGap:
    def test_reference_values(self):
        assert miso_capacity(2, 1.0) == pytest.approx(1.160964047443681, abs=1e-12)
        assert capacity_gap(2, 1.0) == pytest.approx(0.868482797083103, abs=1e-9)
        assert capacity_gap(2, 1.0) <= 1.0

    def test_bounds_on_grid(self):
        for n in range(2, 21):
            bound = gap_bound(n)
            assert bound == (1.0 if n % 2 == 0 else 2.0)
            for p in np.logspace(-2, 2, 50):
                assert capacity_gap(n, p) <= bound

    def test_bound_ratio_below_four(self):
        for n in range(2, 21):
            for p in np.logspace(-2, 2, 50):
                assert gap_bound_ratio(n, p) < 4.0


class TestLog2Pos:
    def test_clamp(self):
        assert log2_pos(0.5) == 0.0
        assert log2_pos(1.0) == 0.0
        assert log2_pos(2.0) == 1.0

    def test_rejects_nonpositive(self):
        with pytest.raises(ValueError):
            log2_pos(0.0)

    @given(st.floats(min_value=1e-6, max_value=1e6))
    def test_never_negative(self, x):
        assert log2_pos(x) >= 0.0
