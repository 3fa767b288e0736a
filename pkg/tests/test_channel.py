"""MAC output, noise statistics, and server-subset aggregation."""

import numpy as np
import pytest

from lattice_pir.channel import (ChannelRealization, SubsetPartition,
                                 default_partition, effective_gains, mac_output)


class TestMacOutput:
    def test_noiseless_zero_inputs(self):
        ch = ChannelRealization((1.0, 1.0, 1.0))
        y = mac_output([np.zeros(4)] * 3, ch, None)
        assert np.all(y == 0.0)

    def test_alternating_groups_sum(self, rng):
        # four unit-gain servers sending (x1, x2, x1, x2) yield 2 x1 + 2 x2
        x1, x2 = rng.uniform(-1, 1, 5), rng.uniform(-1, 1, 5)
        ch = ChannelRealization((1.0,) * 4)
        y = mac_output([x1, x2, x1, x2], ch, None)
        np.testing.assert_allclose(y, 2 * x1 + 2 * x2, atol=1e-12)

    def test_linearity(self, rng):
        ch = ChannelRealization((0.5, -1.2))
        a, b = rng.uniform(-1, 1, 3), rng.uniform(-1, 1, 3)
        y = mac_output([a + 2 * b, b], ch, None)
        np.testing.assert_allclose(
            y, mac_output([a, b], ch, None) + mac_output([2 * b, np.zeros(3)], ch, None),
            atol=1e-12)

    def test_noise_variance_is_unit(self, rng):
        ch = ChannelRealization((1.0, 1.0))
        xs = [rng.uniform(-1, 1, 100_000), rng.uniform(-1, 1, 100_000)]
        z = mac_output(xs, ch, rng) - (xs[0] + xs[1])
        assert np.var(z) == pytest.approx(1.0, rel=0.02)
        assert abs(np.mean(z)) < 0.02

    def test_noise_streams_uncorrelated(self):
        ch = ChannelRealization((1.0, 1.0))
        zeros = [np.zeros(100_000)] * 2
        z1 = mac_output(zeros, ch, np.random.default_rng([9, 0]))
        z2 = mac_output(zeros, ch, np.random.default_rng([9, 1]))
        assert abs(np.corrcoef(z1, z2)[0, 1]) < 0.01

    def test_signal_count_mismatch(self):
        ch = ChannelRealization((1.0, 1.0, 1.0))
        with pytest.raises(ValueError):
            mac_output([np.zeros(2)] * 2, ch, None)

    def test_dimension_mismatch(self):
        ch = ChannelRealization((1.0, 1.0))
        with pytest.raises(ValueError):
            mac_output([np.zeros(2), np.zeros(3)], ch, None)


class TestChannelRealization:
    def test_needs_two_servers(self):
        with pytest.raises(ValueError):
            ChannelRealization((1.0,))

    def test_noise_variance_pinned(self):
        with pytest.raises(ValueError):
            ChannelRealization((1.0, 1.0), noise_variance=2.0)

    def test_gains_must_be_finite(self):
        with pytest.raises(ValueError):
            ChannelRealization((1.0, float("inf")))


class TestPartition:
    def test_effective_gains_trivial(self):
        ch = ChannelRealization((1.0, 1.0))
        h = effective_gains(SubsetPartition((1,), (2,)), ch)
        assert tuple(h) == (1.0, 1.0)

    def test_effective_gains_sums(self):
        ch = ChannelRealization((0.5, 2.0, 1.0))
        h = effective_gains(SubsetPartition((1, 2), (3,)), ch)
        assert tuple(h) == (2.5, 1.0)

    def test_overlap_rejected(self):
        with pytest.raises(ValueError):
            SubsetPartition((1, 2), (2, 3))

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            SubsetPartition((), (1,))

    def test_out_of_range_rejected(self):
        ch = ChannelRealization((1.0, 1.0))
        with pytest.raises(ValueError):
            effective_gains(SubsetPartition((1,), (5,)), ch)

    def test_default_partition(self):
        part = default_partition(5)
        assert part.first == (1, 3) and part.second == (2, 4)
        part = default_partition(4)
        assert part.first == (1, 3) and part.second == (2, 4)
