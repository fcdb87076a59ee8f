import math

import numpy as np
import pytest

from did import (
    admissible_modes,
    apply_warp,
    from_array,
    random_warp_field,
    rmse,
    rotate,
)
from conftest import random_signal


class TestAdmissibleModes:
    def test_cutoff_two_has_single_mode(self):
        assert admissible_modes(2) == [(1, 1)]

    def test_matches_brute_force(self):
        for c in (1, 2, 3, 4, 5):
            brute = [
                (m, n)
                for m in range(1, 10)
                for n in range(1, 10)
                if m * m + n * n <= c * c
            ]
            assert admissible_modes(c) == brute


class TestRandomWarpField:
    def test_boundary_exactly_zero(self):
        for seed in range(20):
            field = random_warp_field(9, 13, temperature=10.0, cutoff=3, seed=seed)
            for d in (field.dx, field.dy):
                assert np.all(d[0, :] == 0.0)
                assert np.all(d[-1, :] == 0.0)
                assert np.all(d[:, 0] == 0.0)
                assert np.all(d[:, -1] == 0.0)

    def test_small_temperature_bound(self):
        # statistical envelope from the coefficient distribution
        t, w = 1e-6, 16
        for seed in range(100):
            field = random_warp_field(16, w, temperature=t, seed=seed)
            peak = max(np.abs(field.dx).max(), np.abs(field.dy).max())
            assert peak <= 10.0 * math.sqrt(t) * w

    def test_seed_deterministic(self):
        a = random_warp_field(8, 8, temperature=0.1, seed=42)
        b = random_warp_field(8, 8, temperature=0.1, seed=42)
        assert np.array_equal(a.dx, b.dx) and np.array_equal(a.dy, b.dy)
        c = random_warp_field(8, 8, temperature=0.1, seed=43)
        assert not np.array_equal(a.dx, c.dx)

    def test_sqrt_temperature_scaling(self):
        # mean max-displacement ratio between T=1e-2 and T=1e-4 is 10 +- 30%
        peaks = {t: [] for t in (1e-4, 1e-2)}
        for t in peaks:
            for seed in range(60):
                field = random_warp_field(16, 16, temperature=t, seed=seed)
                peaks[t].append(max(np.abs(field.dx).max(), np.abs(field.dy).max()))
        ratio = np.mean(peaks[1e-2]) / np.mean(peaks[1e-4])
        assert 7.0 <= ratio <= 13.0

    def test_validation(self):
        with pytest.raises(ValueError):
            random_warp_field(1, 8, temperature=0.1)
        with pytest.raises(ValueError):
            random_warp_field(8, 8, temperature=0.0)
        with pytest.raises(ValueError):
            random_warp_field(8, 8, temperature=0.1, cutoff=0)


class TestApplyWarp:
    def test_zero_field_is_identity(self):
        sig = random_signal(6, 7, seed=0)
        field = random_warp_field(6, 7, temperature=1e-12, seed=0)
        zero = type(field)(
            dx=np.zeros((6, 7)), dy=np.zeros((6, 7)),
            temperature=field.temperature, cutoff=field.cutoff,
        )
        out = apply_warp(sig, zero)
        assert np.array_equal(out.values, sig.values)

    def test_constant_image_unchanged(self):
        sig = from_array(np.full((8, 8, 3), 0.37))
        field = random_warp_field(8, 8, temperature=5.0, seed=1)
        out = apply_warp(sig, field)
        assert np.allclose(out.values, 0.37, atol=1e-12)

    def test_coords_and_volume_preserved(self):
        sig = random_signal(5, 5, seed=2)
        field = random_warp_field(5, 5, temperature=0.1, seed=2)
        out = apply_warp(sig, field)
        assert np.array_equal(out.coords, sig.coords)
        assert out.volume == sig.volume

    def test_shape_mismatch(self):
        sig = random_signal(5, 5)
        field = random_warp_field(6, 6, temperature=0.1, seed=0)
        with pytest.raises(ValueError, match="shape"):
            apply_warp(sig, field)

    def test_rmse_grows_with_temperature_on_average(self):
        sig = random_signal(16, 16, seed=3)
        means = []
        for t in (1e-3, 1e-1, 10.0):
            vals = []
            for seed in range(20):
                out = apply_warp(sig, random_warp_field(16, 16, temperature=t, seed=seed))
                vals.append(rmse(sig, out))
            means.append(np.mean(vals))
        assert means[0] > 0.0
        assert means[0] < means[1] < means[2]


class TestRotate:
    def test_angle_zero_identity(self):
        sig = random_signal(5, 5, seed=4)
        out = rotate(sig, 0.0)
        assert np.allclose(out.values, sig.values, atol=1e-12)

    def test_half_turn_twice_on_constant(self):
        sig = from_array(np.full((6, 6, 3), 0.25))
        out = rotate(rotate(sig, 180.0), 180.0)
        assert np.max(np.abs(out.values - sig.values)) <= 1e-6

    def test_quarter_turn_permutes_2x2(self):
        # hand-enumerated: out[i][j] = in[j][1-i] for a quarter turn
        vals = np.array([[[1.0], [2.0]], [[3.0], [4.0]]])
        sig = from_array(vals)
        out = rotate(sig, 90.0).values_grid()[:, :, 0]
        assert np.allclose(out, [[2.0, 4.0], [1.0, 3.0]], atol=1e-12)

    def test_four_quarter_turns_identity(self):
        sig = random_signal(8, 8, seed=5)
        out = sig
        for _ in range(4):
            out = rotate(out, 90.0)
        assert np.allclose(out.values, sig.values, atol=1e-9)

    def test_non_square_rejected(self):
        with pytest.raises(ValueError, match="square"):
            rotate(random_signal(4, 5), 90.0)


class TestRmse:
    def test_identical_is_zero(self):
        sig = random_signal(4, 4, seed=6)
        assert rmse(sig, sig) == 0.0

    def test_zeros_vs_ones(self):
        f = from_array(np.zeros((3, 3, 3)))
        g = from_array(np.ones((3, 3, 3)))
        assert rmse(f, g) == 1.0

    def test_single_pixel_two_channels(self):
        f = from_array(np.array([[[0.0, 0.0]]]))
        g = from_array(np.array([[[3.0, 4.0]]]))
        assert rmse(f, g) == pytest.approx(math.sqrt(25.0 / 2.0))

    def test_shape_mismatch(self):
        with pytest.raises(ValueError, match="shapes differ"):
            rmse(random_signal(3, 3), random_signal(3, 4))


class TestTemperatureRegimes:
    def test_large_temperature_folds_the_grid(self):
        # destructive regime: some column step of the pixel map reverses
        folded = 0
        for seed in range(20):
            field = random_warp_field(32, 32, temperature=10.0, seed=seed)
            mapped = np.arange(32)[None, :] + field.dx
            if np.any(np.diff(mapped, axis=1) < 0.0):
                folded += 1
        assert folded >= 15

    def test_small_temperature_stays_injective(self):
        for seed in range(20):
            field = random_warp_field(32, 32, temperature=1e-3, seed=seed)
            mapped_cols = np.arange(32)[None, :] + field.dx
            mapped_rows = np.arange(32)[:, None] + field.dy
            assert np.all(np.diff(mapped_cols, axis=1) > 0.0)
            assert np.all(np.diff(mapped_rows, axis=0) > 0.0)
