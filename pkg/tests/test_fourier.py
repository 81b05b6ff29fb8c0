"""Lattice-to-torus transform: FFT path against a literal-sum oracle."""

import numpy as np
import pytest

from latticetf import (GridResolutionError, InputError, LatticeSignal,
                       SupportBox, TorusGrid, default_grid_points,
                       fourier_lattice_to_torus, fourier_torus_to_lattice,
                       plancherel_lattice, resample_trig_rows)

RNG = np.random.default_rng(42)


def oracle_transform(signal, grid):
    """sum_k f(k) e^{-2 pi i w k} evaluated naively at every node."""
    n = signal.dimension
    points = grid.points_per_axis
    out = np.zeros(grid.shape, dtype=np.complex128)
    fractions = [j / points for j in range(points)]
    for node in np.ndindex(grid.shape):
        w = [fractions[j] for j in node]
        total = 0.0 + 0.0j
        for index in signal.box.indices():
            phase = sum(wi * ki for wi, ki in zip(w, index))
            total += signal.value_at(index) * np.exp(-2j * np.pi * phase)
        out[node] = total
    return out


class TestDefaultGridPoints:
    def test_smallest_power_of_two(self):
        assert default_grid_points(0) == 2
        assert default_grid_points(1) == 8
        assert default_grid_points(3) == 16
        assert default_grid_points(6) == 32

    def test_meets_exactness_threshold(self):
        for n in range(8):
            assert default_grid_points(n) >= 4 * n + 2


class TestForwardTransform:
    @pytest.mark.parametrize("dimension,half_width,points", [
        (1, 3, 16), (1, 2, 11), (2, 2, 8)])
    def test_matches_oracle(self, dimension, half_width, points):
        signal = LatticeSignal.random_complex(
            RNG, SupportBox(dimension, half_width))
        grid = TorusGrid(dimension, points)
        fast = fourier_lattice_to_torus(signal, grid)
        want = oracle_transform(signal, grid)
        assert np.max(np.abs(fast.values - want)) < 1e-12 * signal.norm()

    def test_fft_and_direct_paths_agree(self):
        signal = LatticeSignal.random_complex(RNG, SupportBox(1, 4))
        grid = TorusGrid(1, 32)
        fast = fourier_lattice_to_torus(signal, grid, method="fft")
        slow = fourier_lattice_to_torus(signal, grid, method="direct")
        assert np.max(np.abs(fast.values - slow.values)) < 1e-12

    def test_rejects_sub_nyquist_grid(self):
        signal = LatticeSignal.random_complex(RNG, SupportBox(1, 4))
        with pytest.raises(GridResolutionError):
            fourier_lattice_to_torus(signal, TorusGrid(1, 8))


class TestInverseQuadrature:
    def test_recovers_coefficients(self):
        signal = LatticeSignal.random_complex(RNG, SupportBox(1, 3))
        grid = TorusGrid(1, 16)
        samples = fourier_lattice_to_torus(signal, grid)
        for index in signal.box.indices():
            got = fourier_torus_to_lattice(samples, index)
            assert abs(got - signal.value_at(index)) < 1e-13

    def test_plancherel_exact_at_threshold(self):
        # M = 4N + 1 equispaced nodes integrate |f-hat|^2 exactly
        signal = LatticeSignal.random_complex(RNG, SupportBox(1, 3))
        grid = TorusGrid(1, 13)
        lhs, rhs = plancherel_lattice(signal, grid)
        assert abs(lhs - rhs) < 1e-13 * rhs

    def test_plancherel_rejects_coarse_grid(self):
        signal = LatticeSignal.random_complex(RNG, SupportBox(1, 3))
        with pytest.raises(GridResolutionError):
            plancherel_lattice(signal, TorusGrid(1, 12))


class TestResampleTrigRows:
    def test_refined_values_interpolate(self):
        # rows are trig polynomials; zero-padding must reproduce their
        # values at the original nodes and evaluate exactly in between
        signal = LatticeSignal.random_complex(RNG, SupportBox(1, 2))
        coarse = TorusGrid(1, 16)
        fine = TorusGrid(1, 64)
        low = fourier_lattice_to_torus(signal, coarse).values
        refined = resample_trig_rows(low[np.newaxis, :], 1, 16, 64)[0]
        want = fourier_lattice_to_torus(signal, fine).values
        assert np.max(np.abs(refined - want)) < 1e-12

    def test_identity_when_sizes_match(self):
        values = (RNG.standard_normal((3, 8))
                  + 1j * RNG.standard_normal((3, 8)))
        out = resample_trig_rows(values, 1, 8, 8)
        assert np.max(np.abs(out - values)) < 1e-14

    def test_refuses_coarser_target(self):
        values = np.zeros((1, 8), dtype=np.complex128)
        with pytest.raises(InputError):
            resample_trig_rows(values, 1, 8, 4)

    def test_two_dimensional_rows(self):
        signal = LatticeSignal.random_complex(RNG, SupportBox(2, 1))
        low = fourier_lattice_to_torus(signal, TorusGrid(2, 8)).values
        refined = resample_trig_rows(low[np.newaxis, ...], 2, 8, 16)[0]
        want = fourier_lattice_to_torus(signal, TorusGrid(2, 16)).values
        assert np.max(np.abs(refined - want)) < 1e-12
