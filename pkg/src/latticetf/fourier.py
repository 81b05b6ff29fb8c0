"""Fourier transforms between Z^n and T^n for finitely supported signals.

Conventions:

    (F_Z f)(w)  = sum_k f(k) e^{-2 pi i k.w}          (a trig polynomial)
    (F_T h)(k)  = integral_T h(w) e^{+2 pi i k.w} dw  (Fourier coefficient)

For a signal supported in [-N, N]^n the transform F_Z f has per-axis
frequencies in [-N, N], so an equispaced grid with M >= 2N + 1 nodes per
axis represents it exactly, and M >= 4N + 1 integrates |F_Z f|^2 exactly.
The package default rounds 4N + 2 up to a power of two.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .core import LatticeSignal, SupportBox, TorusGrid, as_multi_index
from .errors import GridResolutionError, InputError


def default_grid_points(half_width: int) -> int:
    """Smallest power of two >= 4 N + 2.

    Products of two trig polynomials of per-axis bandwidth 2N then
    integrate exactly, which covers every L^2 identity used downstream.
    """
    target = 4 * half_width + 2
    points = 1
    while points < target:
        points *= 2
    return points


@dataclass(frozen=True, eq=False)
class TorusFunctionSamples:
    """Samples of a function on T^n over an equispaced grid (FFT order)."""

    grid: TorusGrid
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=np.complex128)
        if vals.shape != self.grid.shape:
            raise InputError(
                f"torus samples have shape {vals.shape}, grid requires "
                f"{self.grid.shape}")
        vals = vals.copy()
        vals.flags.writeable = False
        object.__setattr__(self, "values", vals)

    def norm(self) -> float:
        """L^2(T^n) norm by the grid quadrature rule."""
        return float(np.sqrt(self.grid.weight) * np.linalg.norm(self.values))


def _embed_flat_positions(box: SupportBox, points: int) -> np.ndarray:
    """Flat grid positions of the box indices reduced mod M (C order)."""
    coords = np.mod(box.index_array(), points)
    return np.ravel_multi_index(coords.T, (points,) * box.dimension)


def fourier_lattice_to_torus(signal: LatticeSignal, grid: TorusGrid,
                             method: str = "fft") -> TorusFunctionSamples:
    """Sample F_Z f on the grid nodes.

    The grid must satisfy M >= 2N + 1 so the polynomial is represented
    without aliasing.  ``method`` selects the FFT path or an explicit
    direct sum; the two agree to machine precision and the direct path
    exists so each can certify the other.
    """
    if grid.dimension != signal.dimension:
        raise InputError("signal and grid dimension mismatch")
    n_half = signal.box.half_width
    if grid.points_per_axis < 2 * n_half + 1:
        raise GridResolutionError(
            f"grid with M = {grid.points_per_axis} nodes per axis is below "
            f"the Nyquist requirement M >= {2 * n_half + 1} for half-width "
            f"{n_half}")
    if method == "fft":
        buf = np.zeros(grid.shape, dtype=np.complex128).reshape(-1)
        np.add.at(buf, _embed_flat_positions(signal.box, grid.points_per_axis),
                  signal.values.reshape(-1))
        vals = np.fft.fftn(buf.reshape(grid.shape))
        return TorusFunctionSamples(grid, vals)
    if method == "direct":
        # contract one axis at a time with the (M, 2N+1) phase matrix
        points = grid.points_per_axis
        k_axis = np.arange(-n_half, n_half + 1)
        phases = np.exp(-2j * np.pi * np.outer(np.arange(points), k_axis)
                        / points)
        vals = signal.values
        for _ in range(signal.dimension):
            # vals axes: (done..., k_this, k_rest...) -> rotate to the back
            vals = np.tensordot(vals, phases, axes=([0], [1]))
        return TorusFunctionSamples(grid, np.ascontiguousarray(vals))
    raise InputError(f"unknown method {method!r}, expected 'fft' or 'direct'")


def fourier_torus_to_lattice(samples: TorusFunctionSamples, index
                             ) -> complex:
    """Fourier coefficient (F_T h)(k) by grid quadrature.

    Exact whenever the sampled function is a trig polynomial with
    per-axis frequencies q satisfying |q - k| < M for every aliasing
    candidate, in particular for bandwidth < M/2 and |k| < M/2.
    """
    grid = samples.grid
    idx = as_multi_index(index, grid.dimension)
    points = grid.points_per_axis
    vals = samples.values
    for k_i in idx:
        phase = np.exp(2j * np.pi * np.arange(points) * k_i / points) / points
        vals = np.tensordot(phase, vals, axes=([0], [0]))
    return complex(vals)


def plancherel_lattice(signal: LatticeSignal, grid: TorusGrid | None = None
                       ) -> tuple[float, float]:
    """Both sides of ||F_Z f||_{L^2(T^n)} = ||f||_{l^2(Z^n)}.

    Needs M >= 4N + 1 so the squared transform integrates exactly; the
    default grid satisfies this.
    """
    n_half = signal.box.half_width
    if grid is None:
        grid = TorusGrid(signal.dimension, default_grid_points(n_half))
    if grid.points_per_axis < 4 * n_half + 1:
        raise GridResolutionError(
            f"grid with M = {grid.points_per_axis} nodes per axis "
            f"under-resolves |F f|^2; need M >= {4 * n_half + 1}")
    transform = fourier_lattice_to_torus(signal, grid)
    return transform.norm(), signal.norm()


def resample_trig_rows(values: np.ndarray, torus_axes: int, old_points: int,
                       new_points: int) -> np.ndarray:
    """Evaluate per-row trig polynomials on a finer grid.

    ``values`` holds samples over the trailing ``torus_axes`` axes (M nodes
    each) of functions whose per-axis bandwidth is < M/2; those samples
    determine the polynomials, whose coefficients are moved to the finer
    grid by zero padding.  Used to evaluate smooth integrands (moments,
    entropies) far below their quadrature error floor.
    """
    if new_points == old_points:
        return values
    if new_points < old_points:
        raise InputError("resampling target must not be coarser")
    if new_points % 2 or old_points % 2:
        raise InputError("resampling expects even grid sizes")
    axes = tuple(range(values.ndim - torus_axes, values.ndim))
    coeffs = np.fft.fftn(values, axes=axes) / (old_points ** torus_axes)
    for axis in axes:
        shape = list(coeffs.shape)
        shape[axis] = new_points - old_points
        split = old_points // 2  # frequencies 0..M/2-1, then negative part
        head = np.take(coeffs, range(split), axis=axis)
        tail = np.take(coeffs, range(split, old_points), axis=axis)
        coeffs = np.concatenate([head, np.zeros(shape, dtype=np.complex128),
                                 tail], axis=axis)
    return np.fft.ifftn(coeffs, axes=axes) * (new_points ** torus_axes)
