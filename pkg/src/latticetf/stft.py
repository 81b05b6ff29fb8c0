"""The short-time Fourier transform on Z^n x T^n.

For a signal f and window g, both finitely supported,

    V_g f(m, w) = <f, M_w T_m g> = sum_k f(k) conj(g(k - m)) e^{-2 pi i w.k}

with T_m g = g(. - m) and M_w g = e^{2 pi i w .} g.  If f lives in
[-N_f, N_f]^n and g in [-N_g, N_g]^n then V_g f vanishes for m outside
[-(N_f + N_g), N_f + N_g]^n and each row V_g f(m, .) is a trig polynomial
of per-axis bandwidth at most N_f.  A plan fixes those truncation boxes
and a torus grid large enough that the L^2 identities (Plancherel,
orthogonality, inversion, reproducing formula) hold exactly in floating
point; all transforms below are evaluated by embedding the row products
into the grid and running batched FFTs, which equals the literal sum.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .core import (LatticeSignal, PhaseSpaceField, SupportBox, TorusGrid,
                   as_multi_index)
from .errors import (GridResolutionError, InputError,
                     NearOrthogonalWindowError, ZeroWindowError)
from .fourier import default_grid_points

__all__ = [
    "StftPlan", "translate", "modulate", "stft", "stft_adjoint", "invert",
    "reproducing_kernel", "kernel_field", "stft_direct",
]


@dataclass(frozen=True)
class StftPlan:
    """Truncation boxes and torus grid for one transform geometry.

    The output lattice box has half-width N_f + N_g (the Minkowski sum of
    the supports), which captures every non-zero row.  The default grid
    takes M as the smallest power of two >= 4 max(N_f, N_g) + 2 so that
    products of any two transforms sharing the plan, and the reproducing
    kernel pairings, integrate exactly; a caller-supplied grid must still
    satisfy M >= 4 N_f + 2.
    """

    signal_box: SupportBox
    window_box: SupportBox
    grid: TorusGrid = None

    def __post_init__(self):
        if self.window_box.dimension != self.signal_box.dimension:
            raise InputError("signal and window boxes must share dimension")
        if self.grid is None:
            points = default_grid_points(max(self.signal_box.half_width,
                                             self.window_box.half_width))
            object.__setattr__(
                self, "grid", TorusGrid(self.signal_box.dimension, points))
        if self.grid.dimension != self.signal_box.dimension:
            raise InputError("plan grid dimension mismatch")
        if self.grid.points_per_axis < 4 * self.signal_box.half_width + 2:
            raise GridResolutionError(
                f"plan grid M = {self.grid.points_per_axis} is too coarse; "
                f"need M >= {4 * self.signal_box.half_width + 2} so that "
                "squared transforms integrate exactly")

    @classmethod
    def for_half_widths(cls, dimension: int, signal_half_width: int,
                        window_half_width: int | None = None,
                        grid_points: int | None = None) -> "StftPlan":
        if window_half_width is None:
            window_half_width = signal_half_width
        grid = None
        if grid_points:
            grid = TorusGrid(dimension, grid_points)
        return cls(SupportBox(dimension, signal_half_width),
                   SupportBox(dimension, window_half_width), grid)

    @property
    def dimension(self) -> int:
        return self.signal_box.dimension

    @property
    def output_box(self) -> SupportBox:
        return SupportBox(self.dimension,
                          self.signal_box.half_width
                          + self.window_box.half_width)


# ---------------------------------------------------------------------------
# elementary operators

def translate(signal: LatticeSignal, shift) -> LatticeSignal:
    """T_k f = f(. - k), with the support box grown to fit the shift."""
    shift = as_multi_index(shift, signal.dimension)
    grow = max((abs(v) for v in shift), default=0)
    box = SupportBox(signal.dimension, signal.box.half_width + grow)
    out = np.zeros(box.shape, dtype=np.complex128)
    width = 2 * signal.box.half_width + 1
    lo = [box.half_width + s - signal.box.half_width for s in shift]
    out[tuple(slice(l, l + width) for l in lo)] = signal.values
    return LatticeSignal(box, out)


def modulate(signal: LatticeSignal, frequency) -> LatticeSignal:
    """M_w f = e^{2 pi i w.k} f(k); w may be any real vector (period 1)."""
    freq = tuple(float(v) for v in np.atleast_1d(frequency))
    if len(freq) != signal.dimension:
        raise InputError(
            f"frequency arity {len(freq)} does not match dimension "
            f"{signal.dimension}")
    n_half = signal.box.half_width
    k_axis = np.arange(-n_half, n_half + 1)
    vals = signal.values
    for axis, w in enumerate(freq):
        shape = [1] * signal.dimension
        shape[axis] = 2 * n_half + 1
        vals = vals * np.exp(2j * np.pi * w * k_axis).reshape(shape)
    return LatticeSignal(signal.box, vals)


# ---------------------------------------------------------------------------
# cached index tables for the batched transform

@lru_cache(maxsize=32)
def _gather_tables(dimension: int, rows_half: int, cols_half: int,
                   window_half: int, points: int):
    """Index arrays shared by every transform of one geometry."""
    rows = SupportBox(dimension, rows_half).index_array()
    cols = SupportBox(dimension, cols_half).index_array()
    offsets = cols[None, :, :] - rows[:, None, :]          # (R, C, n)
    inside = np.all(np.abs(offsets) <= window_half, axis=2)
    clipped = np.clip(offsets + window_half, 0, 2 * window_half)
    window_flat = np.ravel_multi_index(
        np.moveaxis(clipped, 2, 0), (2 * window_half + 1,) * dimension)
    grid_flat = np.ravel_multi_index(np.mod(cols, points).T,
                                     (points,) * dimension)
    collides = bool(np.unique(grid_flat).size < grid_flat.size)
    for arr in (inside, window_flat, grid_flat):
        arr.flags.writeable = False
    return inside, window_flat, grid_flat, collides


def _stft_table(f_values: np.ndarray, f_box: SupportBox,
                g_values: np.ndarray, g_box: SupportBox,
                rows_box: SupportBox, grid: TorusGrid) -> np.ndarray:
    """Rows of V_g f over rows_box x grid, by embedded batched FFT."""
    inside, window_flat, grid_flat, collides = _gather_tables(
        f_box.dimension, rows_box.half_width, f_box.half_width,
        g_box.half_width, grid.points_per_axis)
    gathered = g_values.reshape(-1)[window_flat]
    products = np.where(inside, np.conj(gathered),
                        0.0) * f_values.reshape(-1)[None, :]
    n_rows = rows_box.size
    buf = np.zeros((n_rows, grid.size), dtype=np.complex128)
    if collides:
        # two support indices land on the same node mod M; their phase
        # factors agree there, so summing keeps the samples exact
        np.add.at(buf, (np.arange(n_rows)[:, None], grid_flat[None, :]),
                  products)
    else:
        buf[:, grid_flat] = products
    vals = np.fft.fftn(buf.reshape((n_rows,) + grid.shape),
                       axes=tuple(range(1, 1 + grid.dimension)))
    return vals.reshape(rows_box.shape + grid.shape)


def _require_window(window: LatticeSignal):
    if window.is_zero():
        raise ZeroWindowError("window must not be identically zero")


# ---------------------------------------------------------------------------
# the transform, its adjoint, and inversion

def stft(signal: LatticeSignal, window: LatticeSignal, plan: StftPlan
         ) -> PhaseSpaceField:
    """V_g f sampled over the plan's output box and grid."""
    _require_window(window)
    if not plan.signal_box.contains_box(signal.box):
        raise InputError("signal support exceeds the plan's signal box")
    if not plan.window_box.contains_box(window.box):
        raise InputError("window support exceeds the plan's window box")
    f_emb = signal.embed(plan.signal_box)
    g_emb = window.embed(plan.window_box)
    vals = _stft_table(f_emb.values, f_emb.box, g_emb.values, g_emb.box,
                       plan.output_box, plan.grid)
    return PhaseSpaceField(plan.output_box, plan.grid, vals)


def stft_direct(signal: LatticeSignal, window: LatticeSignal,
                lattice_point, frequency) -> complex:
    """V_g f(m, w) by the literal sum; w need not be a grid node."""
    _require_window(window)
    m = as_multi_index(lattice_point, signal.dimension)
    shifted = translate(window, m)
    freq = tuple(float(v) for v in np.atleast_1d(frequency))
    total = 0.0 + 0.0j
    for k in signal.box.indices():
        gv = shifted.value_at(k)
        if gv == 0:
            continue
        phase = np.exp(-2j * np.pi * sum(w * ki for w, ki in zip(freq, k)))
        total += signal.value_at(k) * np.conj(gv) * phase
    return complex(total)


def stft_adjoint(field: PhaseSpaceField, window: LatticeSignal,
                 plan: StftPlan) -> LatticeSignal:
    """The adjoint V_g^* F(k) = sum_m integral F(m, w) e^{2 pi i w.k} g(k - m) dw.

    The torus integral is the plan grid's quadrature sum, making this the
    exact adjoint of ``stft`` with respect to the discrete inner products;
    the output box is the Minkowski sum of the field box and the window box.
    """
    _require_window(window)
    if field.box != plan.output_box or field.grid != plan.grid:
        raise InputError("field geometry does not match the plan")
    grid = plan.grid
    n = field.dimension
    rows_box = field.box
    coeff = np.fft.ifftn(field.values.reshape((rows_box.size,) + grid.shape),
                         axes=tuple(range(1, 1 + n)))
    coeff = coeff.reshape(rows_box.size, grid.size)
    out_box = SupportBox(n, rows_box.half_width + window.box.half_width)
    out_coords = out_box.index_array()                      # (K, n)
    grid_pos = np.ravel_multi_index(
        np.mod(out_coords, grid.points_per_axis).T, grid.shape)
    out = np.zeros(out_box.size, dtype=np.complex128)
    g_flat = window.values.reshape(-1)
    g_coords = window.box.index_array()
    rows_half = rows_box.half_width
    strides = np.array([(2 * rows_half + 1) ** (n - 1 - i) for i in range(n)])
    for d_idx in range(g_coords.shape[0]):
        g_val = g_flat[d_idx]
        if g_val == 0:
            continue
        m_coords = out_coords - g_coords[d_idx]
        valid = np.all(np.abs(m_coords) <= rows_half, axis=1)
        row_flat = (m_coords[valid] + rows_half) @ strides
        out[valid] += g_val * coeff[row_flat, grid_pos[valid]]
    return LatticeSignal(out_box, out.reshape(out_box.shape))


def invert(field: PhaseSpaceField, window: LatticeSignal,
           synthesis: LatticeSignal | None = None,
           plan: StftPlan | None = None) -> LatticeSignal:
    """Reconstruct f from V_g f:  f = V_gamma^* (V_g f) / <gamma, g>.

    Any synthesis window gamma with <gamma, g> bounded away from zero
    works; the default is gamma = g.  The result is cropped back to the
    plan's signal box, on which the reconstruction is exact.
    """
    if plan is None:
        raise InputError("invert requires the plan used for the transform")
    gamma = window if synthesis is None else synthesis
    pairing = gamma.inner(window)
    floor = 1e-10 * gamma.norm() * window.norm()
    if abs(pairing) <= floor:
        raise NearOrthogonalWindowError(
            "synthesis window is numerically orthogonal to the analysis "
            f"window (|<gamma, g>| = {abs(pairing):.3e} <= {floor:.3e})")
    recovered = stft_adjoint(field, gamma, plan)
    return recovered.crop(plan.signal_box).scaled(1.0 / pairing)


# ---------------------------------------------------------------------------
# reproducing kernel

def reproducing_kernel(window: LatticeSignal, at, eval_at) -> complex:
    """K_g((m', w'); (m, w)) = V_g(M_w T_m g)(m', w') / ||g||^2.

    ``at`` = (m, w) indexes the kernel, ``eval_at`` = (m', w') the
    evaluation point; neither frequency needs to lie on a grid.  The
    value is <M_w T_m g, M_{w'} T_{m'} g> / ||g||^2, so |K| <= 1 by
    Cauchy-Schwarz.
    """
    _require_window(window)
    m, w = at
    m_eval, w_eval = eval_at
    atom = modulate(translate(window, m), w)
    probe = modulate(translate(window, m_eval), w_eval)
    return atom.inner(probe) / (window.norm() ** 2)


def kernel_field(window: LatticeSignal, at, plan: StftPlan
                 ) -> PhaseSpaceField:
    """K_g(. ; (m, w)) sampled over the plan's output box and grid."""
    _require_window(window)
    m, w = at
    g_emb = window.embed(plan.window_box)
    atom = modulate(translate(g_emb, m), w)
    vals = _stft_table(atom.values, atom.box, g_emb.values, g_emb.box,
                       plan.output_box, plan.grid)
    return PhaseSpaceField(plan.output_box, plan.grid,
                           vals / (window.norm() ** 2))
