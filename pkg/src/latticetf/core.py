"""Value types for signals on Z^n and for sampled functions on T^n.

Phase space here is Z^n x T^n carrying the product of counting measure on
the lattice and normalized Lebesgue measure on the torus.  Every signal is
finitely supported inside a symmetric box [-N, N]^n.  Finite support makes
the transforms downstream trigonometric polynomials, so equispaced torus
grids of sufficient size integrate all the L^2 quantities exactly; the
grid types below fix the conventions (node order, representatives, weight)
that the rest of the package relies on.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .errors import InputError

#: A lattice point is a plain tuple of ints whose length is the dimension.
MultiIndex = tuple[int, ...]


def as_multi_index(value, dimension: int) -> MultiIndex:
    """Coerce ``value`` to a lattice point of the given dimension."""
    try:
        idx = tuple(int(v) for v in value)
    except TypeError:
        # scalar shorthand for dimension one
        idx = (int(value),)
    if len(idx) != dimension:
        raise InputError(
            f"lattice index {idx} has length {len(idx)}, expected {dimension}")
    return idx


def index_norm_sq(index: MultiIndex) -> int:
    """|m|^2 in exact integer arithmetic."""
    return sum(int(v) * int(v) for v in index)


@dataclass(frozen=True)
class SupportBox:
    """The symmetric index box [-half_width, half_width]^dimension."""

    dimension: int
    half_width: int

    def __post_init__(self):
        if self.dimension < 1:
            raise InputError(f"dimension must be >= 1, got {self.dimension}")
        if self.half_width < 0:
            raise InputError(
                f"half_width must be >= 0, got {self.half_width}")

    @property
    def shape(self) -> tuple[int, ...]:
        return (2 * self.half_width + 1,) * self.dimension

    @property
    def size(self) -> int:
        return (2 * self.half_width + 1) ** self.dimension

    def contains(self, index) -> bool:
        idx = as_multi_index(index, self.dimension)
        return all(abs(v) <= self.half_width for v in idx)

    def contains_box(self, other: "SupportBox") -> bool:
        return (other.dimension == self.dimension
                and other.half_width <= self.half_width)

    def offset(self, index) -> tuple[int, ...]:
        """Array position of a lattice point (component-wise shift by N)."""
        idx = as_multi_index(index, self.dimension)
        if not all(abs(v) <= self.half_width for v in idx):
            raise InputError(f"index {idx} outside box of half-width "
                             f"{self.half_width}")
        return tuple(v + self.half_width for v in idx)

    def indices(self):
        """Iterate lattice points in C order (matches ``values.reshape(-1)``)."""
        rng = range(-self.half_width, self.half_width + 1)
        return itertools.product(rng, repeat=self.dimension)

    def index_array(self) -> np.ndarray:
        """All lattice points as an ``(size, dimension)`` int array, C order."""
        return _index_array(self.dimension, self.half_width)


@lru_cache(maxsize=64)
def _index_array(dimension: int, half_width: int) -> np.ndarray:
    shape = (2 * half_width + 1,) * dimension
    arr = np.indices(shape).reshape(dimension, -1).T - half_width
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True, eq=False)
class LatticeSignal:
    """A finitely supported signal on Z^n, stored over its support box.

    ``values[k + N]`` (per axis) holds the sample at lattice point k.
    Instances are immutable; all arithmetic returns new signals.
    """

    box: SupportBox
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=np.complex128)
        if vals.shape != self.box.shape:
            raise InputError(
                f"signal values have shape {vals.shape}, box requires "
                f"{self.box.shape}")
        vals = vals.copy()
        vals.flags.writeable = False
        object.__setattr__(self, "values", vals)

    # -- constructors -------------------------------------------------

    @classmethod
    def zeros(cls, box: SupportBox) -> "LatticeSignal":
        return cls(box, np.zeros(box.shape, dtype=np.complex128))

    @classmethod
    def delta(cls, dimension: int, at=None, half_width: int | None = None
              ) -> "LatticeSignal":
        """Unit impulse at ``at`` (default: the origin)."""
        if at is None:
            at = (0,) * dimension
        at = as_multi_index(at, dimension)
        if half_width is None:
            half_width = max((abs(v) for v in at), default=0)
        box = SupportBox(dimension, half_width)
        vals = np.zeros(box.shape, dtype=np.complex128)
        vals[box.offset(at)] = 1.0
        return cls(box, vals)

    @classmethod
    def from_entries(cls, dimension: int, half_width: int, entries
                     ) -> "LatticeSignal":
        """Build from an iterable of ``(index, value)`` pairs."""
        box = SupportBox(dimension, half_width)
        vals = np.zeros(box.shape, dtype=np.complex128)
        for index, value in entries:
            vals[box.offset(index)] = value
        return cls(box, vals)

    @classmethod
    def random_complex(cls, rng: np.random.Generator, box: SupportBox
                       ) -> "LatticeSignal":
        """Independent standard complex Gaussian samples on the box."""
        re = rng.standard_normal(box.shape)
        im = rng.standard_normal(box.shape)
        return cls(box, re + 1j * im)

    @classmethod
    def gaussian_sampled(cls, box: SupportBox, sigma: float) -> "LatticeSignal":
        """exp(-|k|^2 / (2 sigma^2)) sampled on the box (a real window)."""
        if sigma <= 0:
            raise InputError(f"gaussian width must be positive, got {sigma}")
        coords = box.index_array()
        norm_sq = np.sum(coords.astype(np.float64) ** 2, axis=1)
        vals = np.exp(-norm_sq / (2.0 * sigma * sigma))
        return cls(box, vals.reshape(box.shape).astype(np.complex128))

    # -- queries ------------------------------------------------------

    @property
    def dimension(self) -> int:
        return self.box.dimension

    def value_at(self, index) -> complex:
        idx = as_multi_index(index, self.dimension)
        if not self.box.contains(idx):
            return 0.0 + 0.0j
        return complex(self.values[self.box.offset(idx)])

    def norm(self) -> float:
        """l^2 norm."""
        return float(np.linalg.norm(self.values))

    def norm_l1(self) -> float:
        return float(np.sum(np.abs(self.values)))

    def inner(self, other: "LatticeSignal") -> complex:
        """<self, other> = sum_k self(k) conj(other(k))."""
        if other.dimension != self.dimension:
            raise InputError("dimension mismatch in inner product")
        n = min(self.box.half_width, other.box.half_width)
        common = SupportBox(self.dimension, n)
        a = self.crop(common).values.reshape(-1)
        b = other.crop(common).values.reshape(-1)
        return complex(np.vdot(b, a))  # vdot conjugates its first argument

    def is_zero(self, tol: float = 0.0) -> bool:
        return bool(np.all(np.abs(self.values) <= tol))

    # -- reshaping ----------------------------------------------------

    def embed(self, box: SupportBox) -> "LatticeSignal":
        """Copy into a larger box (identity if boxes match)."""
        if box.dimension != self.dimension:
            raise InputError("dimension mismatch in embed")
        if box.half_width < self.box.half_width:
            raise InputError("embed target box is smaller than the support")
        if box.half_width == self.box.half_width:
            return self
        out = np.zeros(box.shape, dtype=np.complex128)
        lo = box.half_width - self.box.half_width
        hi = lo + 2 * self.box.half_width + 1
        out[tuple(slice(lo, hi) for _ in range(self.dimension))] = self.values
        return LatticeSignal(box, out)

    def crop(self, box: SupportBox) -> "LatticeSignal":
        """Restrict to a smaller box, discarding values outside it."""
        if box.dimension != self.dimension:
            raise InputError("dimension mismatch in crop")
        if box.half_width >= self.box.half_width:
            return self.embed(box)
        lo = self.box.half_width - box.half_width
        hi = lo + 2 * box.half_width + 1
        sel = self.values[tuple(slice(lo, hi) for _ in range(self.dimension))]
        return LatticeSignal(box, sel)

    def scaled(self, factor: complex) -> "LatticeSignal":
        return LatticeSignal(self.box, self.values * factor)


@dataclass(frozen=True)
class TorusGrid:
    """Equispaced nodes w_j = j/M per axis on T^n, in FFT order.

    Node j has fraction j/M in [0, 1); its representative in [-1/2, 1/2)
    is j/M for j < M/2 and j/M - 1 otherwise.  The quadrature weight is
    M^{-n}.  This rule integrates exactly every trigonometric polynomial
    whose per-axis frequencies lie strictly inside (-M, M).
    """

    dimension: int
    points_per_axis: int

    def __post_init__(self):
        if self.dimension < 1:
            raise InputError(f"dimension must be >= 1, got {self.dimension}")
        if self.points_per_axis < 1:
            raise InputError("points_per_axis must be >= 1, got "
                             f"{self.points_per_axis}")

    @property
    def shape(self) -> tuple[int, ...]:
        return (self.points_per_axis,) * self.dimension

    @property
    def size(self) -> int:
        return self.points_per_axis ** self.dimension

    @property
    def weight(self) -> float:
        return float(self.points_per_axis) ** (-self.dimension)

    def node_fractions(self) -> np.ndarray:
        """Per-axis node values j/M in [0, 1), FFT order."""
        return np.arange(self.points_per_axis) / self.points_per_axis

    def node_representatives(self) -> np.ndarray:
        """Per-axis node values mapped to [-1/2, 1/2), FFT order."""
        fr = self.node_fractions()
        return fr - (fr >= 0.5)

    def node_tuple(self, flat_index: int) -> tuple[float, ...]:
        """Representative coordinates of one node given its flat C index."""
        reps = self.node_representatives()
        pos = np.unravel_index(flat_index, self.shape)
        return tuple(float(reps[p]) for p in pos)


@dataclass(frozen=True, eq=False)
class PhaseSpaceField:
    """Samples of a function on box x T^n over a torus grid.

    ``values`` has shape ``box.shape + grid.shape``: lattice axes first,
    torus axes last (so FFTs run over the trailing axes).
    """

    box: SupportBox
    grid: TorusGrid
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        if self.grid.dimension != self.box.dimension:
            raise InputError("lattice box and torus grid dimension mismatch")
        vals = np.asarray(self.values)
        if vals.shape != self.box.shape + self.grid.shape:
            raise InputError(
                f"field values have shape {vals.shape}, expected "
                f"{self.box.shape + self.grid.shape}")
        vals = vals.copy()
        vals.flags.writeable = False
        object.__setattr__(self, "values", vals)

    @property
    def dimension(self) -> int:
        return self.box.dimension

    def norm(self) -> float:
        """L^2 norm with respect to counting x normalized Lebesgue measure."""
        return float(np.sqrt(self.grid.weight) * np.linalg.norm(self.values))

    def norm_sq(self) -> float:
        v = self.values
        return float(self.grid.weight * np.sum((v * v.conjugate()).real))

    def norm_inf(self) -> float:
        return float(np.max(np.abs(self.values)))

    def norm_lp(self, p: float) -> float:
        """L^p quasi-norm by the same quadrature rule (exact only for p=2)."""
        if p <= 0:
            raise InputError(f"p must be positive, got {p}")
        return float((self.grid.weight
                      * np.sum(np.abs(self.values) ** p)) ** (1.0 / p))

    def with_values(self, values: np.ndarray) -> "PhaseSpaceField":
        return PhaseSpaceField(self.box, self.grid, values)

    def scaled(self, factor: complex) -> "PhaseSpaceField":
        return PhaseSpaceField(self.box, self.grid, self.values * factor)

    @classmethod
    def zeros(cls, box: SupportBox, grid: TorusGrid) -> "PhaseSpaceField":
        return cls(box, grid, np.zeros(box.shape + grid.shape,
                                       dtype=np.complex128))

    @classmethod
    def random_complex(cls, rng: np.random.Generator, box: SupportBox,
                       grid: TorusGrid) -> "PhaseSpaceField":
        shape = box.shape + grid.shape
        return cls(box, grid, rng.standard_normal(shape)
                   + 1j * rng.standard_normal(shape))


def phase_space_inner(first: PhaseSpaceField, second: PhaseSpaceField
                      ) -> complex:
    """<F, G> = sum_m integral F(m, w) conj(G(m, w)) dw by grid quadrature."""
    if (first.box != second.box) or (first.grid != second.grid):
        raise InputError("phase-space inner product requires matching "
                         "box and grid")
    raw = np.vdot(second.values.reshape(-1), first.values.reshape(-1))
    return complex(first.grid.weight * raw)


def radius_sq_field(box: SupportBox, grid: TorusGrid) -> np.ndarray:
    """|m|^2 + |w|^2 sampled over box x grid (torus reps in [-1/2, 1/2))."""
    return _radius_sq_field(box.dimension, box.half_width,
                            grid.points_per_axis)


@lru_cache(maxsize=8)
def _radius_sq_field(dimension: int, half_width: int, points: int
                     ) -> np.ndarray:
    box = SupportBox(dimension, half_width)
    grid = TorusGrid(dimension, points)
    m_sq = np.sum(box.index_array().astype(np.float64) ** 2, axis=1)
    m_sq = m_sq.reshape(box.shape + (1,) * dimension)
    reps = grid.node_representatives()
    w_sq = np.zeros(grid.shape)
    for axis in range(dimension):
        shape = [1] * dimension
        shape[axis] = points
        w_sq = w_sq + (reps ** 2).reshape(shape)
    out = m_sq + w_sq.reshape((1,) * dimension + grid.shape)
    out = np.broadcast_to(out, box.shape + grid.shape).copy()
    out.flags.writeable = False
    return out
