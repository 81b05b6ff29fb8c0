"""Measurable phase-space subsets built from half-open torus boxes.

A tile pairs one lattice point m with an axis-aligned torus box
prod_i [a_i, b_i).  A TileSet is a finite union of tiles; on construction
every box is reduced to the fundamental domain [0, 1)^n (wrapping boxes
are split) and boxes sharing a lattice point are made pairwise disjoint,
so the measure of the set is just the sum of box volumes.  The half-open
boundary convention is applied everywhere, including grid membership.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import SupportBox, TorusGrid, as_multi_index
from .errors import InputError, ProductFormError, TilePlacementError


@dataclass(frozen=True)
class Tile:
    """One lattice point with a non-wrapping torus box in [0, 1)^n."""

    m: tuple[int, ...]
    lo: tuple[float, ...]
    hi: tuple[float, ...]

    @property
    def volume(self) -> float:
        v = 1.0
        for a, b in zip(self.lo, self.hi):
            v *= (b - a)
        return v


def _split_axis(lo: float, hi: float):
    """Map [lo, hi) with 0 <= hi - lo <= 1 into pieces inside [0, 1)."""
    length = hi - lo
    if length < 0 or length > 1 + 1e-12:
        raise InputError(
            f"tile interval [{lo}, {hi}) must have length in [0, 1]")
    if length <= 0:
        return []
    if length >= 1.0:
        return [(0.0, 1.0)]
    start = lo % 1.0
    end = start + length
    if end <= 1.0:
        return [(start, end)]
    return [(start, 1.0), (0.0, end - 1.0)]


def _disjoint_union(boxes: list[tuple[tuple[float, ...], tuple[float, ...]]],
                    axis: int, dimension: int):
    """Decompose a union of axis-aligned boxes into disjoint boxes.

    Sweep along one axis: cut the union of the axis extents at every box
    endpoint, and recurse on the boxes that cover each elementary slab.
    """
    if axis == dimension:
        return [((), ())] if boxes else []
    cuts = sorted({b[0][axis] for b in boxes} | {b[1][axis] for b in boxes})
    pieces = []
    for a, b in zip(cuts[:-1], cuts[1:]):
        if b <= a:
            continue
        covering = [box for box in boxes if box[0][axis] <= a
                    and box[1][axis] >= b]
        for lo_rest, hi_rest in _disjoint_union(covering, axis + 1, dimension):
            pieces.append(((a,) + lo_rest, (b,) + hi_rest))
    return pieces


@dataclass(frozen=True)
class TileSet:
    """A finite union of tiles, normalized and per-fiber disjoint."""

    dimension: int
    tiles: tuple[Tile, ...]

    @classmethod
    def from_tiles(cls, dimension: int, raw_tiles) -> "TileSet":
        """Build from ``(m, lo, hi)`` triples; boxes may wrap or overlap."""
        per_fiber: dict[tuple[int, ...], list] = {}
        for m, lo, hi in raw_tiles:
            m = as_multi_index(m, dimension)
            lo = tuple(float(v) for v in lo)
            hi = tuple(float(v) for v in hi)
            if len(lo) != dimension or len(hi) != dimension:
                raise InputError(
                    f"tile at {m} has box arity {len(lo)}/{len(hi)}, "
                    f"expected {dimension}")
            # split each axis into non-wrapping pieces, then take products
            axis_pieces = [_split_axis(a, b) for a, b in zip(lo, hi)]
            if any(not pieces for pieces in axis_pieces):
                continue  # empty box
            boxes = [((), ())]
            for pieces in axis_pieces:
                boxes = [(blo + (p0,), bhi + (p1,))
                         for blo, bhi in boxes for p0, p1 in pieces]
            per_fiber.setdefault(m, []).extend(boxes)
        tiles = []
        for m in sorted(per_fiber):
            for blo, bhi in _disjoint_union(per_fiber[m], 0, dimension):
                tiles.append(Tile(m, blo, bhi))
        return cls(dimension, tuple(tiles))

    @classmethod
    def empty(cls, dimension: int) -> "TileSet":
        return cls(dimension, ())

    @classmethod
    def full_fibers(cls, dimension: int, points) -> "TileSet":
        """{m} x T^n for every lattice point in ``points``."""
        full = ((0.0,) * dimension, (1.0,) * dimension)
        return cls.from_tiles(dimension, [(m,) + full for m in points])

    @classmethod
    def product(cls, dimension: int, points, boxes) -> "TileSet":
        """Z x T with Z a list of lattice points, T a list of (lo, hi) boxes."""
        return cls.from_tiles(
            dimension, [(m, lo, hi) for m in points for lo, hi in boxes])

    def union(self, other: "TileSet") -> "TileSet":
        if other.dimension != self.dimension:
            raise InputError("dimension mismatch in tile-set union")
        raw = [(t.m, t.lo, t.hi) for t in self.tiles + other.tiles]
        return TileSet.from_tiles(self.dimension, raw)

    # -- measure and membership ----------------------------------------

    def measure(self) -> float:
        """(nu x mu)-measure: one unit per full fiber."""
        return float(sum(t.volume for t in self.tiles))

    def lattice_points(self) -> tuple[tuple[int, ...], ...]:
        return tuple(sorted({t.m for t in self.tiles}))

    def grid_measure(self, grid: TorusGrid) -> float:
        """Measure assigned by an M-node grid: node count times M^{-n}.

        Agrees with ``measure()`` exactly whenever all box endpoints are
        integer multiples of 1/M.
        """
        fractions = grid.node_fractions()
        total = 0
        for t in self.tiles:
            count = 1
            for a, b in zip(t.lo, t.hi):
                count *= int(np.sum((fractions >= a) & (fractions < b)))
            total += count
        return total * grid.weight

    def snap_inner(self, grid: TorusGrid) -> "TileSet":
        """Largest grid-aligned tile set contained in this one.

        Box endpoints move inward to multiples of 1/M, so the result has
        ``grid_measure == measure`` and never exceeds the original set.
        """
        m_pts = grid.points_per_axis
        raw = []
        for t in self.tiles:
            lo = tuple(float(np.ceil(a * m_pts - 1e-12)) / m_pts for a in t.lo)
            hi = tuple(float(np.floor(b * m_pts + 1e-12)) / m_pts for b in t.hi)
            if all(b > a for a, b in zip(lo, hi)):
                raw.append((t.m, lo, hi))
        return TileSet.from_tiles(self.dimension, raw)

    def product_form(self):
        """Return (Z, T) if the set factors as Z x T, else raise.

        Z is the tuple of lattice points and T the common per-fiber box
        list; used by checks whose hypotheses require product structure.
        """
        if not self.tiles:
            return (), ()
        fibers: dict[tuple[int, ...], list] = {}
        for t in self.tiles:
            fibers.setdefault(t.m, []).append((t.lo, t.hi))
        canon = None
        for m, boxes in fibers.items():
            key = tuple(sorted(boxes))
            if canon is None:
                canon = key
            elif key != canon:
                raise ProductFormError(
                    "tile set does not factor as Z x T: fiber at "
                    f"{m} differs from the first fiber")
        return tuple(sorted(fibers)), canon

    # -- grid sampling --------------------------------------------------

    def indicator_on_grid(self, box: SupportBox, grid: TorusGrid
                          ) -> np.ndarray:
        """0/1 samples of the indicator over box x grid (float array).

        Every tile's lattice point must lie inside ``box``.
        """
        if box.dimension != self.dimension:
            raise InputError("dimension mismatch in indicator")
        out = np.zeros(box.shape + grid.shape)
        fractions = grid.node_fractions()
        for t in self.tiles:
            if not box.contains(t.m):
                raise TilePlacementError(
                    f"tile at lattice point {t.m} lies outside the "
                    f"truncation box of half-width {box.half_width}")
            mask = np.ones(grid.shape, dtype=bool)
            for axis, (a, b) in enumerate(zip(t.lo, t.hi)):
                axis_mask = (fractions >= a) & (fractions < b)
                shape = [1] * self.dimension
                shape[axis] = grid.points_per_axis
                mask &= axis_mask.reshape(shape)
            out[box.offset(t.m)][mask] = 1.0
        return out


def measure(sigma: TileSet) -> float:
    return sigma.measure()


def indicator_on_grid(sigma: TileSet, box: SupportBox, grid: TorusGrid
                      ) -> np.ndarray:
    return sigma.indicator_on_grid(box, grid)


def ball_tileset(radius: float, dimension: int, resolution: int = 32
                 ) -> TileSet:
    """Inner tile approximation of the ball |(m, w)| <= r in Z^n x T^n.

    Torus coordinates use representatives in [-1/2, 1/2)^n.  For n = 1 the
    fiber sections are intervals, so the approximation is exact at any
    resolution.  For n >= 2 each fiber section is approximated from inside
    by the cells of a resolution^n partition of the fundamental domain
    whose closure lies inside the section; refining the resolution by
    doubling never removes covered volume.
    """
    if radius < 0:
        raise InputError(f"ball radius must be >= 0, got {radius}")
    if resolution < 1:
        raise InputError(f"resolution must be >= 1, got {resolution}")
    r_sq = float(radius) * float(radius)
    reach = int(np.floor(radius + 1e-12))
    box = SupportBox(dimension, reach)
    raw = []
    for m in box.indices():
        m_sq = sum(v * v for v in m)
        section_sq = r_sq - m_sq
        if section_sq <= 0:
            continue
        if dimension == 1:
            half = min(float(np.sqrt(section_sq)), 0.5)
            raw.append((m, (-half,), (half,)))
            continue
        edges = np.linspace(-0.5, 0.5, resolution + 1)
        hi_abs = np.maximum(np.abs(edges[:-1]), np.abs(edges[1:]))
        # farthest corner of each cell product must stay inside the section
        grids = np.meshgrid(*([hi_abs ** 2] * dimension), indexing="ij")
        far_sq = np.zeros(grids[0].shape)
        for g in grids:
            far_sq += g
        inside = far_sq <= section_sq
        for cell in np.argwhere(inside):
            lo = tuple(float(edges[i]) for i in cell)
            hi = tuple(float(edges[i + 1]) for i in cell)
            raw.append((m, lo, hi))
    return TileSet.from_tiles(dimension, raw)
