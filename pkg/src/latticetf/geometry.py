"""Measures and counts of phase-space balls.

The ball B_r = {(m, w) : |m|^2 + |w|^2 <= r^2} uses torus representatives
in [-1/2, 1/2)^n.  Its product measure decomposes over lattice fibers,

    (nu x mu)(B_r) = sum_{|m| <= r} vol{w in [-1/2,1/2)^n : |w|^2 <= r^2 - |m|^2},

where each fiber volume is the intersection of a Euclidean ball with the
fundamental cell and therefore never exceeds one.  Dropping that cap
(integrating the ball section over all of R^n, e.g. 2 sqrt(r^2 - m^2)
per fiber for n = 1) overstates the measure once r exceeds 1/2 plus the
fiber offset; both numbers are exposed so reports can flag the gap.
"""

from __future__ import annotations

import math
from fractions import Fraction

import numpy as np

from .core import SupportBox
from .errors import InputError


def lattice_count(radius, dimension: int) -> int:
    """Number of lattice points with |m| <= r, by exact enumeration.

    Comparisons use r^2; pass a Fraction to make them exact for rational
    radii (floats are compared as given).
    """
    if dimension < 1:
        raise InputError(f"dimension must be >= 1, got {dimension}")
    if radius < 0:
        return 0
    if isinstance(radius, Fraction):
        r_sq = radius * radius
        reach = int(math.isqrt((r_sq.numerator // r_sq.denominator)))
        while (reach + 1) * (reach + 1) * r_sq.denominator <= r_sq.numerator:
            reach += 1
    else:
        r_sq = float(radius) * float(radius)
        reach = int(np.floor(float(radius) + 1e-12))
    count = 0
    for m in SupportBox(dimension, reach).indices():
        if sum(v * v for v in m) <= r_sq:
            count += 1
    return count


def unit_ball_volume(dimension: int) -> float:
    """Volume of the Euclidean unit ball, pi^{n/2} / Gamma(n/2 + 1)."""
    return math.pi ** (dimension / 2.0) / math.gamma(dimension / 2.0 + 1.0)


def fiber_volume(section_radius_sq: float, dimension: int,
                 quad_points: int = 128) -> float:
    """vol{w in [-1/2, 1/2)^n : |w|^2 <= R^2} for R^2 = section_radius_sq.

    Closed forms for n = 1 (interval, capped at cell length 1) and n = 2
    (disc clipped by the square via circular-segment areas); a tensor
    midpoint rule with quad_points nodes per axis otherwise.
    """
    if section_radius_sq <= 0:
        return 0.0
    radius = math.sqrt(section_radius_sq)
    if dimension == 1:
        return min(2.0 * radius, 1.0)
    if radius * radius >= dimension * 0.25:
        return 1.0  # ball contains the whole cell
    if radius <= 0.5:
        return unit_ball_volume(dimension) * radius ** dimension
    if dimension == 2:
        # disc of radius R > 1/2 minus the four segments beyond the sides;
        # R < sqrt(2)/2 here, so the segments are disjoint
        seg = radius * radius * math.acos(0.5 / radius) \
            - 0.5 * math.sqrt(radius * radius - 0.25)
        return math.pi * radius * radius - 4.0 * seg
    nodes = (np.arange(quad_points) + 0.5) / quad_points - 0.5
    grids = np.meshgrid(*([nodes ** 2] * dimension), indexing="ij")
    total_sq = np.zeros(grids[0].shape)
    for g in grids:
        total_sq += g
    return float(np.mean(total_sq <= section_radius_sq))


def ball_measure(radius: float, dimension: int, quad_points: int = 128
                 ) -> float:
    """(nu x mu)-measure of the ball |(m, w)| <= r, fiber volumes capped."""
    if radius < 0:
        raise InputError(f"radius must be >= 0, got {radius}")
    r_sq = float(radius) * float(radius)
    reach = int(np.floor(radius + 1e-12))
    total = 0.0
    for m in SupportBox(dimension, reach).indices():
        total += fiber_volume(r_sq - sum(v * v for v in m), dimension,
                              quad_points)
    return total


def ball_fiber_sum_uncapped(radius: float, dimension: int) -> float:
    """sum_{|m| <= r} vol_n(B(sqrt(r^2 - |m|^2))), without the cell cap.

    Matches ball_measure while r stays small enough that no section
    reaches the cell boundary; beyond that it overcounts (fibers can
    contribute more than the unit cell holds), and reports quote both
    values to make the difference visible.
    """
    if radius < 0:
        return 0.0
    r_sq = float(radius) * float(radius)
    reach = int(np.floor(radius + 1e-12))
    v_n = unit_ball_volume(dimension)
    total = 0.0
    for m in SupportBox(dimension, reach).indices():
        section_sq = r_sq - sum(v * v for v in m)
        if section_sq > 0:
            total += v_n * section_sq ** (dimension / 2.0)
    return total
