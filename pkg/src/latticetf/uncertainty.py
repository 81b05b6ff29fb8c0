"""Quantitative uncertainty inequalities for the lattice transform.

Every checker evaluates one inequality on concrete data and returns an
InequalityReport whose ``slack`` is the amount by which the inequality
holds (lhs-versus-rhs oriented so that slack >= 0 means it holds).  A
slack below minus the tolerance marks a failure and the report carries a
full witness for replay.  Quantities that are trigonometric-polynomial
exact are computed on the plan grid; integrands involving |.|^s or a
logarithm are evaluated by resampling the transform onto a finer grid,
which is exact for the field itself and leaves only smooth-quadrature
error in the integral.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dataclass_field
from typing import NamedTuple

import numpy as np

from .core import (LatticeSignal, PhaseSpaceField, SupportBox, TorusGrid,
                   phase_space_inner)
from .errors import InputError, OrthonormalityError
from .fourier import resample_trig_rows
from .geometry import ball_fiber_sum_uncapped, ball_measure, lattice_count
from .stft import StftPlan, stft
from .tiles import TileSet, ball_tileset

__all__ = [
    "InequalityReport", "ConcentrationParams", "dispersion",
    "phase_space_entropy", "moment_norm_sq", "heisenberg_constant",
    "local_uncertainty_constant", "corollary_constant",
    "check_orthonormal_sum", "check_donoho_stark", "check_small_set",
    "check_support_bound", "check_support_bound_p",
    "check_joint_concentration", "check_cardinality_bound",
    "check_dispersion_cardinality", "check_heisenberg",
    "check_local_uncertainty", "check_local_corollary", "check_entropy",
]

#: Per-axis node counts used when resampling for smooth integrands.
REFINED_POINTS = {1: 4096, 2: 128}

#: Default tolerances: trig-exact checks vs smooth-quadrature checks.
TOL_EXACT = 1e-8
TOL_SMOOTH = 1e-6


@dataclass(frozen=True)
class InequalityReport:
    """Outcome of one inequality check.

    ``slack >= 0`` means the inequality holds with room to spare;
    ``slack < -tolerance`` is a failure.  ``status`` records checks whose
    hypotheses were not met ("not-applicable"), which never count as
    failures.  The witness carries every number needed to replay the
    check.
    """

    name: str
    lhs: float
    rhs: float
    slack: float
    tolerance: float
    witness: dict = dataclass_field(default_factory=dict)
    status: str = "checked"
    notes: tuple[str, ...] = ()

    @property
    def passed(self) -> bool:
        if self.status == "not-applicable":
            return True
        return self.slack >= -self.tolerance

    @property
    def failed(self) -> bool:
        return not self.passed

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "slack": self.slack,
            "tolerance": self.tolerance,
            "status": self.status,
            "passed": self.passed,
            "notes": list(self.notes),
            "witness": self.witness,
        }

    CSV_HEADER = "name,lhs,rhs,slack,tolerance,status,seed"

    def csv_row(self) -> str:
        seed = self.witness.get("seed", "")
        return ",".join([
            self.name,
            format(self.lhs, ".17g"),
            format(self.rhs, ".17g"),
            format(self.slack, ".17g"),
            format(self.tolerance, ".17g"),
            self.status,
            str(seed),
        ])


@dataclass(frozen=True)
class ConcentrationParams:
    """Validated parameter bundle for concentration-type checks."""

    eps: float = 0.0
    p: float | None = None
    s: float | None = None

    def __post_init__(self):
        if not 0.0 <= self.eps < 1.0:
            raise InputError(f"eps must lie in [0, 1), got {self.eps}")
        if self.p is not None and self.p <= 2.0:
            raise InputError(f"p must exceed 2, got {self.p}")
        if self.s is not None and self.s <= 0.0:
            raise InputError(f"s must be positive, got {self.s}")


# ---------------------------------------------------------------------------
# refined quadrature of smooth integrands

def _refined_density(field: PhaseSpaceField, points: int | None = None):
    """|field|^2 resampled to a finer torus grid.

    Returns (rho, weight, points).  The resampling evaluates the same
    trigonometric polynomial rows at more nodes, so rho is exact there.
    """
    n = field.dimension
    old = field.grid.points_per_axis
    target = points or REFINED_POINTS.get(n, 32)
    if old % 2:  # odd grids cannot be zero-padded; integrate as sampled
        target = old
    target = max(target, old)
    vals = resample_trig_rows(field.values, n, old, target)
    rho = vals.real ** 2 + vals.imag ** 2
    return rho, float(target) ** (-n), target


def _axis_w_sq(points: int, dimension: int) -> np.ndarray:
    """|w|^2 over a refined grid's nodes, shaped for broadcasting."""
    fractions = np.arange(points) / points
    reps = fractions - (fractions >= 0.5)
    w_sq = np.zeros((points,) * dimension)
    for axis in range(dimension):
        shape = [1] * dimension
        shape[axis] = points
        w_sq = w_sq + (reps ** 2).reshape(shape)
    return w_sq


def _lattice_m_sq(box: SupportBox) -> np.ndarray:
    m_sq = np.sum(box.index_array().astype(np.float64) ** 2, axis=1)
    return m_sq.reshape(box.shape)


class MomentParts(NamedTuple):
    lattice_sq: float   # || |m|^s V ||^2
    torus_sq: float     # || |w|^s V ||^2
    joint_sq: float     # || |(m,w)|^s V ||^2


def moment_norm_parts(field: PhaseSpaceField, s: float,
                      points: int | None = None) -> MomentParts:
    """Squared s-moment norms of a transform, by refined quadrature."""
    if s <= 0:
        raise InputError(f"s must be positive, got {s}")
    n = field.dimension
    rho, weight, pts = _refined_density(field, points)
    box = field.box
    m_sq = _lattice_m_sq(box).reshape(box.shape + (1,) * n)
    w_sq = _axis_w_sq(pts, n).reshape((1,) * n + (pts,) * n)
    row_mass = rho.sum(axis=tuple(range(n, 2 * n)), keepdims=True)
    lattice_sq = float((m_sq ** s * row_mass).sum() * weight)
    torus_sq = float((w_sq ** s * rho).sum() * weight)
    joint_sq = float(((m_sq + w_sq) ** s * rho).sum() * weight)
    return MomentParts(lattice_sq, torus_sq, joint_sq)


def moment_norm_sq(field: PhaseSpaceField, s: float,
                   points: int | None = None) -> float:
    """|| |(m, w)|^s V ||^2 by refined quadrature."""
    return moment_norm_parts(field, s, points).joint_sq


def dispersion(field: PhaseSpaceField, s: float,
               points: int | None = None) -> float:
    """rho_s(V) = ( sum_m integral |(m,w)|^s |V(m,w)|^2 dw )^{1/s}."""
    if s <= 0:
        raise InputError(f"s must be positive, got {s}")
    n = field.dimension
    rho, weight, pts = _refined_density(field, points)
    box = field.box
    m_sq = _lattice_m_sq(box).reshape(box.shape + (1,) * n)
    w_sq = _axis_w_sq(pts, n).reshape((1,) * n + (pts,) * n)
    integral = float((((m_sq + w_sq) ** (s / 2.0)) * rho).sum() * weight)
    return integral ** (1.0 / s)


_ENTROPY_FLOOR = 1e-300


def phase_space_entropy(field: PhaseSpaceField,
                        points: int | None = None) -> float:
    """- sum_m integral rho ln rho dw for rho = |V|^2, with 0 ln 0 = 0."""
    rho, weight, _ = _refined_density(field, points)
    terms = np.where(rho > _ENTROPY_FLOOR, rho * np.log(
        np.maximum(rho, _ENTROPY_FLOOR)), 0.0)
    return float(-terms.sum() * weight)


# ---------------------------------------------------------------------------
# sharp constants

def _golden_section_max(func, lo: float, hi: float, tol: float = 1e-9):
    """Maximize a unimodal function on [lo, hi] by golden-section search."""
    inv_phi = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = float(lo), float(hi)
    c = b - inv_phi * (b - a)
    d = a + inv_phi * (b - a)
    fc, fd = func(c), func(d)
    while (b - a) > tol:
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - inv_phi * (b - a)
            fc = func(c)
        else:
            a, c, fc = c, d, fd
            d = a + inv_phi * (b - a)
            fd = func(d)
    x = 0.5 * (a + b)
    return x, func(x)


class OptimizedConstant(NamedTuple):
    value: float
    eps0: float


def _ball_mass_gap(s: float, dimension: int):
    """eps -> eps^{2s} (1 - ball measure at radius eps), to be maximized."""
    def gap(eps: float) -> float:
        return eps ** (2.0 * s) * (1.0 - ball_measure(eps, dimension))
    return gap


def heisenberg_constant(s: float, dimension: int) -> OptimizedConstant:
    """Constant c(s) with |||m|^s V||^2 + |||w|^s V||^2 >= c(s) ||f||^2 ||g||^2.

    c(s) = eps0^{2s} 2^{-s} (1 - (nu x mu)(B_eps0)) with eps0 chosen in
    (0, 1/2] to maximize eps^{2s} (1 - (nu x mu)(B_eps)); on that range
    the ball measure is just the volume of a radius-eps Euclidean ball,
    so the objective is smooth and unimodal.
    """
    if s <= 0:
        raise InputError(f"s must be positive, got {s}")
    eps0, best = _golden_section_max(_ball_mass_gap(s, dimension),
                                     1e-6, 0.5, tol=1e-9)
    return OptimizedConstant(best * 2.0 ** (-s), eps0)


def local_uncertainty_constant(s: float, dimension: int) -> OptimizedConstant:
    """Constant c(s) with ||V||_{L^2(Sigma)} <= c(s) sqrt(measure) || |(m,w)|^s V ||.

    Evaluated at the same eps0 as the additive constant:
    c(s) = eps0^{-s} (1 - (nu x mu)(B_eps0))^{-1/2}.
    """
    if s <= 0:
        raise InputError(f"s must be positive, got {s}")
    eps0, _ = _golden_section_max(_ball_mass_gap(s, dimension),
                                  1e-6, 0.5, tol=1e-9)
    mass = ball_measure(eps0, dimension)
    return OptimizedConstant(eps0 ** (-s) / math.sqrt(1.0 - mass), eps0)


class CorollaryConstant(NamedTuple):
    value: float
    split_radius: float


def corollary_constant(s: float, dimension: int, r_max: float,
                       coarse: int = 240) -> CorollaryConstant:
    """Constant c_s with || |(m, w)|^s V || >= c_s ||f|| ||g||.

    Splitting ||V||^2 at a ball of radius r gives, for every r > 0,
    ||f||^2 ||g||^2 <= h(r) || |(m,w)|^s V ||^2 with
    h(r) = c(s)^2 (nu x mu)(B_r) + r^{-2s}; c_s = h(r*)^{-1/2} at the
    numerically minimizing radius.  A log-spaced scan brackets the
    minimum and golden-section search refines it.
    """
    if s <= 0:
        raise InputError(f"s must be positive, got {s}")
    if r_max <= 0:
        raise InputError(f"r_max must be positive, got {r_max}")
    c_local = local_uncertainty_constant(s, dimension).value
    c_sq = c_local * c_local

    def h(radius: float) -> float:
        return c_sq * ball_measure(radius, dimension) \
            + radius ** (-2.0 * s)

    radii = np.geomspace(1e-3, r_max, coarse)
    values = [h(r) for r in radii]
    best = int(np.argmin(values))
    lo = radii[max(best - 1, 0)]
    hi = radii[min(best + 1, coarse - 1)]
    r_star, neg_h = _golden_section_max(lambda r: -h(r), lo, hi, tol=1e-10)
    return CorollaryConstant(1.0 / math.sqrt(-neg_h), r_star)


# ---------------------------------------------------------------------------
# shared validation and measurement helpers

def validate_orthonormal(signals, tol: float = 1e-10):
    """Raise unless the family is pairwise orthonormal to ``tol``."""
    for i, sig in enumerate(signals):
        norm = sig.norm()
        if abs(norm - 1.0) > tol:
            raise OrthonormalityError(
                f"signal {i} has norm {norm:.15f}, not 1 within {tol:g}")
    for i in range(len(signals)):
        for j in range(i + 1, len(signals)):
            overlap = signals[i].inner(signals[j])
            if abs(overlap) > tol:
                raise OrthonormalityError(
                    f"signals {i} and {j} have inner product "
                    f"{overlap:.3e}, beyond {tol:g}")


def _masked_norms(field: PhaseSpaceField, sigma: TileSet):
    """(||chi_Sigma V||, ||chi_Sigma^c V||, ||V||) on the field's grid."""
    mask = sigma.indicator_on_grid(field.box, field.grid)
    sq = (field.values.real ** 2 + field.values.imag ** 2)
    inside = float((sq * mask).sum() * field.grid.weight)
    total = float(sq.sum() * field.grid.weight)
    outside = max(total - inside, 0.0)
    return math.sqrt(inside), math.sqrt(outside), math.sqrt(total)


def _norms_witness(f: LatticeSignal, g: LatticeSignal) -> dict:
    return {"signal_norm": f.norm(), "window_norm": g.norm()}


# ---------------------------------------------------------------------------
# checkers

def check_orthonormal_sum(signals, window: LatticeSignal, sigma: TileSet,
                          plan: StftPlan, tolerance: float = TOL_EXACT
                          ) -> InequalityReport:
    """sum_k (1 - ||chi_Sigma^c V_g phi_k|| / ||g||) <= (nu x mu)(Sigma).

    The family must be pairwise orthonormal; transforms are normalized by
    ||g|| so each V_g phi_k is a unit vector (the inequality is stated
    for unit windows and rescales through the transform linearly).
    """
    validate_orthonormal(signals)
    g_norm = window.norm()
    outside_norms = []
    lhs = 0.0
    for sig in signals:
        transform = stft(sig, window, plan)
        _, outside, _ = _masked_norms(transform, sigma)
        outside_norms.append(outside / g_norm)
        lhs += 1.0 - outside / g_norm
    rhs = sigma.measure()
    return InequalityReport(
        name="orthonormal_sum", lhs=lhs, rhs=rhs, slack=rhs - lhs,
        tolerance=tolerance,
        witness={
            "family_size": len(signals),
            "normalized_outside_norms": outside_norms,
            "sigma_measure": rhs,
            "sigma_grid_measure": sigma.grid_measure(plan.grid),
        })


def check_donoho_stark(f: LatticeSignal, g: LatticeSignal, sigma: TileSet,
                       eps: float, plan: StftPlan,
                       tolerance: float = TOL_EXACT) -> InequalityReport:
    """(nu x mu)(Z x T) >= 1 - eps when Z x T holds mass (1-eps) of ||V||^2.

    Sigma must factor as Z x T (a product of a lattice set and one torus
    box family); if the mass hypothesis fails on the given data the
    report comes back not-applicable instead of judging the inequality.
    """
    ConcentrationParams(eps=eps)
    sigma.product_form()  # raises unless the set factors
    transform = stft(f, g, plan)
    inside, _, total = _masked_norms(transform, sigma)
    mass_fraction = (inside / total) ** 2 if total > 0 else 0.0
    witness = {
        **_norms_witness(f, g),
        "eps": eps,
        "mass_fraction": mass_fraction,
        "sigma_measure": sigma.measure(),
    }
    if mass_fraction < (1.0 - eps) * (1.0 - 1e-10):
        return InequalityReport(
            name="donoho_stark", lhs=sigma.measure(), rhs=1.0 - eps,
            slack=0.0, tolerance=tolerance, witness=witness,
            status="not-applicable",
            notes=("concentration hypothesis not met by the data",))
    lhs = sigma.measure()
    rhs = 1.0 - eps
    return InequalityReport(
        name="donoho_stark", lhs=lhs, rhs=rhs, slack=lhs - rhs,
        tolerance=tolerance, witness=witness)


def check_small_set(f: LatticeSignal, g: LatticeSignal, sigma: TileSet,
                    plan: StftPlan, tolerance: float = TOL_EXACT
                    ) -> InequalityReport:
    """||chi_Sigma^c V_g f|| >= sqrt(1 - (nu x mu)(Sigma)) ||f|| ||g||."""
    meas = sigma.measure()
    if meas >= 1.0:
        raise InputError(
            f"small-set bound needs (nu x mu)(Sigma) < 1, got {meas}")
    transform = stft(f, g, plan)
    _, outside, _ = _masked_norms(transform, sigma)
    rhs = math.sqrt(1.0 - meas) * f.norm() * g.norm()
    return InequalityReport(
        name="small_set", lhs=outside, rhs=rhs, slack=outside - rhs,
        tolerance=tolerance,
        witness={**_norms_witness(f, g), "sigma_measure": meas,
                 "sigma_grid_measure": sigma.grid_measure(plan.grid)})


def _concentration_level(transform: PhaseSpaceField, sigma: TileSet
                         ) -> tuple[float, float]:
    """(eps_Sigma, total norm): the smallest valid concentration level."""
    _, outside, total = _masked_norms(transform, sigma)
    if total == 0.0:
        raise InputError("transform vanishes; concentration level undefined")
    return outside / total, total


def check_support_bound(f: LatticeSignal, g: LatticeSignal, sigma: TileSet,
                        plan: StftPlan, tolerance: float = TOL_EXACT
                        ) -> InequalityReport:
    """(nu x mu)(Sigma) >= 1 - eps_Sigma^2 at the data's own level eps_Sigma."""
    transform = stft(f, g, plan)
    eps_sigma, _ = _concentration_level(transform, sigma)
    lhs = sigma.measure()
    rhs = 1.0 - eps_sigma * eps_sigma
    return InequalityReport(
        name="support_bound", lhs=lhs, rhs=rhs, slack=lhs - rhs,
        tolerance=tolerance,
        witness={**_norms_witness(f, g), "eps_sigma": eps_sigma,
                 "sigma_measure": lhs,
                 "sigma_grid_measure": sigma.grid_measure(plan.grid)})


def check_support_bound_p(f: LatticeSignal, g: LatticeSignal, sigma: TileSet,
                          p: float, plan: StftPlan,
                          tolerance: float = TOL_EXACT) -> InequalityReport:
    """(nu x mu)(Sigma) >= (1 - eps_Sigma^2)^{p/(p-2)} for p > 2.

    Recovers the p = infinity version as p grows and tightens toward the
    L^2 bound as p decreases to 2.  The discrete Hoelder chain behind it
    holds exactly on the grid, so the tight tolerance applies.
    """
    ConcentrationParams(p=p)
    transform = stft(f, g, plan)
    eps_sigma, _ = _concentration_level(transform, sigma)
    lhs = sigma.measure()
    rhs = (1.0 - eps_sigma * eps_sigma) ** (p / (p - 2.0))
    return InequalityReport(
        name="support_bound_p", lhs=lhs, rhs=rhs, slack=lhs - rhs,
        tolerance=tolerance,
        witness={**_norms_witness(f, g), "eps_sigma": eps_sigma, "p": p,
                 "sigma_measure": lhs})


def check_joint_concentration(f: LatticeSignal, g: LatticeSignal,
                              lattice_set, sigma: TileSet, plan: StftPlan,
                              tolerance: float = TOL_EXACT
                              ) -> InequalityReport:
    """nu(E) (nu x mu)(Sigma) >= (1 - eps_E)^2 (1 - eps_Sigma^2).

    eps_E is measured in l^1 on the signal, eps_Sigma in L^2 on the
    transform; the normalization ||V_g f|| = 1 is enforced by rescaling
    the window, which changes neither level.
    """
    points = {tuple(int(v) for v in m) for m in lattice_set}
    f_l1 = f.norm_l1()
    if f_l1 == 0.0:
        raise InputError("signal is zero; l^1 level undefined")
    inside_l1 = sum(abs(f.value_at(m)) for m in points)
    eps_e = max(0.0, 1.0 - inside_l1 / f_l1)
    scale = f.norm() * g.norm()
    if scale == 0.0:
        raise InputError("zero signal or window")
    normalized_g = g.scaled(1.0 / scale)
    transform = stft(f, normalized_g, plan)
    eps_sigma, total = _concentration_level(transform, sigma)
    nu_e = float(len(points))
    lhs = nu_e * sigma.measure()
    rhs = (1.0 - eps_e) ** 2 * (1.0 - eps_sigma * eps_sigma)
    witness = {
        **_norms_witness(f, g),
        "eps_e": eps_e,
        "eps_sigma": eps_sigma,
        "nu_e": nu_e,
        "sigma_measure": sigma.measure(),
        "normalized_transform_norm": total,
        "lattice_factor_slack":
            nu_e - (1.0 - eps_e) ** 2 * (f.norm_l1() / f.norm()) ** 2,
    }
    return InequalityReport(
        name="joint_concentration", lhs=lhs, rhs=rhs, slack=lhs - rhs,
        tolerance=tolerance, witness=witness)


def _ball_witness(radius: float, dimension: int, tiles: TileSet,
                  grid: TorusGrid) -> dict:
    capped = ball_measure(radius, dimension)
    uncapped = ball_fiber_sum_uncapped(radius, dimension)
    return {
        "ball_radius": radius,
        "ball_measure": capped,
        "ball_fiber_sum_uncapped": uncapped,
        "ball_tile_measure": tiles.measure(),
        "ball_tile_grid_measure": tiles.grid_measure(grid),
    }


def check_cardinality_bound(signals, window: LatticeSignal, radius: float,
                            eps: float, plan: StftPlan,
                            resolution: int = 32,
                            tolerance: float = TOL_EXACT
                            ) -> InequalityReport:
    """Card(K) <= (nu x mu)(B_r) / (1 - eps) for orthonormal families.

    K collects the family members whose transforms are eps-concentrated
    on the ball; concentration is tested against a grid-aligned inner
    tile approximation of B_r, so membership never overcounts.  Family
    members failing the concentration test are excluded and listed.
    """
    ConcentrationParams(eps=eps)
    validate_orthonormal(signals)
    g_norm = window.norm()
    if abs(g_norm - 1.0) > 1e-10:
        raise InputError(
            f"cardinality bound requires a unit-norm window; got {g_norm}")
    if radius > plan.output_box.half_width:
        raise InputError(
            f"ball radius {radius} exceeds the truncation box half-width "
            f"{plan.output_box.half_width}")
    tiles = ball_tileset(radius, plan.dimension,
                         resolution).snap_inner(plan.grid)
    qualifying = []
    excluded = []
    for i, sig in enumerate(signals):
        transform = stft(sig, window, plan)
        _, outside, total = _masked_norms(transform, tiles)
        if outside <= eps * total * (1.0 + 1e-12):
            qualifying.append(i)
        else:
            excluded.append(i)
    card = float(len(qualifying))
    rhs = ball_measure(radius, plan.dimension) / (1.0 - eps)
    witness = {
        "eps": eps,
        "qualifying": qualifying,
        "excluded": excluded,
        **_ball_witness(radius, plan.dimension, tiles, plan.grid),
    }
    notes = ()
    if witness["ball_fiber_sum_uncapped"] > witness["ball_measure"] + 1e-12:
        notes = ("uncapped fiber sum exceeds the capped ball measure; "
                 "the capped value is used",)
    return InequalityReport(
        name="cardinality", lhs=rhs, rhs=card, slack=rhs - card,
        tolerance=tolerance, witness=witness, notes=notes)


def check_dispersion_cardinality(signals, window: LatticeSignal, s: float,
                                 bound: float, plan: StftPlan,
                                 tolerance: float = TOL_SMOOTH
                                 ) -> InequalityReport:
    """Card(K) <= 2 (nu x mu)(B_{A 2^{2/s}}) when rho_s(V_g phi_k) <= A.

    Dispersion at most A forces each transform to keep half its mass in
    the ball of radius A 2^{2/s}, and the orthonormal-family bound with
    eps = 1/2 counts how many can do that at once.  Members with
    dispersion above A are excluded and listed.
    """
    ConcentrationParams(s=s)
    validate_orthonormal(signals)
    if abs(window.norm() - 1.0) > 1e-10:
        raise InputError("dispersion cardinality requires a unit window")
    if bound <= 0:
        raise InputError(f"dispersion bound must be positive, got {bound}")
    dispersions = []
    qualifying = []
    excluded = []
    for i, sig in enumerate(signals):
        transform = stft(sig, window, plan)
        rho_s = dispersion(transform, s)
        dispersions.append(rho_s)
        if rho_s <= bound * (1.0 + 1e-12):
            qualifying.append(i)
        else:
            excluded.append(i)
    radius = bound * 2.0 ** (2.0 / s)
    card = float(len(qualifying))
    rhs = 2.0 * ball_measure(radius, plan.dimension)
    witness = {
        "s": s,
        "dispersion_bound": bound,
        "dispersions": dispersions,
        "qualifying": qualifying,
        "excluded": excluded,
        "ball_radius": radius,
        "ball_measure": ball_measure(radius, plan.dimension),
        "ball_fiber_sum_uncapped":
            ball_fiber_sum_uncapped(radius, plan.dimension),
        "lattice_count_in_ball": lattice_count(radius, plan.dimension),
    }
    return InequalityReport(
        name="dispersion_cardinality", lhs=rhs, rhs=card, slack=rhs - card,
        tolerance=tolerance, witness=witness)


def check_heisenberg(f: LatticeSignal, g: LatticeSignal, s: float,
                     plan: StftPlan, tolerance: float = TOL_SMOOTH
                     ) -> InequalityReport:
    """|| |m|^s V ||^2 + || |w|^s V ||^2 >= c(s) ||f||^2 ||g||^2."""
    ConcentrationParams(s=s)
    constant, eps0 = heisenberg_constant(s, plan.dimension)
    transform = stft(f, g, plan)
    parts = moment_norm_parts(transform, s)
    lhs = parts.lattice_sq + parts.torus_sq
    scale_sq = (f.norm() * g.norm()) ** 2
    rhs = constant * scale_sq
    ball_at_eps0 = ball_measure(eps0, plan.dimension)
    intermediate_rhs = eps0 ** (2.0 * s) * (1.0 - ball_at_eps0) * scale_sq
    return InequalityReport(
        name="heisenberg", lhs=lhs, rhs=rhs, slack=lhs - rhs,
        tolerance=tolerance,
        witness={
            **_norms_witness(f, g),
            "s": s,
            "eps0": eps0,
            "constant": constant,
            "lattice_moment_sq": parts.lattice_sq,
            "torus_moment_sq": parts.torus_sq,
            "joint_moment_sq": parts.joint_sq,
            "split_moment_slack": parts.joint_sq - intermediate_rhs,
        })


def check_local_uncertainty(f: LatticeSignal, g: LatticeSignal, s: float,
                            sigma: TileSet, plan: StftPlan,
                            tolerance: float = TOL_SMOOTH
                            ) -> InequalityReport:
    """||V||_{L^2(Sigma)} <= c(s) sqrt((nu x mu)(Sigma)) || |(m,w)|^s V ||."""
    ConcentrationParams(s=s)
    constant, eps0 = local_uncertainty_constant(s, plan.dimension)
    transform = stft(f, g, plan)
    inside, _, _ = _masked_norms(transform, sigma)
    moment = math.sqrt(moment_norm_sq(transform, s))
    rhs = constant * math.sqrt(sigma.measure()) * moment
    return InequalityReport(
        name="local_uncertainty", lhs=rhs, rhs=inside, slack=rhs - inside,
        tolerance=tolerance,
        witness={
            **_norms_witness(f, g),
            "s": s,
            "eps0": eps0,
            "constant": constant,
            "sigma_measure": sigma.measure(),
            "restricted_norm": inside,
            "moment_norm": moment,
        })


def check_local_corollary(f: LatticeSignal, g: LatticeSignal, s: float,
                          plan: StftPlan, tolerance: float = TOL_SMOOTH
                          ) -> InequalityReport:
    """|| |(m, w)|^s V || >= c_s ||f|| ||g|| with the optimized split radius."""
    ConcentrationParams(s=s)
    box_half = plan.output_box.half_width
    r_max = math.sqrt(plan.dimension) * (box_half + 1.0)
    constant, r_star = corollary_constant(s, plan.dimension, r_max)
    transform = stft(f, g, plan)
    moment = math.sqrt(moment_norm_sq(transform, s))
    rhs = constant * f.norm() * g.norm()
    return InequalityReport(
        name="local_corollary", lhs=moment, rhs=rhs, slack=moment - rhs,
        tolerance=tolerance,
        witness={
            **_norms_witness(f, g),
            "s": s,
            "constant": constant,
            "split_radius": r_star,
            "moment_norm": moment,
        })


def check_entropy(f: LatticeSignal, g: LatticeSignal, plan: StftPlan,
                  tolerance: float = TOL_SMOOTH) -> InequalityReport:
    """E(|V|^2) >= -2 ln(||f|| ||g||) ||f||^2 ||g||^2.

    E is the differential entropy of the spectrogram with respect to the
    product measure.  Scaling is exact: dividing V by ||f|| ||g|| turns
    the bound into non-negativity of the normalized entropy.
    """
    transform = stft(f, g, plan)
    entropy = phase_space_entropy(transform)
    scale = f.norm() * g.norm()
    if scale == 0.0:
        raise InputError("zero signal or window")
    scale_sq = scale * scale
    rhs = -2.0 * math.log(scale) * scale_sq
    normalized = entropy / scale_sq + 2.0 * math.log(scale)
    return InequalityReport(
        name="entropy", lhs=entropy, rhs=rhs, slack=entropy - rhs,
        tolerance=tolerance,
        witness={
            **_norms_witness(f, g),
            "normalized_entropy": normalized,
        })
