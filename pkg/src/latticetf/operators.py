"""Concentration operators on the phase-space truncation.

P_Sigma multiplies a field by the indicator of a tile set; P_g is the
orthogonal projection onto the transform range {V_g f}.  Their product
P_Sigma P_g measures how much of the range can concentrate on Sigma:

    ||P_Sigma P_g||_HS^2  =  (nu x mu)(Sigma)        (kernel norms are 1)
    ||P_Sigma P_g||_op    <=  ||P_Sigma P_g||_HS

and when the operator norm stays strictly below one, every transform
keeps a definite fraction of its mass outside Sigma.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dataclass_field

import numpy as np
import scipy.linalg

from .core import LatticeSignal, PhaseSpaceField, phase_space_inner
from .errors import ConvergenceError, InputError
from .stft import StftPlan, stft, stft_adjoint
from .tiles import TileSet

__all__ = [
    "ConcentrationOperator", "project_sigma", "project_g", "hs_norm_sq",
    "op_norm", "op_norm_dense", "benedicks_constant", "PowerIterationInfo",
]


def project_g(field: PhaseSpaceField, window: LatticeSignal, plan: StftPlan
              ) -> PhaseSpaceField:
    """Orthogonal projection onto the transform range {V_g f}.

    Computed as V_g (V_g^* F) / ||g||^2 with the adjoint output cropped to
    the plan's signal box.  Because V_g^* V_g = ||g||^2 Id holds exactly
    for the discrete quadrature, this map is idempotent and self-adjoint
    to rounding, and fixes every V_g f.
    """
    analysed = stft_adjoint(field, window, plan).crop(plan.signal_box)
    return stft(analysed.scaled(1.0 / window.norm() ** 2), window, plan)


def project_sigma(field: PhaseSpaceField, sigma: TileSet) -> PhaseSpaceField:
    """Multiply by the indicator of sigma sampled on the field's grid."""
    mask = sigma.indicator_on_grid(field.box, field.grid)
    return field.with_values(field.values * mask)


@dataclass(frozen=True, eq=False)
class ConcentrationOperator:
    """P_Sigma P_g for a fixed window, tile set, and plan."""

    window: LatticeSignal
    sigma: TileSet
    plan: StftPlan
    _indicator: np.ndarray = dataclass_field(default=None, repr=False)

    def __post_init__(self):
        if self.sigma.dimension != self.plan.dimension:
            raise InputError("tile set and plan dimension mismatch")
        mask = self.sigma.indicator_on_grid(self.plan.output_box,
                                            self.plan.grid)
        mask.flags.writeable = False
        object.__setattr__(self, "_indicator", mask)

    @property
    def indicator(self) -> np.ndarray:
        return self._indicator

    def restrict(self, field: PhaseSpaceField) -> PhaseSpaceField:
        return field.with_values(field.values * self._indicator)

    def project_range(self, field: PhaseSpaceField) -> PhaseSpaceField:
        return project_g(field, self.window, self.plan)

    def apply(self, field: PhaseSpaceField) -> PhaseSpaceField:
        """P_Sigma P_g F."""
        return self.restrict(self.project_range(field))

    def apply_symmetrized(self, field: PhaseSpaceField) -> PhaseSpaceField:
        """P_g P_Sigma P_g F, the self-adjoint square of the operator."""
        return self.project_range(self.apply(field))

    def grid_measure(self) -> float:
        """Measure sigma receives from the plan grid's quadrature."""
        return float(np.sum(self._indicator) * self.plan.grid.weight)


def hs_norm_sq(op: ConcentrationOperator) -> float:
    """Hilbert-Schmidt norm squared of P_Sigma P_g.

    Equals sum over sigma's grid samples of the squared L^2 norm of the
    reproducing kernel pinned there.  Kernel norms do not depend on the
    pin point (phase-space shifts are unitary and permute grid nodes), so
    one norm computed on the window's own plan multiplies the grid
    measure of sigma.  That norm is ||V_g g||^2 / ||g||^4 = 1 exactly, so
    the result coincides with the grid measure up to rounding.
    """
    window_plan = StftPlan(op.window.box, op.window.box)
    auto = stft(op.window, op.window, window_plan)
    kernel_norm_sq = auto.norm_sq() / op.window.norm() ** 4
    return op.grid_measure() * kernel_norm_sq


@dataclass(frozen=True)
class PowerIterationInfo:
    value: float
    eigenvalue: float
    iterations: int
    residual: float
    history: tuple[float, ...]


def op_norm(op: ConcentrationOperator, tol: float = 1e-10,
            max_iter: int = 1000, seed: int = 0) -> float:
    """Operator norm of P_Sigma P_g by power iteration.

    Runs on the self-adjoint square P_g P_Sigma P_g from a seeded random
    complex field, stopping when the Rayleigh quotient's relative change
    drops below ``tol``; the norm is the square root of the limit.  The
    estimate increases monotonically, so it never exceeds the true norm.
    Raises ConvergenceError carrying the last state if max_iter is hit.
    """
    return power_iteration(op, tol=tol, max_iter=max_iter, seed=seed).value


def power_iteration(op: ConcentrationOperator, tol: float = 1e-10,
                    max_iter: int = 1000, seed: int = 0
                    ) -> PowerIterationInfo:
    rng = np.random.default_rng(seed)
    current = PhaseSpaceField.random_complex(rng, op.plan.output_box,
                                             op.plan.grid)
    norm = current.norm()
    current = current.scaled(1.0 / norm)
    eigenvalue = None
    history = []
    for iteration in range(1, max_iter + 1):
        image = op.apply_symmetrized(current)
        image_norm = image.norm()
        rayleigh = float(phase_space_inner(image, current).real)
        rayleigh = max(rayleigh, 0.0)
        history.append(rayleigh)
        if image_norm <= 1e-150:
            return PowerIterationInfo(0.0, 0.0, iteration, 0.0,
                                      tuple(history))
        residual_field = image.with_values(
            image.values - rayleigh * current.values)
        residual = residual_field.norm()
        if eigenvalue is not None and abs(rayleigh - eigenvalue) <= \
                tol * max(rayleigh, 1e-300):
            return PowerIterationInfo(float(np.sqrt(rayleigh)), rayleigh,
                                      iteration, residual, tuple(history))
        eigenvalue = rayleigh
        current = image.scaled(1.0 / image_norm)
    raise ConvergenceError(
        f"power iteration did not converge in {max_iter} iterations "
        f"(last eigenvalue estimate {eigenvalue:.12e}, residual "
        f"{residual:.3e})",
        eigenvalue=eigenvalue, residual=residual, iterations=max_iter,
        field=current)


def op_norm_dense(op: ConcentrationOperator, size_cap: int = 4096) -> float:
    """Operator norm from a dense eigensolve, for cross-checking.

    The non-zero spectrum of P_g P_Sigma P_g agrees with that of the
    compressed matrix A[k, k'] = <chi_Sigma V_g delta_k', V_g delta_k>
    / ||g||^2 over the plan's signal box, assembled column by column and
    passed to a Hermitian eigensolver.
    """
    box = op.plan.signal_box
    if box.size > size_cap:
        raise InputError(
            f"dense path disabled for {box.size} basis vectors "
            f"(cap {size_cap})")
    weight = op.plan.grid.weight
    field_len = op.plan.output_box.size * op.plan.grid.size
    transforms = np.empty((box.size, field_len), dtype=np.complex128)
    for flat in range(box.size):
        values = np.zeros(box.size, dtype=np.complex128)
        values[flat] = 1.0
        basis = LatticeSignal(box, values.reshape(box.shape))
        transforms[flat] = stft(basis, op.window, op.plan).values.reshape(-1)
    mask = op.indicator.reshape(-1)
    matrix = weight * (np.conj(transforms)
                       @ (transforms * mask[None, :]).T)
    matrix /= op.window.norm() ** 2
    eigenvalues = scipy.linalg.eigvalsh(matrix)
    top = max(float(eigenvalues[-1]), 0.0)
    return float(np.sqrt(top))


def benedicks_constant(op: ConcentrationOperator,
                       norm_value: float | None = None,
                       gap_floor: float = 1e-9, **norm_kwargs) -> float:
    """c(Sigma, g) = 1 / sqrt(1 - ||P_Sigma P_g||^2).

    Requires the operator norm to stay below 1 by at least ``gap_floor``;
    the constant then certifies ||f|| ||g|| <= c ||V_g f||_{L^2(Sigma^c)}
    for every f.
    """
    if norm_value is None:
        norm_value = op_norm(op, **norm_kwargs)
    if norm_value >= 1.0 - gap_floor:
        raise InputError(
            f"operator norm {norm_value:.12f} is within {gap_floor:g} of 1; "
            "no useful complement bound at this truncation")
    return float(1.0 / np.sqrt(1.0 - norm_value * norm_value))
