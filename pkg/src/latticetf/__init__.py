"""Short-time transforms on Z^n x T^n and their uncertainty inequalities.

The package computes the windowed transform of finitely supported
lattice signals, evaluates it exactly on equispaced torus grids, and
verifies the quantitative concentration, operator-norm, additive,
local, and entropy inequalities that constrain it.
"""

__version__ = "0.1.0"

from .core import (LatticeSignal, PhaseSpaceField, SupportBox, TorusGrid,
                   phase_space_inner)
from .errors import (ConvergenceError, GridResolutionError, InputError,
                     LatticeTfError, NearOrthogonalWindowError,
                     OrthonormalityError, ProductFormError,
                     TilePlacementError, ZeroWindowError)
from .fourier import (default_grid_points, fourier_lattice_to_torus,
                      fourier_torus_to_lattice, plancherel_lattice,
                      resample_trig_rows)
from .geometry import (ball_fiber_sum_uncapped, ball_measure, lattice_count,
                       unit_ball_volume)
from .operators import (ConcentrationOperator, benedicks_constant,
                        hs_norm_sq, op_norm, op_norm_dense, power_iteration,
                        project_g, project_sigma)
from .stft import (StftPlan, invert, kernel_field, modulate,
                   reproducing_kernel, stft, stft_adjoint, stft_direct,
                   translate)
from .tiles import Tile, TileSet, ball_tileset
from .uncertainty import (ConcentrationParams, InequalityReport,
                          check_cardinality_bound,
                          check_dispersion_cardinality, check_donoho_stark,
                          check_entropy, check_heisenberg,
                          check_joint_concentration, check_local_corollary,
                          check_local_uncertainty, check_orthonormal_sum,
                          check_small_set, check_support_bound,
                          check_support_bound_p, corollary_constant,
                          dispersion, heisenberg_constant,
                          local_uncertainty_constant, moment_norm_sq,
                          phase_space_entropy)

__all__ = [
    "__version__",
    "LatticeSignal", "PhaseSpaceField", "SupportBox", "TorusGrid",
    "phase_space_inner",
    "LatticeTfError", "InputError", "GridResolutionError",
    "ZeroWindowError", "NearOrthogonalWindowError", "TilePlacementError",
    "ProductFormError", "OrthonormalityError", "ConvergenceError",
    "default_grid_points", "fourier_lattice_to_torus",
    "fourier_torus_to_lattice", "plancherel_lattice", "resample_trig_rows",
    "ball_measure", "ball_fiber_sum_uncapped", "lattice_count",
    "unit_ball_volume",
    "ConcentrationOperator", "project_g", "project_sigma", "hs_norm_sq",
    "op_norm", "op_norm_dense", "power_iteration", "benedicks_constant",
    "StftPlan", "stft", "stft_direct", "stft_adjoint", "invert",
    "translate", "modulate", "reproducing_kernel", "kernel_field",
    "Tile", "TileSet", "ball_tileset",
    "InequalityReport", "ConcentrationParams", "dispersion",
    "phase_space_entropy", "moment_norm_sq", "heisenberg_constant",
    "local_uncertainty_constant", "corollary_constant",
    "check_orthonormal_sum", "check_donoho_stark", "check_small_set",
    "check_support_bound", "check_support_bound_p",
    "check_joint_concentration", "check_cardinality_bound",
    "check_dispersion_cardinality", "check_heisenberg",
    "check_local_uncertainty", "check_local_corollary", "check_entropy",
]
