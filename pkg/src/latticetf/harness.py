"""Randomized verification campaigns.

A campaign runs a set of named checks over freshly drawn random
instances (signals, windows, tile sets, orthonormal families).  Every
check is deterministic given the campaign seed: the generator for trial
``t`` of check ``c`` is seeded with ``[seed, t, id(c)]``, so results do
not depend on which other checks run, how trials are scheduled across
worker processes, or the order of assembly.

Random torus boxes are drawn with endpoints on the plan grid, so tile
measures coincide with their grid quadrature and the inequalities are
judged exactly in the sampled model rather than up to O(1/M) placement
error.  Fault injection (for exercising the failure path) subtracts
``scale * (|lhs| + |rhs| + 1)`` from each slack, which drives any
well-scaled check negative without touching the underlying math.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field as dataclass_field

import numpy as np

from .core import LatticeSignal, SupportBox
from .errors import InputError
from .stft import StftPlan, invert, kernel_field, stft
from .tiles import TileSet
from .uncertainty import (InequalityReport, check_cardinality_bound,
                          check_dispersion_cardinality, check_donoho_stark,
                          check_entropy, check_heisenberg,
                          check_joint_concentration, check_local_corollary,
                          check_local_uncertainty, check_orthonormal_sum,
                          check_small_set, check_support_bound,
                          check_support_bound_p, dispersion)

__all__ = [
    "CampaignConfig", "CampaignResult", "run_campaign", "checker_names",
    "apply_fault", "replay_bundle", "DEFAULT_MAX_HALF_WIDTH",
]

#: Largest signal/window half-widths drawn per dimension.
DEFAULT_MAX_HALF_WIDTH = {1: 6, 2: 3}


# ---------------------------------------------------------------------------
# random instance generation

def random_box(rng: np.random.Generator, dimension: int,
               max_half_width: int) -> SupportBox:
    return SupportBox(dimension, int(rng.integers(1, max_half_width + 1)))


def random_signal(rng: np.random.Generator, box: SupportBox,
                  kind: str | None = None) -> LatticeSignal:
    if kind is None:
        kind = rng.choice(["complex", "complex", "gaussian", "delta"])
    if kind == "complex":
        return LatticeSignal.random_complex(rng, box)
    if kind == "gaussian":
        width = float(rng.uniform(0.6, 1.0 + box.half_width))
        base = LatticeSignal.gaussian_sampled(box, width)
        phase = np.exp(2j * np.pi * rng.random(box.shape))
        return LatticeSignal(box, base.values * phase)
    at = tuple(int(v) for v in rng.integers(-box.half_width,
                                            box.half_width + 1,
                                            size=box.dimension))
    return LatticeSignal.delta(box.dimension, at, box.half_width)


def random_window(rng: np.random.Generator, box: SupportBox,
                  unit: bool = False) -> LatticeSignal:
    window = random_signal(rng, box)
    norm = window.norm()
    if norm < 1e-9:  # essentially impossible, but never hand back zero
        window = LatticeSignal.delta(box.dimension, None, box.half_width)
        norm = 1.0
    return window.scaled(1.0 / norm) if unit else window


def orthonormal_family(rng: np.random.Generator, box: SupportBox,
                       size: int) -> list[LatticeSignal]:
    """First ``size`` columns of a Haar-ish random unitary on the box."""
    if size > box.size:
        raise InputError(
            f"family of {size} exceeds the box dimension {box.size}")
    matrix = (rng.standard_normal((box.size, size))
              + 1j * rng.standard_normal((box.size, size)))
    q, _ = np.linalg.qr(matrix)
    return [LatticeSignal(box, q[:, j].reshape(box.shape))
            for j in range(size)]


def random_aligned_tileset(rng: np.random.Generator, out_box: SupportBox,
                           grid, max_tiles: int = 3,
                           max_len_nodes: int | None = None) -> TileSet:
    """Tiles with torus endpoints on the grid and rows inside the box."""
    points = grid.points_per_axis
    if max_len_nodes is None:
        max_len_nodes = points
    n = out_box.dimension
    count = int(rng.integers(1, max_tiles + 1))
    raw = []
    for _ in range(count):
        m = tuple(int(v) for v in rng.integers(-out_box.half_width,
                                               out_box.half_width + 1,
                                               size=n))
        lo, hi = [], []
        for _axis in range(n):
            start = int(rng.integers(0, points))
            length = int(rng.integers(1, max_len_nodes + 1))
            lo.append(start / points)
            hi.append((start + length) / points)  # may wrap; normalized
        raw.append((m, tuple(lo), tuple(hi)))
    return TileSet.from_tiles(n, raw)


def small_tileset(rng: np.random.Generator, out_box: SupportBox,
                  grid) -> TileSet:
    """An aligned tile set with total measure strictly below one."""
    quarter = max(1, grid.points_per_axis // 4)
    tiles = random_aligned_tileset(rng, out_box, grid, max_tiles=3,
                                   max_len_nodes=quarter)
    while tiles.measure() >= 0.999:
        quarter = max(1, quarter // 2)
        tiles = random_aligned_tileset(rng, out_box, grid, max_tiles=2,
                                       max_len_nodes=quarter)
    return tiles


def _random_plan(rng: np.random.Generator, config: "CampaignConfig"
                 ) -> StftPlan:
    dimension = int(rng.choice(config.dims))
    cap = config.max_half_width[dimension]
    f_box = random_box(rng, dimension, cap)
    g_box = random_box(rng, dimension, cap)
    return StftPlan(f_box, g_box)


# ---------------------------------------------------------------------------
# identity checks, reported in the same shape as the inequalities

def _identity_report(name: str, lhs: float, rhs: float, deviation: float,
                     tolerance: float, witness: dict,
                     notes: tuple[str, ...] = ()) -> InequalityReport:
    return InequalityReport(name=name, lhs=lhs, rhs=rhs, slack=-deviation,
                            tolerance=tolerance, witness=witness,
                            notes=notes)


def check_plancherel(f: LatticeSignal, g: LatticeSignal, plan: StftPlan,
                     tolerance: float = 1e-12) -> InequalityReport:
    """||V_g f|| = ||f|| ||g||, judged relatively."""
    transform = stft(f, g, plan)
    lhs = transform.norm()
    rhs = f.norm() * g.norm()
    deviation = abs(lhs - rhs) / max(rhs, 1e-300)
    return _identity_report(
        "plancherel", lhs, rhs, deviation, tolerance,
        {"signal_norm": f.norm(), "window_norm": g.norm(),
         "relative_deviation": deviation})


def check_orthogonality(f1, f2, g1, g2, plan: StftPlan,
                        tolerance: float = 1e-12) -> InequalityReport:
    """<V_{g1} f1, V_{g2} f2> = <f1, f2> <g2, g1> for unit inputs."""
    from .core import phase_space_inner
    parts = []
    for sig in (f1, f2, g1, g2):
        norm = sig.norm()
        if norm == 0:
            raise InputError("orthogonality check needs non-zero inputs")
        parts.append(sig.scaled(1.0 / norm))
    u1, u2, h1, h2 = parts
    left = phase_space_inner(stft(u1, h1, plan), stft(u2, h2, plan))
    right = u1.inner(u2) * h2.inner(h1)
    deviation = abs(left - right)
    return _identity_report(
        "orthogonality", abs(left), abs(right), deviation, tolerance,
        {"left_re": left.real, "left_im": left.imag,
         "right_re": right.real, "right_im": right.imag})


def check_inversion(f: LatticeSignal, g: LatticeSignal,
                    synthesis: LatticeSignal | None, plan: StftPlan,
                    tolerance: float = 1e-10) -> InequalityReport:
    """Round trip through the transform recovers f on its box."""
    transform = stft(f, g, plan)
    recovered = invert(transform, g, synthesis, plan)
    deviation = float(np.max(np.abs(recovered.values - f.values)))
    return _identity_report(
        "inversion", deviation, 0.0, deviation, tolerance,
        {"signal_norm": f.norm(), "window_norm": g.norm(),
         "distinct_synthesis": synthesis is not None})


def check_kernel_bound(g: LatticeSignal, pin, plan: StftPlan,
                       tolerance: float = 1e-12) -> InequalityReport:
    """|K_g(z', z)| <= 1 everywhere, with K_g(z, z) = 1 at the pin."""
    field = kernel_field(g, pin, plan)
    peak = float(field.norm_inf())
    m, w = pin
    at_pin = field.values[field.box.offset(m)]
    # nearest grid node to the pin frequency; exact when w is on the grid
    node = tuple(int(round(v * plan.grid.points_per_axis))
                 % plan.grid.points_per_axis for v in w)
    diag = at_pin[node]
    slack = 1.0 - peak
    return InequalityReport(
        name="kernel_bound", lhs=1.0, rhs=peak, slack=slack,
        tolerance=tolerance,
        witness={"pin_m": list(m), "pin_w": list(w),
                 "diagonal_re": float(diag.real),
                 "diagonal_im": float(diag.imag)})


def check_linf_bound(f: LatticeSignal, g: LatticeSignal, plan: StftPlan,
                     tolerance: float = 1e-12) -> InequalityReport:
    """sup |V_g f| <= ||f|| ||g||, pointwise Cauchy-Schwarz."""
    transform = stft(f, g, plan)
    lhs = f.norm() * g.norm()
    rhs = float(transform.norm_inf())
    return InequalityReport(
        name="linf_bound", lhs=lhs, rhs=rhs, slack=lhs - rhs,
        tolerance=tolerance,
        witness={"signal_norm": f.norm(), "window_norm": g.norm()})


def check_lp_bound(f: LatticeSignal, g: LatticeSignal, p: float,
                   plan: StftPlan, tolerance: float = 1e-8
                   ) -> InequalityReport:
    """||V_g f||_p <= ||f|| ||g|| for p >= 2 (interpolating 2 and infinity)."""
    if p < 2:
        raise InputError(f"p must be at least 2, got {p}")
    transform = stft(f, g, plan)
    lhs = f.norm() * g.norm()
    rhs = float(transform.norm_lp(p))
    notes = ()
    if p != int(p) or int(p) % 2:
        notes = ("grid quadrature of |V|^p is approximate for odd or "
                 "fractional p",)
    return InequalityReport(
        name="lp_bound", lhs=lhs, rhs=rhs, slack=lhs - rhs,
        tolerance=tolerance,
        witness={"p": p, "signal_norm": f.norm(), "window_norm": g.norm()},
        notes=notes)


# ---------------------------------------------------------------------------
# registry: generation + replay per check

def _serialize_signal(signal: LatticeSignal) -> dict:
    from .serialization import signal_to_dict
    return signal_to_dict(signal)


def _serialize_tiles(tiles: TileSet) -> dict:
    from .serialization import tileset_to_dict
    return tileset_to_dict(tiles)


def _bundle(plan: StftPlan, **parts) -> dict:
    bundle = {
        "dimension": plan.dimension,
        "signal_half_width": plan.signal_box.half_width,
        "window_half_width": plan.window_box.half_width,
        "grid_points": plan.grid.points_per_axis,
    }
    bundle.update(parts)
    return bundle


def _plan_from_bundle(bundle: dict) -> StftPlan:
    return StftPlan.for_half_widths(
        bundle["dimension"], bundle["signal_half_width"],
        bundle["window_half_width"], bundle["grid_points"])


def _signals_from_bundle(bundle: dict, key: str):
    from .serialization import signal_from_dict, tileset_from_dict
    value = bundle[key]
    if key == "sigma":
        return tileset_from_dict(value)
    if isinstance(value, list):
        return [signal_from_dict(v) for v in value]
    return signal_from_dict(value)


def _run_plancherel(rng, config):
    plan = _random_plan(rng, config)
    f = random_signal(rng, plan.signal_box)
    g = random_window(rng, plan.window_box)
    report = check_plancherel(f, g, plan)
    return report, _bundle(plan, signal=_serialize_signal(f),
                           window=_serialize_signal(g))


def _replay_plancherel(bundle):
    plan = _plan_from_bundle(bundle)
    return check_plancherel(_signals_from_bundle(bundle, "signal"),
                            _signals_from_bundle(bundle, "window"), plan)


def _run_orthogonality(rng, config):
    plan = _random_plan(rng, config)
    f1 = random_signal(rng, plan.signal_box)
    f2 = random_signal(rng, plan.signal_box)
    g1 = random_window(rng, plan.window_box)
    g2 = random_window(rng, plan.window_box)
    report = check_orthogonality(f1, f2, g1, g2, plan)
    return report, _bundle(plan, family=[_serialize_signal(s)
                                         for s in (f1, f2)],
                           windows=[_serialize_signal(s)
                                    for s in (g1, g2)])


def _replay_orthogonality(bundle):
    plan = _plan_from_bundle(bundle)
    f1, f2 = _signals_from_bundle(bundle, "family")
    from .serialization import signal_from_dict
    g1, g2 = [signal_from_dict(v) for v in bundle["windows"]]
    return check_orthogonality(f1, f2, g1, g2, plan)


def _run_inversion(rng, config):
    plan = _random_plan(rng, config)
    f = random_signal(rng, plan.signal_box)
    g = random_window(rng, plan.window_box)
    synthesis = None
    if rng.random() < 0.5:
        for _ in range(8):  # redraw if nearly orthogonal to the window
            candidate = random_window(rng, plan.window_box)
            pairing = abs(candidate.inner(g))
            if pairing > 1e-3 * candidate.norm() * g.norm():
                synthesis = candidate
                break
    report = check_inversion(f, g, synthesis, plan)
    parts = {"signal": _serialize_signal(f), "window": _serialize_signal(g)}
    if synthesis is not None:
        parts["synthesis"] = _serialize_signal(synthesis)
    return report, _bundle(plan, **parts)


def _replay_inversion(bundle):
    plan = _plan_from_bundle(bundle)
    synthesis = None
    if "synthesis" in bundle:
        from .serialization import signal_from_dict
        synthesis = signal_from_dict(bundle["synthesis"])
    return check_inversion(_signals_from_bundle(bundle, "signal"),
                           _signals_from_bundle(bundle, "window"),
                           synthesis, plan)


def _random_pin(rng, plan):
    m = tuple(int(v) for v in rng.integers(
        -plan.signal_box.half_width, plan.signal_box.half_width + 1,
        size=plan.dimension))
    points = plan.grid.points_per_axis
    w = tuple(float(int(v)) / points
              for v in rng.integers(0, points, size=plan.dimension))
    return m, w


def _run_kernel_bound(rng, config):
    plan = _random_plan(rng, config)
    g = random_window(rng, plan.window_box)
    pin = _random_pin(rng, plan)
    report = check_kernel_bound(g, pin, plan)
    return report, _bundle(plan, window=_serialize_signal(g),
                           pin_m=list(pin[0]), pin_w=list(pin[1]))


def _replay_kernel_bound(bundle):
    plan = _plan_from_bundle(bundle)
    pin = (tuple(bundle["pin_m"]), tuple(bundle["pin_w"]))
    return check_kernel_bound(_signals_from_bundle(bundle, "window"),
                              pin, plan)


def _run_linf_bound(rng, config):
    plan = _random_plan(rng, config)
    f = random_signal(rng, plan.signal_box)
    g = random_window(rng, plan.window_box)
    report = check_linf_bound(f, g, plan)
    return report, _bundle(plan, signal=_serialize_signal(f),
                           window=_serialize_signal(g))


def _replay_linf_bound(bundle):
    plan = _plan_from_bundle(bundle)
    return check_linf_bound(_signals_from_bundle(bundle, "signal"),
                            _signals_from_bundle(bundle, "window"), plan)


def _run_lp_bound(rng, config):
    plan = _random_plan(rng, config)
    f = random_signal(rng, plan.signal_box)
    g = random_window(rng, plan.window_box)
    p = float(rng.choice([4.0, 4.0, 6.0, 3.0]))
    report = check_lp_bound(f, g, p, plan)
    return report, _bundle(plan, signal=_serialize_signal(f),
                           window=_serialize_signal(g), p=p)


def _replay_lp_bound(bundle):
    plan = _plan_from_bundle(bundle)
    return check_lp_bound(_signals_from_bundle(bundle, "signal"),
                          _signals_from_bundle(bundle, "window"),
                          bundle["p"], plan)


def _run_orthonormal_sum(rng, config):
    plan = _random_plan(rng, config)
    size = int(rng.integers(1, min(6, plan.signal_box.size) + 1))
    family = orthonormal_family(rng, plan.signal_box, size)
    g = random_window(rng, plan.window_box)
    sigma = random_aligned_tileset(rng, plan.output_box, plan.grid)
    report = check_orthonormal_sum(family, g, sigma, plan)
    return report, _bundle(plan,
                           family=[_serialize_signal(s) for s in family],
                           window=_serialize_signal(g),
                           sigma=_serialize_tiles(sigma))


def _replay_orthonormal_sum(bundle):
    plan = _plan_from_bundle(bundle)
    return check_orthonormal_sum(_signals_from_bundle(bundle, "family"),
                                 _signals_from_bundle(bundle, "window"),
                                 _signals_from_bundle(bundle, "sigma"), plan)


def _run_donoho_stark(rng, config):
    plan = _random_plan(rng, config)
    f = random_signal(rng, plan.signal_box)
    g = random_window(rng, plan.window_box)
    out = plan.output_box
    rows = [m for m in out.indices() if rng.random() < 0.6]
    if not rows:
        rows = [(0,) * plan.dimension]
    points = plan.grid.points_per_axis
    start = int(rng.integers(0, points))
    length = int(rng.integers(points // 4, points + 1))
    boxes = [(tuple([start / points] * plan.dimension),
              tuple([(start + length) / points] * plan.dimension))]
    sigma = TileSet.product(plan.dimension, rows, boxes)
    transform = stft(f, g, plan)
    from .uncertainty import _masked_norms
    inside, _, total = _masked_norms(transform, sigma)
    fraction = (inside / total) ** 2 if total > 0 else 0.0
    if fraction <= 0.0:
        sigma = TileSet.product(plan.dimension, list(out.indices()),
                                [((0.0,) * plan.dimension,
                                  (1.0,) * plan.dimension)])
        fraction = 1.0
    eps = 1.0 - fraction * (1.0 - 1e-9)  # hypothesis holds by construction
    report = check_donoho_stark(f, g, sigma, eps, plan)
    return report, _bundle(plan, signal=_serialize_signal(f),
                           window=_serialize_signal(g),
                           sigma=_serialize_tiles(sigma), eps=eps)


def _replay_donoho_stark(bundle):
    plan = _plan_from_bundle(bundle)
    return check_donoho_stark(_signals_from_bundle(bundle, "signal"),
                              _signals_from_bundle(bundle, "window"),
                              _signals_from_bundle(bundle, "sigma"),
                              bundle["eps"], plan)


def _run_small_set(rng, config):
    plan = _random_plan(rng, config)
    f = random_signal(rng, plan.signal_box)
    g = random_window(rng, plan.window_box)
    sigma = small_tileset(rng, plan.output_box, plan.grid)
    report = check_small_set(f, g, sigma, plan)
    return report, _bundle(plan, signal=_serialize_signal(f),
                           window=_serialize_signal(g),
                           sigma=_serialize_tiles(sigma))


def _replay_small_set(bundle):
    plan = _plan_from_bundle(bundle)
    return check_small_set(_signals_from_bundle(bundle, "signal"),
                           _signals_from_bundle(bundle, "window"),
                           _signals_from_bundle(bundle, "sigma"), plan)


def _run_support_bound(rng, config):
    plan = _random_plan(rng, config)
    f = random_signal(rng, plan.signal_box)
    g = random_window(rng, plan.window_box)
    sigma = random_aligned_tileset(rng, plan.output_box, plan.grid)
    report = check_support_bound(f, g, sigma, plan)
    return report, _bundle(plan, signal=_serialize_signal(f),
                           window=_serialize_signal(g),
                           sigma=_serialize_tiles(sigma))


def _replay_support_bound(bundle):
    plan = _plan_from_bundle(bundle)
    return check_support_bound(_signals_from_bundle(bundle, "signal"),
                               _signals_from_bundle(bundle, "window"),
                               _signals_from_bundle(bundle, "sigma"), plan)


def _run_support_bound_p(rng, config):
    plan = _random_plan(rng, config)
    f = random_signal(rng, plan.signal_box)
    g = random_window(rng, plan.window_box)
    sigma = random_aligned_tileset(rng, plan.output_box, plan.grid)
    p = float(rng.choice([3.0, 4.0, 8.0]))
    report = check_support_bound_p(f, g, sigma, p, plan)
    return report, _bundle(plan, signal=_serialize_signal(f),
                           window=_serialize_signal(g),
                           sigma=_serialize_tiles(sigma), p=p)


def _replay_support_bound_p(bundle):
    plan = _plan_from_bundle(bundle)
    return check_support_bound_p(_signals_from_bundle(bundle, "signal"),
                                 _signals_from_bundle(bundle, "window"),
                                 _signals_from_bundle(bundle, "sigma"),
                                 bundle["p"], plan)


def _run_joint_concentration(rng, config):
    plan = _random_plan(rng, config)
    f = random_signal(rng, plan.signal_box)
    g = random_window(rng, plan.window_box)
    indices = list(plan.signal_box.indices())
    if rng.random() < 0.5:
        lattice_set = indices  # eps_E = 0
    else:
        ranked = sorted(indices, key=lambda m: -abs(f.value_at(m)))
        keep = max(1, len(ranked) * 3 // 4)
        lattice_set = ranked[:keep]
    sigma = random_aligned_tileset(rng, plan.output_box, plan.grid)
    report = check_joint_concentration(f, g, lattice_set, sigma, plan)
    return report, _bundle(plan, signal=_serialize_signal(f),
                           window=_serialize_signal(g),
                           sigma=_serialize_tiles(sigma),
                           lattice_set=[list(m) for m in lattice_set])


def _replay_joint_concentration(bundle):
    plan = _plan_from_bundle(bundle)
    lattice_set = [tuple(m) for m in bundle["lattice_set"]]
    return check_joint_concentration(
        _signals_from_bundle(bundle, "signal"),
        _signals_from_bundle(bundle, "window"),
        lattice_set, _signals_from_bundle(bundle, "sigma"), plan)


def _run_cardinality(rng, config):
    plan = _random_plan(rng, config)
    size = int(rng.integers(1, min(6, plan.signal_box.size) + 1))
    family = orthonormal_family(rng, plan.signal_box, size)
    g = random_window(rng, plan.window_box, unit=True)
    top = plan.output_box.half_width
    radius = float(rng.uniform(0.6, min(2.5, top)))
    eps = float(rng.uniform(0.2, 0.7))
    report = check_cardinality_bound(family, g, radius, eps, plan)
    return report, _bundle(plan,
                           family=[_serialize_signal(s) for s in family],
                           window=_serialize_signal(g),
                           radius=radius, eps=eps)


def _replay_cardinality(bundle):
    plan = _plan_from_bundle(bundle)
    return check_cardinality_bound(_signals_from_bundle(bundle, "family"),
                                   _signals_from_bundle(bundle, "window"),
                                   bundle["radius"], bundle["eps"], plan)


def _run_dispersion_cardinality(rng, config):
    plan = _random_plan(rng, config)
    size = int(rng.integers(1, min(4, plan.signal_box.size) + 1))
    family = orthonormal_family(rng, plan.signal_box, size)
    g = random_window(rng, plan.window_box, unit=True)
    s = float(rng.choice([1.0, 2.0]))
    dispersions = [dispersion(stft(sig, g, plan), s) for sig in family]
    bound = float(np.median(dispersions))
    report = check_dispersion_cardinality(family, g, s, bound, plan)
    return report, _bundle(plan,
                           family=[_serialize_signal(s_) for s_ in family],
                           window=_serialize_signal(g), s=s, bound=bound)


def _replay_dispersion_cardinality(bundle):
    plan = _plan_from_bundle(bundle)
    return check_dispersion_cardinality(
        _signals_from_bundle(bundle, "family"),
        _signals_from_bundle(bundle, "window"),
        bundle["s"], bundle["bound"], plan)


def _run_heisenberg(rng, config):
    plan = _random_plan(rng, config)
    f = random_signal(rng, plan.signal_box)
    g = random_window(rng, plan.window_box)
    s = float(rng.choice([0.5, 1.0, 2.0]))
    report = check_heisenberg(f, g, s, plan)
    return report, _bundle(plan, signal=_serialize_signal(f),
                           window=_serialize_signal(g), s=s)


def _replay_heisenberg(bundle):
    plan = _plan_from_bundle(bundle)
    return check_heisenberg(_signals_from_bundle(bundle, "signal"),
                            _signals_from_bundle(bundle, "window"),
                            bundle["s"], plan)


def _run_local_uncertainty(rng, config):
    plan = _random_plan(rng, config)
    f = random_signal(rng, plan.signal_box)
    g = random_window(rng, plan.window_box)
    s = float(rng.choice([0.5, 1.0, 2.0]))
    sigma = random_aligned_tileset(rng, plan.output_box, plan.grid)
    report = check_local_uncertainty(f, g, s, sigma, plan)
    return report, _bundle(plan, signal=_serialize_signal(f),
                           window=_serialize_signal(g),
                           sigma=_serialize_tiles(sigma), s=s)


def _replay_local_uncertainty(bundle):
    plan = _plan_from_bundle(bundle)
    return check_local_uncertainty(_signals_from_bundle(bundle, "signal"),
                                   _signals_from_bundle(bundle, "window"),
                                   bundle["s"],
                                   _signals_from_bundle(bundle, "sigma"),
                                   plan)


def _run_local_corollary(rng, config):
    plan = _random_plan(rng, config)
    f = random_signal(rng, plan.signal_box)
    g = random_window(rng, plan.window_box)
    s = float(rng.choice([0.5, 1.0, 2.0]))
    report = check_local_corollary(f, g, s, plan)
    return report, _bundle(plan, signal=_serialize_signal(f),
                           window=_serialize_signal(g), s=s)


def _replay_local_corollary(bundle):
    plan = _plan_from_bundle(bundle)
    return check_local_corollary(_signals_from_bundle(bundle, "signal"),
                                 _signals_from_bundle(bundle, "window"),
                                 bundle["s"], plan)


def _run_entropy(rng, config):
    plan = _random_plan(rng, config)
    f = random_signal(rng, plan.signal_box)
    g = random_window(rng, plan.window_box)
    report = check_entropy(f, g, plan)
    return report, _bundle(plan, signal=_serialize_signal(f),
                           window=_serialize_signal(g))


def _replay_entropy(bundle):
    plan = _plan_from_bundle(bundle)
    return check_entropy(_signals_from_bundle(bundle, "signal"),
                         _signals_from_bundle(bundle, "window"), plan)


@dataclass(frozen=True)
class CheckerEntry:
    name: str
    checker_id: int
    run: callable
    replay: callable


_REGISTRY: dict[str, CheckerEntry] = {}


def _register(name: str, run, replay):
    _REGISTRY[name] = CheckerEntry(name, len(_REGISTRY), run, replay)


_register("plancherel", _run_plancherel, _replay_plancherel)
_register("orthogonality", _run_orthogonality, _replay_orthogonality)
_register("inversion", _run_inversion, _replay_inversion)
_register("kernel_bound", _run_kernel_bound, _replay_kernel_bound)
_register("linf_bound", _run_linf_bound, _replay_linf_bound)
_register("lp_bound", _run_lp_bound, _replay_lp_bound)
_register("orthonormal_sum", _run_orthonormal_sum, _replay_orthonormal_sum)
_register("donoho_stark", _run_donoho_stark, _replay_donoho_stark)
_register("small_set", _run_small_set, _replay_small_set)
_register("support_bound", _run_support_bound, _replay_support_bound)
_register("support_bound_p", _run_support_bound_p, _replay_support_bound_p)
_register("joint_concentration", _run_joint_concentration,
          _replay_joint_concentration)
_register("cardinality", _run_cardinality, _replay_cardinality)
_register("dispersion_cardinality", _run_dispersion_cardinality,
          _replay_dispersion_cardinality)
_register("heisenberg", _run_heisenberg, _replay_heisenberg)
_register("local_uncertainty", _run_local_uncertainty,
          _replay_local_uncertainty)
_register("local_corollary", _run_local_corollary, _replay_local_corollary)
_register("entropy", _run_entropy, _replay_entropy)


def checker_names() -> list[str]:
    return list(_REGISTRY)


# ---------------------------------------------------------------------------
# campaign

def apply_fault(report: InequalityReport, scale: float) -> InequalityReport:
    """Corrupt a report's slack; scales with the check's own magnitudes."""
    if scale == 0.0:
        return report
    shift = scale * (abs(report.lhs) + abs(report.rhs) + 1.0)
    witness = dict(report.witness)
    witness["fault_scale"] = scale
    witness["unfaulted_slack"] = report.slack
    return InequalityReport(
        name=report.name, lhs=report.lhs, rhs=report.rhs,
        slack=report.slack - shift, tolerance=report.tolerance,
        witness=witness, status=report.status,
        notes=report.notes + ("slack corrupted by injected fault",))


@dataclass(frozen=True)
class CampaignConfig:
    seed: int = 0
    trials: int = 100
    checkers: tuple[str, ...] = ()
    dims: tuple[int, ...] = (1,)
    max_half_width: dict = dataclass_field(
        default_factory=lambda: dict(DEFAULT_MAX_HALF_WIDTH))
    fault_scale: float = 0.0

    def __post_init__(self):
        if self.seed < 0:
            raise InputError(f"seed must be non-negative, got {self.seed}")
        if self.trials < 1:
            raise InputError(f"trials must be positive, got {self.trials}")
        names = self.checkers or tuple(_REGISTRY)
        unknown = [n for n in names if n not in _REGISTRY]
        if unknown:
            raise InputError(
                f"unknown checkers {unknown}; known: {list(_REGISTRY)}")
        object.__setattr__(self, "checkers", tuple(names))
        for d in self.dims:
            if d not in self.max_half_width:
                raise InputError(f"no half-width cap given for dimension {d}")
        if self.fault_scale < 0:
            raise InputError("fault scale must be non-negative")


@dataclass(frozen=True)
class TrialRecord:
    trial: int
    checker: str
    report: InequalityReport
    bundle: dict


@dataclass(frozen=True)
class CampaignResult:
    config: CampaignConfig
    records: tuple[TrialRecord, ...]

    @property
    def reports(self) -> list[InequalityReport]:
        return [rec.report for rec in self.records]

    @property
    def failures(self) -> list[TrialRecord]:
        return [rec for rec in self.records if rec.report.failed]

    def summary_lines(self) -> list[str]:
        lines = []
        for name in self.config.checkers:
            group = [r.report for r in self.records if r.checker == name]
            failed = sum(1 for rep in group if rep.failed)
            skipped = sum(1 for rep in group
                          if rep.status == "not-applicable")
            worst = min((rep.slack for rep in group
                         if rep.status != "not-applicable"),
                        default=float("nan"))
            state = "FAIL" if failed else "ok"
            lines.append(
                f"{name:24s} {state:4s} trials={len(group)} "
                f"failures={failed} not_applicable={skipped} "
                f"worst_slack={worst:.3e}")
        return lines


def _trial_rng(seed: int, trial: int, checker_id: int) -> np.random.Generator:
    # keyed independently per (trial, check): results are stable under
    # subsetting the checker list or reordering the schedule
    return np.random.default_rng([seed, trial, checker_id])


def run_trial(config: CampaignConfig, trial: int) -> list[TrialRecord]:
    records = []
    for name in config.checkers:
        entry = _REGISTRY[name]
        rng = _trial_rng(config.seed, trial, entry.checker_id)
        report, bundle = entry.run(rng, config)
        report = apply_fault(report, config.fault_scale)
        bundle.update({
            "checker": name,
            "trial": trial,
            "seed": [config.seed, trial, entry.checker_id],
            "fault_scale": config.fault_scale,
        })
        witness = dict(report.witness)
        witness.setdefault("seed", bundle["seed"])
        witness.setdefault("trial", trial)
        report = InequalityReport(
            name=report.name, lhs=report.lhs, rhs=report.rhs,
            slack=report.slack, tolerance=report.tolerance,
            witness=witness, status=report.status, notes=report.notes)
        records.append(TrialRecord(trial, name, report, bundle))
    return records


def _run_trial_star(args) -> list[TrialRecord]:
    return run_trial(*args)


def run_campaign(config: CampaignConfig, jobs: int = 1) -> CampaignResult:
    """Run all trials; assembly order is (trial, checker) regardless of jobs."""
    tasks = [(config, t) for t in range(config.trials)]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            per_trial = list(pool.map(_run_trial_star, tasks,
                                      chunksize=max(1, config.trials
                                                    // (4 * jobs))))
    else:
        per_trial = [run_trial(*task) for task in tasks]
    records = [rec for trial_records in per_trial for rec in trial_records]
    return CampaignResult(config, tuple(records))


def replay_bundle(bundle: dict) -> InequalityReport:
    """Re-run the check recorded in a witness bundle."""
    name = bundle.get("checker")
    if name not in _REGISTRY:
        raise InputError(f"witness names unknown checker {name!r}")
    report = _REGISTRY[name].replay(bundle)
    report = apply_fault(report, float(bundle.get("fault_scale", 0.0)))
    witness = dict(report.witness)
    if "seed" in bundle:
        witness.setdefault("seed", bundle["seed"])
    if "trial" in bundle:
        witness.setdefault("trial", bundle["trial"])
    return InequalityReport(
        name=report.name, lhs=report.lhs, rhs=report.rhs,
        slack=report.slack, tolerance=report.tolerance,
        witness=witness, status=report.status, notes=report.notes)
