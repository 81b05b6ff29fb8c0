"""Command-line interface.

Subcommands:

* ``stft``      transform a signal, write samples as CSV (+ metadata)
* ``invert``    reconstruct a signal from transform samples
* ``verify``    randomized inequality campaign; exit 1 on any failure
* ``operator``  concentration-operator norms and the inversion constant
* ``constants`` sharp constants of the additive and local inequalities
* ``count``     lattice points and phase-space measure of a ball

Exit codes: 0 success, 1 verification failure, 2 bad input, 3 iteration
did not converge.  Flags override config-file values, which override
built-in defaults; the campaign seed falls back to the LATTICETF_SEED
environment variable.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from . import __version__
from .core import PhaseSpaceField, SupportBox, TorusGrid
from .errors import ConvergenceError, InputError, LatticeTfError
from .geometry import (ball_fiber_sum_uncapped, ball_measure, lattice_count,
                       unit_ball_volume)
from .harness import (CampaignConfig, checker_names, replay_bundle,
                      run_campaign)
from .operators import (ConcentrationOperator, benedicks_constant,
                        hs_norm_sq, op_norm_dense, power_iteration)
from .serialization import (dumps_deterministic, jsonable, load_signal,
                            load_tileset, reports_to_json, save_signal,
                            write_field_csv, write_reports_csv)
from .stft import StftPlan, invert, stft
from .uncertainty import (corollary_constant, heisenberg_constant,
                          local_uncertainty_constant)

__all__ = ["main"]


def _default_seed() -> int:
    raw = os.environ.get("LATTICETF_SEED", "0")
    try:
        return int(raw)
    except ValueError as exc:
        raise InputError(
            f"LATTICETF_SEED must be an integer, got {raw!r}") from exc


def _load_config(path: str | None) -> dict:
    if not path:
        return {}
    try:
        with open(path, "r", encoding="utf-8") as handle:
            obj = json.load(handle)
    except FileNotFoundError as exc:
        raise InputError(f"config file not found: {path}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"config file {path} is not valid JSON: "
                         f"{exc}") from exc
    if not isinstance(obj, dict):
        raise InputError("config file must hold a JSON object")
    return obj


def _emit(document: dict, out: str | None):
    text = dumps_deterministic(document)
    if out:
        with open(out, "w", encoding="utf-8") as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------------------
# stft / invert

def _plan_from_args(signal_box, window_box, grid_points) -> StftPlan:
    grid = None
    if grid_points:
        grid = TorusGrid(signal_box.dimension, grid_points)
    return StftPlan(signal_box, window_box, grid)


def cmd_stft(args) -> int:
    signal = load_signal(args.signal)
    window = load_signal(args.window)
    plan = _plan_from_args(signal.box, window.box, args.grid_points)
    field = stft(signal, window, plan)
    write_field_csv(field, args.out)
    from .serialization import signal_to_dict
    meta = {
        "dimension": plan.dimension,
        "signal_half_width": plan.signal_box.half_width,
        "window_half_width": plan.window_box.half_width,
        "grid_points": plan.grid.points_per_axis,
        "window": signal_to_dict(window),
    }
    with open(args.out + ".meta.json", "w", encoding="utf-8") as handle:
        handle.write(dumps_deterministic(meta))
    if args.plot:
        from .plots import save_magnitude_heatmap
        save_magnitude_heatmap(field, args.plot)
    sys.stdout.write(
        f"wrote {field.box.size * field.grid.size} samples to {args.out}\n")
    return 0


def _read_field_csv(path: str, box: SupportBox, grid: TorusGrid
                    ) -> PhaseSpaceField:
    expected = box.size * grid.size
    values = np.empty(expected, dtype=np.complex128)
    with open(path, "r", encoding="utf-8") as handle:
        header = handle.readline()
        if not header.startswith("m0"):
            raise InputError(f"{path} does not look like transform CSV "
                             "(missing m0 header)")
        count = 0
        for line in handle:
            line = line.strip()
            if not line:
                continue
            if count >= expected:
                raise InputError(f"{path} holds more than the expected "
                                 f"{expected} samples")
            cells = line.split(",")
            if len(cells) != 2 * box.dimension + 2:
                raise InputError(f"{path} line {count + 2} has "
                                 f"{len(cells)} fields, expected "
                                 f"{2 * box.dimension + 2}")
            values[count] = complex(float(cells[-2]), float(cells[-1]))
            count += 1
    if count != expected:
        raise InputError(f"{path} holds {count} samples, expected "
                         f"{expected} for this geometry")
    return PhaseSpaceField(box, grid, values.reshape(box.shape + grid.shape))


def cmd_invert(args) -> int:
    meta_path = args.meta or args.field + ".meta.json"
    try:
        with open(meta_path, "r", encoding="utf-8") as handle:
            meta = json.load(handle)
    except FileNotFoundError as exc:
        raise InputError(f"metadata file not found: {meta_path}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"{meta_path} is not valid JSON: {exc}") from exc
    from .serialization import signal_from_dict
    for key in ("dimension", "signal_half_width", "window_half_width",
                "grid_points", "window"):
        if key not in meta:
            raise InputError(f"metadata is missing required field '{key}'")
    window = signal_from_dict(meta["window"])
    plan = StftPlan.for_half_widths(
        meta["dimension"], meta["signal_half_width"],
        meta["window_half_width"], meta["grid_points"])
    field = _read_field_csv(args.field, plan.output_box, plan.grid)
    synthesis = load_signal(args.synthesis) if args.synthesis else None
    recovered = invert(field, window, synthesis, plan)
    save_signal(recovered, args.out)
    sys.stdout.write(f"wrote reconstruction to {args.out}\n")
    return 0


# ---------------------------------------------------------------------------
# verify

def _parse_int_list(text: str, what: str) -> tuple[int, ...]:
    try:
        values = tuple(int(part) for part in text.split(",") if part)
    except ValueError as exc:
        raise InputError(f"{what} must be comma-separated integers, "
                         f"got {text!r}") from exc
    if not values:
        raise InputError(f"{what} must not be empty")
    return values


def cmd_verify(args) -> int:
    if args.replay:
        try:
            with open(args.replay, "r", encoding="utf-8") as handle:
                bundle = json.load(handle)
        except FileNotFoundError as exc:
            raise InputError(f"witness file not found: "
                             f"{args.replay}") from exc
        except json.JSONDecodeError as exc:
            raise InputError(f"{args.replay} is not valid JSON: "
                             f"{exc}") from exc
        report = replay_bundle(bundle)
        sys.stdout.write(dumps_deterministic(report.to_dict()))
        return 0 if report.passed else 1

    checkers = tuple(part for part in (args.checkers or "").split(",")
                     if part) or ()
    dims = _parse_int_list(args.dims, "--dims")
    caps = {1: args.max_half_width, 2: args.max_half_width_2d}
    for d in dims:
        if d not in caps:
            caps[d] = max(1, args.max_half_width_2d)
    config = CampaignConfig(
        seed=args.seed, trials=args.trials, checkers=checkers,
        dims=dims, max_half_width=caps, fault_scale=args.fault_scale)
    result = run_campaign(config, jobs=args.jobs)

    for line in result.summary_lines():
        sys.stdout.write(line + "\n")
    failures = result.failures
    header = {
        "seed": config.seed,
        "trials": config.trials,
        "checkers": list(config.checkers),
        "dims": list(config.dims),
        "max_half_width": {str(k): v for k, v in sorted(caps.items())},
        "fault_scale": config.fault_scale,
        "version": __version__,
    }
    if args.out:
        text = reports_to_json(result.reports, header)
        with open(args.out, "w", encoding="utf-8") as handle:
            handle.write(text)
    if args.csv:
        write_reports_csv(result.reports, args.csv)
    if args.plot:
        from .plots import save_slack_histograms
        save_slack_histograms(result.reports, args.plot)
    if failures:
        witness_dir = args.witness_dir
        if not witness_dir:
            base = os.path.dirname(args.out) if args.out else "."
            witness_dir = os.path.join(base or ".", "witnesses")
        os.makedirs(witness_dir, exist_ok=True)
        for record in failures:
            name = f"witness_{record.checker}_t{record.trial}.json"
            with open(os.path.join(witness_dir, name), "w",
                      encoding="utf-8") as handle:
                handle.write(dumps_deterministic(record.bundle))
        sys.stdout.write(
            f"FAIL: {len(failures)} of {len(result.records)} checks "
            f"failed; witnesses in {witness_dir}\n")
        return 1
    sys.stdout.write(
        f"ok: all {len(result.records)} checks passed\n")
    return 0


# ---------------------------------------------------------------------------
# operator / constants / count

def cmd_operator(args) -> int:
    window = load_signal(args.window)
    sigma = load_tileset(args.sigma)
    signal_half = args.signal_half_width
    if signal_half is None:
        signal_half = window.box.half_width
    plan = StftPlan.for_half_widths(window.dimension, signal_half,
                                    window.box.half_width,
                                    args.grid_points or None)
    op = ConcentrationOperator(window, sigma, plan)
    info = power_iteration(op, tol=args.tol, max_iter=args.max_iter,
                           seed=args.seed)
    hs = hs_norm_sq(op)
    document = {
        "op_norm": info.value,
        "eigenvalue": info.eigenvalue,
        "iterations": info.iterations,
        "residual": info.residual,
        "hs_norm": float(np.sqrt(hs)),
        "hs_norm_sq": hs,
        "sigma_measure": sigma.measure(),
        "sigma_grid_measure": sigma.grid_measure(plan.grid),
    }
    if args.dense:
        dense = op_norm_dense(op)
        document["op_norm_dense"] = dense
        document["dense_gap"] = abs(dense - info.value)
    if info.value < 1.0 - args.gap_floor:
        document["inversion_constant"] = benedicks_constant(
            op, norm_value=info.value, gap_floor=args.gap_floor)
    else:
        document["inversion_constant"] = None
        document["note"] = ("operator norm is within the gap floor of 1; "
                            "no stable inversion constant")
    _emit(document, args.out)
    return 0


def cmd_constants(args) -> int:
    heis = heisenberg_constant(args.s, args.dim)
    local = local_uncertainty_constant(args.s, args.dim)
    corollary = corollary_constant(args.s, args.dim, args.r_max)
    document = {
        "s": args.s,
        "dimension": args.dim,
        "heisenberg_constant": heis.value,
        "optimal_eps": heis.eps0,
        "local_constant": local.value,
        "moment_lower_constant": corollary.value,
        "split_radius": corollary.split_radius,
    }
    _emit(document, args.out)
    return 0


def cmd_count(args) -> int:
    document = {
        "radius": args.radius,
        "dimension": args.dim,
        "lattice_count": lattice_count(args.radius, args.dim),
        "ball_measure": ball_measure(args.radius, args.dim,
                                     args.quad_points),
        "fiber_sum_uncapped": ball_fiber_sum_uncapped(args.radius, args.dim),
        "unit_ball_volume": unit_ball_volume(args.dim),
    }
    _emit(document, args.out)
    return 0


# ---------------------------------------------------------------------------
# parser

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="latticetf",
        description="Short-time transforms on the integer lattice and "
                    "verification of their uncertainty inequalities.")
    parser.add_argument("--version", action="version",
                        version=f"%(prog)s {__version__}")
    parser.add_argument("--config", default=None,
                        help="JSON file of default option values")
    sub = parser.add_subparsers(dest="command", required=True)

    p_stft = sub.add_parser("stft", help="transform a signal")
    p_stft.add_argument("--signal", required=True, help="signal JSON file")
    p_stft.add_argument("--window", required=True, help="window JSON file")
    p_stft.add_argument("--grid-points", type=int, default=0,
                        help="torus nodes per axis (default: from plan)")
    p_stft.add_argument("--out", required=True, help="output CSV path")
    p_stft.add_argument("--plot", default=None,
                        help="write |V| heatmap SVG here (dimension 1)")
    p_stft.set_defaults(func=cmd_stft)

    p_inv = sub.add_parser("invert", help="reconstruct from samples")
    p_inv.add_argument("--field", required=True, help="transform CSV path")
    p_inv.add_argument("--meta", default=None,
                       help="metadata path (default: <field>.meta.json)")
    p_inv.add_argument("--synthesis", default=None,
                       help="synthesis window JSON (default: analysis)")
    p_inv.add_argument("--out", required=True, help="output signal JSON")
    p_inv.set_defaults(func=cmd_invert)

    p_ver = sub.add_parser("verify", help="randomized inequality campaign")
    p_ver.add_argument("--trials", type=int, default=100)
    p_ver.add_argument("--seed", type=int, default=None)
    p_ver.add_argument("--checkers", default="",
                       help="comma-separated subset (default: all); "
                            f"known: {','.join(checker_names())}")
    p_ver.add_argument("--dims", default="1",
                       help="comma-separated dimensions (default: 1)")
    p_ver.add_argument("--max-half-width", type=int, default=6,
                       help="largest half-width drawn in dimension 1")
    p_ver.add_argument("--max-half-width-2d", type=int, default=3,
                       help="largest half-width drawn in dimension 2+")
    p_ver.add_argument("--fault-scale", type=float, default=0.0,
                       help="corrupt every slack by this relative amount")
    p_ver.add_argument("--jobs", type=int, default=1,
                       help="worker processes (output independent of this)")
    p_ver.add_argument("--out", default=None, help="write JSON report here")
    p_ver.add_argument("--csv", default=None, help="write CSV report here")
    p_ver.add_argument("--plot", default=None,
                       help="write slack histogram SVG here")
    p_ver.add_argument("--witness-dir", default=None,
                       help="directory for failure witnesses")
    p_ver.add_argument("--replay", default=None,
                       help="re-run a single witness file and exit")
    p_ver.set_defaults(func=cmd_verify)

    p_op = sub.add_parser("operator",
                          help="concentration operator norms")
    p_op.add_argument("--window", required=True, help="window JSON file")
    p_op.add_argument("--sigma", required=True, help="tile-set JSON file")
    p_op.add_argument("--signal-half-width", type=int, default=None,
                      help="domain half-width (default: window's)")
    p_op.add_argument("--grid-points", type=int, default=0)
    p_op.add_argument("--tol", type=float, default=1e-10)
    p_op.add_argument("--max-iter", type=int, default=1000)
    p_op.add_argument("--seed", type=int, default=None)
    p_op.add_argument("--gap-floor", type=float, default=1e-9)
    p_op.add_argument("--dense", action="store_true",
                      help="also assemble the dense matrix and compare")
    p_op.add_argument("--out", default=None)
    p_op.set_defaults(func=cmd_operator)

    p_const = sub.add_parser("constants",
                             help="sharp constants of the inequalities")
    p_const.add_argument("--s", type=float, default=1.0)
    p_const.add_argument("--dim", type=int, default=1)
    p_const.add_argument("--r-max", type=float, default=8.0)
    p_const.add_argument("--out", default=None)
    p_const.set_defaults(func=cmd_constants)

    p_count = sub.add_parser("count",
                             help="ball counts and phase-space measure")
    p_count.add_argument("--radius", type=float, required=True)
    p_count.add_argument("--dim", type=int, default=1)
    p_count.add_argument("--quad-points", type=int, default=128)
    p_count.add_argument("--out", default=None)
    p_count.set_defaults(func=cmd_count)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        config = _load_config(args.config)
        if config:
            for key, value in config.items():
                attr = key.replace("-", "_")
                # flags given on the command line win; config only fills
                # values the parser left at its defaults
                if hasattr(args, attr) and _was_defaulted(
                        parser, argv, key, attr):
                    setattr(args, attr, value)
        if getattr(args, "seed", None) is None and hasattr(args, "seed"):
            args.seed = _default_seed()
        return args.func(args)
    except ConvergenceError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 3
    except LatticeTfError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2
    except OSError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2


def _was_defaulted(parser, argv, key: str, attr: str) -> bool:
    tokens = list(argv) if argv is not None else sys.argv[1:]
    flag = "--" + key.replace("_", "-")
    return not any(tok == flag or tok.startswith(flag + "=")
                   for tok in tokens)


if __name__ == "__main__":
    sys.exit(main())
