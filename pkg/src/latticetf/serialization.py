"""JSON and CSV input/output.

JSON writing is deterministic: keys sorted, no timestamps, floats via
repr (shortest round-trip form).  CSV numeric cells use 17 significant
digits so values survive a round trip through text exactly.
"""

from __future__ import annotations

import json
from typing import Any

import numpy as np

from .core import LatticeSignal, PhaseSpaceField, SupportBox
from .errors import InputError
from .tiles import Tile, TileSet
from .uncertainty import InequalityReport

__all__ = [
    "signal_to_dict", "signal_from_dict", "load_signal", "save_signal",
    "tileset_to_dict", "tileset_from_dict", "load_tileset", "save_tileset",
    "reports_to_json", "write_reports_csv", "write_field_csv",
    "jsonable",
]


def jsonable(value: Any) -> Any:
    """Recursively convert numpy scalars/arrays so json.dumps accepts them."""
    if isinstance(value, dict):
        return {str(k): jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [jsonable(v) for v in value]
    if isinstance(value, np.ndarray):
        return [jsonable(v) for v in value.tolist()]
    if isinstance(value, (np.integer,)):
        return int(value)
    if isinstance(value, (np.floating,)):
        return float(value)
    if isinstance(value, (np.complexfloating, complex)):
        return {"re": float(value.real), "im": float(value.imag)}
    if isinstance(value, (np.bool_,)):
        return bool(value)
    return value


def dumps_deterministic(obj: Any) -> str:
    return json.dumps(jsonable(obj), sort_keys=True, indent=2) + "\n"


# ---------------------------------------------------------------------------
# signals

def signal_to_dict(signal: LatticeSignal) -> dict:
    entries = []
    for index in signal.box.indices():
        value = signal.value_at(index)
        if value != 0:
            entries.append({
                "index": list(index),
                "re": float(value.real),
                "im": float(value.imag),
            })
    return {
        "dimension": signal.dimension,
        "half_width": signal.box.half_width,
        "entries": entries,
    }


def _require(obj: dict, key: str, context: str):
    if key not in obj:
        raise InputError(f"{context} is missing required field '{key}'")
    return obj[key]


def signal_from_dict(obj: dict) -> LatticeSignal:
    if not isinstance(obj, dict):
        raise InputError("signal document must be a JSON object")
    dimension = _require(obj, "dimension", "signal")
    half_width = _require(obj, "half_width", "signal")
    entries = _require(obj, "entries", "signal")
    if not isinstance(dimension, int) or dimension < 1:
        raise InputError(f"signal.dimension must be a positive integer, "
                         f"got {dimension!r}")
    if not isinstance(half_width, int) or half_width < 0:
        raise InputError(f"signal.half_width must be a non-negative integer, "
                         f"got {half_width!r}")
    if not isinstance(entries, list):
        raise InputError("signal.entries must be a list")
    box = SupportBox(dimension, half_width)
    pairs = []
    for pos, entry in enumerate(entries):
        where = f"signal.entries[{pos}]"
        if not isinstance(entry, dict):
            raise InputError(f"{where} must be an object")
        index = _require(entry, "index", where)
        if (not isinstance(index, list) or len(index) != dimension
                or not all(isinstance(v, int) for v in index)):
            raise InputError(
                f"{where}.index must be a list of {dimension} integers, "
                f"got {index!r}")
        if not box.contains(tuple(index)):
            raise InputError(
                f"{where}.index {index} lies outside the declared box "
                f"of half-width {half_width}")
        re = entry.get("re", 0.0)
        im = entry.get("im", 0.0)
        for label, v in (("re", re), ("im", im)):
            if not isinstance(v, (int, float)) or isinstance(v, bool):
                raise InputError(f"{where}.{label} must be a number, "
                                 f"got {v!r}")
        pairs.append((tuple(index), complex(re, im)))
    return LatticeSignal.from_entries(dimension, half_width, pairs)


def load_signal(path: str) -> LatticeSignal:
    with open(path, "r", encoding="utf-8") as handle:
        try:
            obj = json.load(handle)
        except json.JSONDecodeError as exc:
            raise InputError(f"{path} is not valid JSON: {exc}") from exc
    return signal_from_dict(obj)


def save_signal(signal: LatticeSignal, path: str):
    with open(path, "w", encoding="utf-8") as handle:
        handle.write(dumps_deterministic(signal_to_dict(signal)))


# ---------------------------------------------------------------------------
# tile sets

def tileset_to_dict(tiles: TileSet) -> dict:
    return {
        "dimension": tiles.dimension,
        "tiles": [
            {"m": list(t.m), "lo": list(t.lo), "hi": list(t.hi)}
            for t in tiles.tiles
        ],
    }


def tileset_from_dict(obj: dict) -> TileSet:
    if not isinstance(obj, dict):
        raise InputError("tile set document must be a JSON object")
    dimension = _require(obj, "dimension", "tileset")
    raw_tiles = _require(obj, "tiles", "tileset")
    if not isinstance(dimension, int) or dimension < 1:
        raise InputError(f"tileset.dimension must be a positive integer, "
                         f"got {dimension!r}")
    if not isinstance(raw_tiles, list):
        raise InputError("tileset.tiles must be a list")
    parsed = []
    for pos, raw in enumerate(raw_tiles):
        where = f"tileset.tiles[{pos}]"
        if not isinstance(raw, dict):
            raise InputError(f"{where} must be an object")
        m = _require(raw, "m", where)
        lo = _require(raw, "lo", where)
        hi = _require(raw, "hi", where)
        if (not isinstance(m, list) or len(m) != dimension
                or not all(isinstance(v, int) for v in m)):
            raise InputError(f"{where}.m must be a list of {dimension} "
                             f"integers, got {m!r}")
        for label, vec in (("lo", lo), ("hi", hi)):
            if (not isinstance(vec, list) or len(vec) != dimension
                    or not all(isinstance(v, (int, float))
                               and not isinstance(v, bool) for v in vec)):
                raise InputError(f"{where}.{label} must be a list of "
                                 f"{dimension} numbers, got {vec!r}")
        parsed.append((tuple(m), tuple(float(v) for v in lo),
                       tuple(float(v) for v in hi)))
    return TileSet.from_tiles(dimension, parsed)


def load_tileset(path: str) -> TileSet:
    with open(path, "r", encoding="utf-8") as handle:
        try:
            obj = json.load(handle)
        except json.JSONDecodeError as exc:
            raise InputError(f"{path} is not valid JSON: {exc}") from exc
    return tileset_from_dict(obj)


def save_tileset(tiles: TileSet, path: str):
    with open(path, "w", encoding="utf-8") as handle:
        handle.write(dumps_deterministic(tileset_to_dict(tiles)))


# ---------------------------------------------------------------------------
# reports and fields

def reports_to_json(reports: list[InequalityReport], header: dict) -> str:
    document = {
        "header": header,
        "reports": [r.to_dict() for r in reports],
        "failures": sum(1 for r in reports if r.failed),
    }
    return dumps_deterministic(document)


def write_reports_csv(reports: list[InequalityReport], path: str):
    lines = [InequalityReport.CSV_HEADER]
    lines.extend(r.csv_row() for r in reports)
    with open(path, "w", encoding="utf-8") as handle:
        handle.write("\n".join(lines) + "\n")


def write_field_csv(field: PhaseSpaceField, path: str):
    """One row per (m, w) sample: indices, node fractions, re, im."""
    n = field.dimension
    header = ([f"m{a}" for a in range(n)] + [f"w{a}" for a in range(n)]
              + ["re", "im"])
    fractions = field.grid.node_fractions()
    lines = [",".join(header)]
    for row_pos, index in enumerate(field.box.indices()):
        block = field.values.reshape(field.box.size, field.grid.size)[row_pos]
        for node_pos, node in enumerate(np.ndindex(field.grid.shape)):
            value = block[node_pos]
            cells = ([str(v) for v in index]
                     + [format(fractions[j], ".17g") for j in node]
                     + [format(value.real, ".17g"),
                        format(value.imag, ".17g")])
            lines.append(",".join(cells))
    with open(path, "w", encoding="utf-8") as handle:
        handle.write("\n".join(lines) + "\n")
