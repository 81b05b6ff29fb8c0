"""JSON/CSV round trips and strict document validation."""

import json
import math

import numpy as np
import pytest

from latticetf import InputError, LatticeSignal, StftPlan, SupportBox, TileSet, stft
from latticetf.serialization import (dumps_deterministic, jsonable,
                                     load_signal, load_tileset,
                                     reports_to_json, save_signal,
                                     save_tileset, signal_from_dict,
                                     signal_to_dict, tileset_from_dict,
                                     tileset_to_dict, write_field_csv,
                                     write_reports_csv)
from latticetf.uncertainty import check_entropy

RNG = np.random.default_rng(11)


class TestJsonable:
    def test_numpy_scalars_and_arrays(self):
        blob = jsonable({
            "i": np.int64(3),
            "x": np.float64(0.5),
            "flag": np.bool_(True),
            "arr": np.arange(3),
        })
        assert blob == {"i": 3, "x": 0.5, "flag": True, "arr": [0, 1, 2]}
        json.dumps(blob)

    def test_complex_splits_into_parts(self):
        assert jsonable(1 + 2j) == {"im": 2.0, "re": 1.0}
        assert jsonable(np.complex128(3j)) == {"im": 3.0, "re": 0.0}

    def test_nested_tuples_become_lists(self):
        assert jsonable((1, (2, 3))) == [1, [2, 3]]

    def test_deterministic_dump_sorts_keys(self):
        a = dumps_deterministic({"b": 1, "a": 2})
        b = dumps_deterministic({"a": 2, "b": 1})
        assert a == b
        assert a.endswith("\n")


class TestSignalDocuments:
    def test_round_trip(self, tmp_path):
        signal = LatticeSignal.random_complex(RNG, SupportBox(2, 2))
        path = str(tmp_path / "sig.json")
        save_signal(signal, path)
        back = load_signal(path)
        assert back.box == signal.box
        assert np.allclose(back.values, signal.values, atol=0)

    def test_zero_entries_dropped(self):
        signal = LatticeSignal.delta(1, (1,), 2)
        doc = signal_to_dict(signal)
        assert doc["entries"] == [{"index": [1], "re": 1.0, "im": 0.0}]

    def test_missing_field_named(self):
        with pytest.raises(InputError, match="missing required field "
                                             "'half_width'"):
            signal_from_dict({"dimension": 1, "entries": []})

    def test_bad_index_position_named(self):
        doc = {"dimension": 1, "half_width": 1,
               "entries": [{"index": [0], "re": 1.0},
                           {"index": [0, 0], "re": 1.0}]}
        with pytest.raises(InputError, match=r"signal\.entries\[1\]\.index"):
            signal_from_dict(doc)

    def test_out_of_box_index_rejected(self):
        doc = {"dimension": 1, "half_width": 1,
               "entries": [{"index": [4], "re": 1.0}]}
        with pytest.raises(InputError, match="outside the declared box"):
            signal_from_dict(doc)

    def test_non_numeric_part_rejected(self):
        doc = {"dimension": 1, "half_width": 0,
               "entries": [{"index": [0], "re": "big"}]}
        with pytest.raises(InputError, match=r"entries\[0\]\.re"):
            signal_from_dict(doc)

    def test_invalid_json_file_names_path(self, tmp_path):
        path = tmp_path / "broken.json"
        path.write_text("{not json")
        with pytest.raises(InputError, match="not valid JSON"):
            load_signal(str(path))


class TestTilesetDocuments:
    def test_round_trip(self, tmp_path):
        tiles = TileSet.from_tiles(2, [
            ((0, 1), (0.0, 0.25), (0.5, 0.75)),
            ((1, -1), (0.9, 0.0), (1.1, 0.5)),  # wraps in axis 0
        ])
        path = str(tmp_path / "tiles.json")
        save_tileset(tiles, path)
        back = load_tileset(path)
        assert back.dimension == tiles.dimension
        assert back.measure() == pytest.approx(tiles.measure(), abs=1e-15)
        assert sorted(back.lattice_points()) == \
            sorted(tiles.lattice_points())

    def test_bad_tile_arity_named(self):
        doc = {"dimension": 2,
               "tiles": [{"m": [0], "lo": [0.0, 0.0], "hi": [0.5, 0.5]}]}
        with pytest.raises(InputError, match=r"tiles\[0\]\.m"):
            tileset_from_dict(doc)

    def test_non_object_tile_rejected(self):
        with pytest.raises(InputError, match=r"tiles\[0\] must be"):
            tileset_from_dict({"dimension": 1, "tiles": [[0, 0.0, 1.0]]})


class TestReportDocuments:
    def reports(self):
        f = LatticeSignal.random_complex(RNG, SupportBox(1, 2))
        g = LatticeSignal.random_complex(RNG, SupportBox(1, 1))
        return [check_entropy(f, g, StftPlan(f.box, g.box))]

    def test_json_document_shape(self):
        blob = json.loads(reports_to_json(self.reports(), {"seed": 5}))
        assert blob["header"] == {"seed": 5}
        assert blob["failures"] == 0
        assert blob["reports"][0]["name"] == "entropy"

    def test_csv_has_header_and_rows(self, tmp_path):
        path = str(tmp_path / "reports.csv")
        write_reports_csv(self.reports(), path)
        lines = open(path).read().splitlines()
        assert lines[0] == "name,lhs,rhs,slack,tolerance,status,seed"
        assert len(lines) == 2
        assert lines[1].startswith("entropy,")


class TestFieldCsv:
    def test_layout_and_values(self, tmp_path):
        f = LatticeSignal.delta(1)
        plan = StftPlan.for_half_widths(1, 0, 0, 4)
        field = stft(f, f, plan)
        path = str(tmp_path / "field.csv")
        write_field_csv(field, path)
        lines = open(path).read().splitlines()
        assert lines[0] == "m0,w0,re,im"
        assert len(lines) == 1 + field.box.size * field.grid.size
        first = lines[1].split(",")
        assert first[0] == "0"
        assert float(first[1]) == 0.0
        assert float(first[2]) == pytest.approx(1.0)
        # second node sits at w = 1/4 where the phase is e^{0} still
        # (delta at the origin): every sample has modulus 1
        for line in lines[1:]:
            _, _, re, im = line.split(",")
            assert math.hypot(float(re), float(im)) == pytest.approx(1.0)

    def test_two_dimensional_header(self, tmp_path):
        f = LatticeSignal.delta(2)
        plan = StftPlan.for_half_widths(2, 0, 0, 4)
        field = stft(f, f, plan)
        path = str(tmp_path / "field2.csv")
        write_field_csv(field, path)
        header = open(path).readline().strip()
        assert header == "m0,m1,w0,w1,re,im"
