"""Tests for the vector, image, and trajectory file formats."""

import json
import struct

import numpy as np
import pytest

from convpr import (
    InvalidInput,
    IoError,
    load_vector_binary,
    load_vector_json,
    read_pgm,
    save_vector_binary,
    save_vector_json,
    vector_from_pairs,
    vector_to_pairs,
    write_pgm,
    write_trajectory_csv,
)


class TestPairs:
    def test_round_trip(self):
        v = np.array([1 + 2j, -3.5j, 0.25, 1e-12 - 1e12j])
        assert np.array_equal(vector_from_pairs(vector_to_pairs(v)), v)

    def test_bare_reals_accepted(self):
        out = vector_from_pairs([1, 2.5, [0, -1]])
        assert np.array_equal(out, np.array([1.0, 2.5, -1j]))

    def test_malformed_entries_rejected(self):
        for bad in ([], "nope", [[1.0]], [[1.0, 2.0, 3.0]], [True], [[1.0, "x"]]):
            with pytest.raises(InvalidInput):
                vector_from_pairs(bad)

    def test_non_finite_rejected(self):
        with pytest.raises(InvalidInput):
            vector_from_pairs([[np.inf, 0.0]])


class TestJsonVectors:
    def test_round_trip(self, tmp_path):
        v = np.array([0.5 - 0.25j, 3 + 4j])
        path = tmp_path / "v.json"
        save_vector_json(path, v)
        assert np.array_equal(load_vector_json(path), v)
        # the payload really is a list of pairs
        obj = json.loads(path.read_text())
        assert obj == [[0.5, -0.25], [3.0, 4.0]]

    def test_invalid_json_rejected(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text("{not json")
        with pytest.raises(InvalidInput):
            load_vector_json(path)

    def test_missing_file_is_io_error(self, tmp_path):
        with pytest.raises(IoError):
            load_vector_json(tmp_path / "absent.json")


class TestBinaryVectors:
    def test_round_trip(self, tmp_path):
        rng = np.random.default_rng(0)
        v = rng.standard_normal(17) + 1j * rng.standard_normal(17)
        path = tmp_path / "v.bin"
        save_vector_binary(path, v)
        assert np.array_equal(load_vector_binary(path), v)

    def test_golden_bytes(self, tmp_path):
        path = tmp_path / "one.bin"
        save_vector_binary(path, np.array([1 + 2j]))
        golden = (
            b"CPRV"
            + struct.pack("<I", 1)
            + struct.pack("<d", 1.0)
            + struct.pack("<d", 2.0)
        )
        assert path.read_bytes() == golden

    def test_bad_magic_rejected(self, tmp_path):
        path = tmp_path / "bad.bin"
        path.write_bytes(b"XXXX" + struct.pack("<I", 1) + b"\x00" * 16)
        with pytest.raises(InvalidInput, match="magic"):
            load_vector_binary(path)

    def test_truncated_payload_rejected(self, tmp_path):
        path = tmp_path / "short.bin"
        path.write_bytes(b"CPRV" + struct.pack("<I", 2) + b"\x00" * 16)
        with pytest.raises(InvalidInput):
            load_vector_binary(path)

    def test_zero_length_rejected(self, tmp_path):
        path = tmp_path / "empty.bin"
        path.write_bytes(b"CPRV" + struct.pack("<I", 0))
        with pytest.raises(InvalidInput):
            load_vector_binary(path)

    def test_missing_file_is_io_error(self, tmp_path):
        with pytest.raises(IoError):
            load_vector_binary(tmp_path / "absent.bin")


class TestPgm:
    def test_round_trip(self, tmp_path):
        rng = np.random.default_rng(1)
        img = rng.integers(0, 256, size=(5, 9), dtype=np.uint8)
        path = tmp_path / "img.pgm"
        write_pgm(path, img)
        assert np.array_equal(read_pgm(path), img)

    def test_header_comments_honored(self, tmp_path):
        raster = bytes(range(6))
        path = tmp_path / "c.pgm"
        path.write_bytes(b"P5\n# a comment\n3 # inline\n2\n# more\n255\n" + raster)
        img = read_pgm(path)
        assert img.shape == (2, 3)
        assert img.tobytes() == raster

    def test_malformed_files_rejected(self, tmp_path):
        cases = {
            "magic.pgm": b"P2\n3 2\n255\n" + b"\x00" * 6,
            "token.pgm": b"P5\n3 x\n255\n" + b"\x00" * 6,
            "maxval.pgm": b"P5\n3 2\n999\n" + b"\x00" * 6,
            "raster.pgm": b"P5\n3 2\n255\n" + b"\x00" * 5,
            "truncated.pgm": b"P5\n3",
        }
        for name, blob in cases.items():
            path = tmp_path / name
            path.write_bytes(blob)
            with pytest.raises(InvalidInput):
                read_pgm(path)

    def test_write_validates_dtype_and_shape(self, tmp_path):
        with pytest.raises(InvalidInput):
            write_pgm(tmp_path / "x.pgm", np.zeros((2, 2)) + 0.5)
        with pytest.raises(InvalidInput):
            write_pgm(tmp_path / "x.pgm", np.zeros(4, dtype=np.uint8))
        # integer arrays in range are accepted
        write_pgm(tmp_path / "ok.pgm", np.array([[0, 255]], dtype=np.int64))
        assert np.array_equal(read_pgm(tmp_path / "ok.pgm"),
                              np.array([[0, 255]], dtype=np.uint8))


class TestTrajectoryCsv:
    def test_rows_and_empty_fields(self, tmp_path):
        path = tmp_path / "traj.csv"
        write_trajectory_csv(path, [(0, 0.5, None, 2.02), (1, 0.25, 0.125, None)])
        text = path.read_text()
        assert text == (
            "iter,dist,objective,tau\n"
            "0,0.5,,2.02\n"
            "1,0.25,0.125,\n"
        )
