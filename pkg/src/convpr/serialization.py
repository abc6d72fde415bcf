"""On-disk formats for complex vectors and solver trajectories.

JSON vectors are stored as a list of [re, im] pairs; bare numbers are
accepted on input and read as real entries.  The binary format is the
magic bytes ``CPRV``, a little-endian uint32 length, then interleaved
little-endian float64 (re, im) pairs.
"""

import json
import struct

import numpy as np

from .errors import InvalidInput, IoError
from .operators import as_complex_vector

BINARY_MAGIC = b"CPRV"


def vector_to_pairs(v):
    """Complex vector as a JSON-ready list of [re, im] pairs."""
    arr = as_complex_vector(v)
    return [[float(c.real), float(c.imag)] for c in arr]


def vector_from_pairs(obj, name="vector"):
    """Parse a list of [re, im] pairs (or bare reals) into a complex array."""
    if not isinstance(obj, list) or not obj:
        raise InvalidInput(f"{name}: expected a nonempty list")
    out = np.empty(len(obj), dtype=np.complex128)
    for k, item in enumerate(obj):
        if isinstance(item, (int, float)) and not isinstance(item, bool):
            out[k] = complex(item, 0.0)
        elif (
            isinstance(item, list)
            and len(item) == 2
            and all(isinstance(p, (int, float)) and not isinstance(p, bool) for p in item)
        ):
            out[k] = complex(item[0], item[1])
        else:
            raise InvalidInput(f"{name}: entry {k} is not a number or [re, im] pair")
    if not np.all(np.isfinite(out)):
        raise InvalidInput(f"{name}: non-finite entries")
    return out


def save_vector_json(path, v):
    """Write a complex vector to ``path`` as JSON pairs."""
    payload = vector_to_pairs(v)
    try:
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(payload, fh)
            fh.write("\n")
    except OSError as err:
        raise IoError(f"cannot write {path}: {err}") from err


def load_vector_json(path):
    """Read a complex vector written by :func:`save_vector_json`."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as err:
        raise IoError(f"cannot read {path}: {err}") from err
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as err:
        raise InvalidInput(f"{path}: invalid JSON ({err})") from err
    return vector_from_pairs(obj, name=str(path))


def save_vector_binary(path, v):
    """Write a complex vector in the CPRV binary format."""
    arr = as_complex_vector(v)
    header = BINARY_MAGIC + struct.pack("<I", arr.shape[0])
    try:
        with open(path, "wb") as fh:
            fh.write(header)
            fh.write(arr.astype("<c16").tobytes())
    except OSError as err:
        raise IoError(f"cannot write {path}: {err}") from err


def load_vector_binary(path):
    """Read a complex vector written by :func:`save_vector_binary`."""
    try:
        with open(path, "rb") as fh:
            data = fh.read()
    except OSError as err:
        raise IoError(f"cannot read {path}: {err}") from err
    if len(data) < 8 or data[:4] != BINARY_MAGIC:
        raise InvalidInput(f"{path}: missing CPRV magic")
    (length,) = struct.unpack("<I", data[4:8])
    expected = 8 + 16 * length
    if length == 0 or len(data) != expected:
        raise InvalidInput(
            f"{path}: expected {expected} bytes for length {length}, got {len(data)}"
        )
    arr = np.frombuffer(data, dtype="<c16", count=length, offset=8)
    arr = arr.astype(np.complex128)
    if not np.all(np.isfinite(arr)):
        raise InvalidInput(f"{path}: non-finite entries")
    return arr


def read_pgm(path):
    """Read a binary 8-bit PGM (magic P5) into a (height, width) uint8 array.

    Header comments introduced by ``#`` are honored.  Raises InvalidInput
    on malformed files and IoError on OS-level failures.
    """
    try:
        with open(path, "rb") as fh:
            data = fh.read()
    except OSError as err:
        raise IoError(f"cannot read {path}: {err}") from err

    def fail(why):
        raise InvalidInput(f"{path}: {why}")

    if not data.startswith(b"P5"):
        fail("not a binary PGM (missing P5 magic)")
    pos = 2
    fields = []
    while len(fields) < 3:
        while pos < len(data) and data[pos : pos + 1].isspace():
            pos += 1
        if pos < len(data) and data[pos : pos + 1] == b"#":
            while pos < len(data) and data[pos] != 0x0A:
                pos += 1
            continue
        start = pos
        while pos < len(data) and not data[pos : pos + 1].isspace():
            pos += 1
        if start == pos:
            fail("truncated header")
        token = data[start:pos]
        if not token.isdigit():
            fail(f"non-numeric header token {token!r}")
        fields.append(int(token))
    if pos >= len(data) or not data[pos : pos + 1].isspace():
        fail("missing whitespace after maxval")
    pos += 1
    width, height, maxval = fields
    if width < 1 or height < 1:
        fail(f"bad dimensions {width}x{height}")
    if not 1 <= maxval <= 255:
        fail(f"maxval {maxval} outside 8-bit range")
    expected = width * height
    raster = data[pos:]
    if len(raster) != expected:
        fail(f"expected {expected} raster bytes, got {len(raster)}")
    return np.frombuffer(raster, dtype=np.uint8).reshape(height, width).copy()


def write_pgm(path, image):
    """Write a (height, width) uint8 array as a binary PGM with maxval 255."""
    arr = np.asarray(image)
    if arr.ndim != 2 or arr.size == 0:
        raise InvalidInput("image must be a nonempty 2-D array")
    if arr.dtype != np.uint8:
        if np.issubdtype(arr.dtype, np.integer) and arr.min() >= 0 and arr.max() <= 255:
            arr = arr.astype(np.uint8)
        else:
            raise InvalidInput("image must be uint8 or integers in [0, 255]")
    height, width = arr.shape
    header = f"P5\n{width} {height}\n255\n".encode("ascii")
    try:
        with open(path, "wb") as fh:
            fh.write(header)
            fh.write(arr.tobytes())
    except OSError as err:
        raise IoError(f"cannot write {path}: {err}") from err


def write_trajectory_csv(path, rows):
    """Write (iter, dist, objective, tau) rows; missing fields stay empty."""

    def fmt(v):
        return "" if v is None else repr(float(v))

    lines = ["iter,dist,objective,tau"]
    for it, dist, obj, tau in rows:
        lines.append(f"{int(it)},{fmt(dist)},{fmt(obj)},{fmt(tau)}")
    try:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write("\n".join(lines) + "\n")
    except OSError as err:
        raise IoError(f"cannot write {path}: {err}") from err
