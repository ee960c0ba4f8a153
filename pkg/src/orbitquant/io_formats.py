"""
io_formats.py
---------------------------------------------------------------------------
Flat-file exchange formats for lattice data.

Three formats, all byte-deterministic for a fixed input so repeated runs
can be compared with cmp(1):

  CSV   header ``axis1,...,axisR,re,im``; one row per lattice node in
        row-major order; every number printed with 17 significant digits
        (enough to round-trip a float64).

  OQF1  raw binary: magic bytes ``OQF1``, a little-endian u32 rank, one
        little-endian u32 count per axis, then float64 little-endian
        (re, im) pairs in row-major order.

  JSON  canonical serialization (sorted keys, fixed separators, newline
        at the end) used for metadata sidecars and verification reports.
"""

from __future__ import annotations

import json
import struct

import numpy as np

__all__ = ["write_csv", "write_oqf", "read_oqf", "dump_json", "write_json"]

MAGIC = b"OQF1"


def _axis_arrays(axes, shape):
    axes = [np.asarray(a, dtype=float) for a in axes]
    if tuple(len(a) for a in axes) != tuple(shape):
        raise ValueError(
            f"axis lengths {tuple(len(a) for a in axes)} do not match data shape {tuple(shape)}"
        )
    return axes


def write_csv(path, axes, values):
    """Write complex lattice values with their axis coordinates as CSV."""
    values = np.asarray(values)
    axes = _axis_arrays(axes, values.shape)
    flat = np.ascontiguousarray(values, dtype=complex).ravel()
    mesh = np.meshgrid(*axes, indexing="ij")
    cols = [m.ravel() for m in mesh]
    header = ",".join(f"axis{i + 1}" for i in range(len(axes))) + ",re,im"
    with open(path, "w", newline="\n") as fh:
        fh.write(header + "\n")
        for k in range(flat.size):
            cells = [format(c[k], ".17g") for c in cols]
            cells.append(format(flat[k].real, ".17g"))
            cells.append(format(flat[k].imag, ".17g"))
            fh.write(",".join(cells) + "\n")


def write_oqf(path, values):
    values = np.ascontiguousarray(np.asarray(values, dtype=complex))
    with open(path, "wb") as fh:
        fh.write(MAGIC)
        fh.write(struct.pack("<I", values.ndim))
        for n in values.shape:
            fh.write(struct.pack("<I", n))
        inter = np.empty(values.size * 2, dtype="<f8")
        inter[0::2] = values.real.ravel()
        inter[1::2] = values.imag.ravel()
        fh.write(inter.tobytes())


def read_oqf(path):
    with open(path, "rb") as fh:
        blob = fh.read()
    if blob[:4] != MAGIC:
        raise ValueError(f"{path}: not an OQF1 file (bad magic {blob[:4]!r})")
    (rank,) = struct.unpack_from("<I", blob, 4)
    shape = struct.unpack_from(f"<{rank}I", blob, 8)
    head = 8 + 4 * rank
    count = int(np.prod(shape)) if rank else 1
    inter = np.frombuffer(blob, dtype="<f8", count=2 * count, offset=head)
    if inter.size != 2 * count:
        raise ValueError(f"{path}: truncated payload")
    return (inter[0::2] + 1j * inter[1::2]).reshape(shape)


def dump_json(obj):
    """Canonical JSON text: sorted keys, two-space indent, trailing newline."""
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=True) + "\n"


def write_json(path, obj):
    with open(path, "w", newline="\n") as fh:
        fh.write(dump_json(obj))
