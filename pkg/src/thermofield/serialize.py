"""Binary snapshot format for operators/states and the CSV writer.

Binary layout: 16-byte header {magic b"NTFD", version u32, dim u32, kind u32},
all little-endian, followed by the payload as row-major float64 (re, im)
pairs.  kind: 1 = ket, 2 = bra, 3 = operator (payload dim*dim entries).

CSV files are RFC-4180 style: header row, LF line endings, floats printed
with 17 significant digits so identical runs are byte-identical.
"""

from __future__ import annotations

import struct
from pathlib import Path

import numpy as np

from .spaces import ThermalBra, ThermalKet, ThermalOperator, TruncatedFockSpace

MAGIC = b"NTFD"
VERSION = 1
KIND_KET = 1
KIND_BRA = 2
KIND_OPERATOR = 3

_HEADER = struct.Struct("<4sIII")


def _payload(array: np.ndarray) -> bytes:
    flat = np.ascontiguousarray(array, dtype=complex).ravel()
    out = np.empty(2 * flat.size, dtype="<f8")
    out[0::2] = flat.real
    out[1::2] = flat.imag
    return out.tobytes()


def save(path, obj) -> None:
    """Write a ThermalOperator / ThermalKet / ThermalBra snapshot."""
    if isinstance(obj, ThermalOperator):
        kind, dim, data = KIND_OPERATOR, obj.space.dim, obj.matrix
    elif isinstance(obj, ThermalKet):
        kind, dim, data = KIND_KET, obj.space.dim, obj.vector
    elif isinstance(obj, ThermalBra):
        kind, dim, data = KIND_BRA, obj.space.dim, obj.vector
    else:
        raise TypeError(f"cannot serialise {type(obj).__name__}")
    with open(path, "wb") as fh:
        fh.write(_HEADER.pack(MAGIC, VERSION, dim, kind))
        fh.write(_payload(data))


def load(path, space: TruncatedFockSpace):
    """Read a snapshot back onto the given space."""
    raw = Path(path).read_bytes()
    magic, version, dim, kind = _HEADER.unpack_from(raw, 0)
    if magic != MAGIC:
        raise ValueError(f"bad magic {magic!r}")
    if version != VERSION:
        raise ValueError(f"unsupported version {version}")
    if dim != space.dim:
        raise ValueError(f"snapshot dim {dim} does not match space dim {space.dim}")
    count = dim * dim if kind == KIND_OPERATOR else dim
    flat = np.frombuffer(raw, dtype="<f8", offset=_HEADER.size, count=2 * count)
    data = flat[0::2] + 1j * flat[1::2]
    if kind == KIND_OPERATOR:
        return ThermalOperator(data.reshape(dim, dim), space)
    if kind == KIND_KET:
        return ThermalKet(data, space)
    if kind == KIND_BRA:
        return ThermalBra(data, space)
    raise ValueError(f"unknown kind {kind}")


def format_float(x: float) -> str:
    return "%.17g" % float(x)


def write_csv(path, header: list[str], columns: list[np.ndarray]) -> None:
    """Write columns as CSV with LF endings and 17-significant-digit floats."""
    if len(header) != len(columns):
        raise ValueError("header/column count mismatch")
    n = len(columns[0])
    for col in columns:
        if len(col) != n:
            raise ValueError("columns have unequal lengths")
    lines = [",".join(header)]
    for i in range(n):
        lines.append(",".join(format_float(col[i]) for col in columns))
    with open(path, "w", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")
