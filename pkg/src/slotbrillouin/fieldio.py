"""Plain-text dump format for solved fields.

One self-describing UTF-8 file per mode: scalar metadata, the grid axes,
then named 2D arrays (real or complex).  Floats are written with 17
significant digits so that reading the file back reproduces every value
bit-exactly; the format is locale-independent by construction.
"""

import numpy as np

from .errors import SlotBrillouinError

_MAGIC = "# slotbrillouin field dump v1"


class FieldDumpError(SlotBrillouinError, ValueError):
    """A field dump file is malformed."""


def _fmt(value: float) -> str:
    return f"{value:.17e}"


def dump_fields(path, kind: str, meta: dict, axes: dict, arrays: dict) -> None:
    """Write a field dump.

    ``meta`` values may be str, int or float; ``axes`` maps names to 1D
    arrays; ``arrays`` maps names to 2D arrays shaped (nx, ny), real or
    complex.
    """
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        f.write(_MAGIC + "\n")
        f.write(f"kind {kind}\n")
        for key, value in meta.items():
            if isinstance(value, str):
                f.write(f"meta {key} str {value}\n")
            elif isinstance(value, (int, np.integer)) and not isinstance(value, bool):
                f.write(f"meta {key} int {int(value)}\n")
            else:
                f.write(f"meta {key} float {_fmt(float(value))}\n")
        for name, values in axes.items():
            flat = np.asarray(values, dtype=float).ravel()
            f.write(f"axis {name} {len(flat)} " + " ".join(_fmt(v) for v in flat) + "\n")
        for name, data in arrays.items():
            data = np.asarray(data)
            if data.ndim != 2:
                raise FieldDumpError(f"array {name!r} must be 2D")
            is_complex = np.iscomplexobj(data)
            tag = "complex" if is_complex else "real"
            f.write(f"array {name} {tag} {data.shape[0]} {data.shape[1]}\n")
            for row in data:
                if is_complex:
                    f.write(
                        " ".join(f"{_fmt(v.real)} {_fmt(v.imag)}" for v in row) + "\n"
                    )
                else:
                    f.write(" ".join(_fmt(float(v)) for v in row) + "\n")


def load_fields(path):
    """Read a field dump written by :func:`dump_fields`.

    Returns (kind, meta, axes, arrays) with the same types that were
    written.
    """
    meta: dict = {}
    axes: dict = {}
    arrays: dict = {}
    kind = None
    with open(path, "r", encoding="utf-8") as f:
        first = f.readline().rstrip("\n")
        if first != _MAGIC:
            raise FieldDumpError(f"{path}: not a field dump (bad magic line)")
        line = f.readline()
        while line:
            parts = line.rstrip("\n").split(" ")
            if parts[0] == "kind":
                kind = parts[1]
            elif parts[0] == "meta":
                key, typ = parts[1], parts[2]
                raw = " ".join(parts[3:])
                if typ == "str":
                    meta[key] = raw
                elif typ == "int":
                    meta[key] = int(raw)
                elif typ == "float":
                    meta[key] = float(raw)
                else:
                    raise FieldDumpError(f"{path}: unknown meta type {typ!r}")
            elif parts[0] == "axis":
                name, count = parts[1], int(parts[2])
                values = np.array([float(v) for v in parts[3:]])
                if len(values) != count:
                    raise FieldDumpError(f"{path}: axis {name!r} length mismatch")
                axes[name] = values
            elif parts[0] == "array":
                name, tag = parts[1], parts[2]
                n0, n1 = int(parts[3]), int(parts[4])
                rows = []
                for _ in range(n0):
                    row_line = f.readline()
                    if not row_line:
                        raise FieldDumpError(f"{path}: truncated array {name!r}")
                    values = [float(v) for v in row_line.split()]
                    if tag == "complex":
                        if len(values) != 2 * n1:
                            raise FieldDumpError(f"{path}: array {name!r} row length")
                        rows.append(
                            [complex(values[2 * k], values[2 * k + 1]) for k in range(n1)]
                        )
                    else:
                        if len(values) != n1:
                            raise FieldDumpError(f"{path}: array {name!r} row length")
                        rows.append(values)
                dtype = complex if tag == "complex" else float
                arrays[name] = np.array(rows, dtype=dtype)
            elif parts[0] == "":
                pass
            else:
                raise FieldDumpError(f"{path}: unknown record {parts[0]!r}")
            line = f.readline()
    if kind is None:
        raise FieldDumpError(f"{path}: missing kind record")
    return kind, meta, axes, arrays
