"""File formats.

Binary matrix/vector format: an 8-byte magic b'SCQMAT01', uint32 rows,
uint32 cols, uint8 row-major flag, then rows*cols interleaved float64
(re, im) pairs.  Statevector snapshots are stored as a 2^n x 1 column.

CSV artifacts carry '# key=value' header lines (tool version, config hash,
seed) so identical runs produce byte-identical files.
"""

from __future__ import annotations

import csv
import hashlib
import io
import json
import struct

import numpy as np

from .errors import ValidationError

MAGIC = b"SCQMAT01"


def write_matrix(path, A: np.ndarray, row_major: bool = True) -> None:
    A = np.asarray(A, dtype=complex)
    if A.ndim == 1:
        A = A.reshape(-1, 1)
    if A.ndim != 2:
        raise ValidationError("only 1-D or 2-D arrays supported")
    rows, cols = A.shape
    data = A if row_major else A.T
    inter = np.empty(rows * cols * 2, dtype="<f8")
    flat = data.reshape(-1)
    inter[0::2] = flat.real
    inter[1::2] = flat.imag
    with open(path, "wb") as fh:
        fh.write(MAGIC)
        fh.write(struct.pack("<IIB", rows, cols, 1 if row_major else 0))
        fh.write(inter.tobytes())


def read_matrix(path) -> np.ndarray:
    with open(path, "rb") as fh:
        magic = fh.read(8)
        if magic != MAGIC:
            raise ValidationError(f"bad magic {magic!r}")
        rows, cols, rm = struct.unpack("<IIB", fh.read(9))
        raw = np.frombuffer(fh.read(), dtype="<f8")
    if raw.size != rows * cols * 2:
        raise ValidationError("truncated matrix file")
    A = (raw[0::2] + 1j * raw[1::2]).reshape(rows, cols)
    return A if rm else A.T


def config_hash(config: dict) -> str:
    blob = json.dumps(config, sort_keys=True, separators=(",", ":")).encode()
    return hashlib.sha256(blob).hexdigest()[:16]


def artifact_header(version: str, config: dict, seed) -> list[str]:
    return [
        f"# tool_version={version}",
        f"# config_hash={config_hash(config)}",
        f"# seed={seed}",
    ]


def write_csv(path, rows: list[dict], header_lines: list[str] | None = None) -> None:
    buf = io.StringIO()
    for line in header_lines or []:
        buf.write(line + "\n")
    if rows:
        writer = csv.DictWriter(buf, fieldnames=list(rows[0].keys()), lineterminator="\n")
        writer.writeheader()
        for row in rows:
            writer.writerow({k: _fmt(v) for k, v in row.items()})
    with open(path, "w") as fh:
        fh.write(buf.getvalue())


def _fmt(v):
    if isinstance(v, float):
        return repr(v)  # repr round-trips and is deterministic
    if isinstance(v, complex):
        return f"{v.real!r}{'+' if v.imag >= 0 else '-'}{abs(v.imag)!r}j"
    return v


def read_csv(path) -> list[dict]:
    with open(path) as fh:
        lines = [ln for ln in fh if not ln.startswith("#")]
    return list(csv.DictReader(lines))


def write_jsonl(path, records: list[dict], header: dict | None = None) -> None:
    with open(path, "w") as fh:
        if header is not None:
            fh.write(json.dumps({"_header": header}, sort_keys=True) + "\n")
        for rec in records:
            fh.write(json.dumps(rec, sort_keys=True) + "\n")


def write_json(path, obj: dict) -> None:
    with open(path, "w") as fh:
        json.dump(obj, fh, indent=2, sort_keys=True)
        fh.write("\n")
