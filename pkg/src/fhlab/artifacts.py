"""File artifacts: CSV tables, JSON reports, binary snapshots, manifests.

CSV dialect is fixed: comma separator, '.' decimal point, one header
row, LF line endings.  Snapshot files carry a little-endian header
(int64 dim, int64 n, float64 L, float64 t) followed by the field values
as interleaved re/im float64 pairs in C order, plus a JSON sidecar
describing the layout.  Manifests hash the run configuration and every
data artifact; figures are listed but not hashed (presentation only).
"""

from __future__ import annotations

import hashlib
import json
import struct
from pathlib import Path

import numpy as np

from .grids import Field, Grid

_HEADER = struct.Struct("<qqdd")


def canonical_json_bytes(doc) -> bytes:
    return json.dumps(doc, sort_keys=True, separators=(",", ":")).encode()


def write_json(path, doc) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_bytes(json.dumps(doc, indent=2, sort_keys=True).encode() + b"\n")
    return path


def write_csv(path, header, rows) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(_cell(v) for v in row))
    path.write_bytes(("\n".join(lines) + "\n").encode())
    return path


def _cell(value) -> str:
    if isinstance(value, bool):
        return "1" if value else "0"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def write_trajectory_csv(path, traj) -> Path:
    rows = zip(traj.times.tolist(), traj.mass.tolist(), traj.l2.tolist(), traj.linf.tolist())
    return write_csv(path, ["t", "mass", "l2_norm", "linf_norm"], rows)


def write_norm_table_csv(path, table) -> Path:
    return write_csv(path, ["T", "window_norm", "weighted"], table.rows())


def write_region_csv(path, rows) -> Path:
    formatted = (
        (float(x), float(y), in_base, in_refined) for x, y, in_base, in_refined in rows
    )
    return write_csv(path, ["x", "y", "in_omega_gamma", "in_omega_gamma_sigma"], formatted)


def write_snapshot(path, field: Field, t: float) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    grid = field.grid
    header = _HEADER.pack(grid.dim, grid.n, grid.length, float(t))
    payload = np.ascontiguousarray(field.values, dtype="<c16").tobytes()
    path.write_bytes(header + payload)
    sidecar = {
        "dim": grid.dim,
        "n": grid.n,
        "L": grid.length,
        "t": float(t),
        "encoding": "header <qqdd (dim, n, L, t); complex128 little-endian re/im pairs, C order",
        "count": grid.n**grid.dim,
        "file": path.name,
    }
    write_json(path.with_suffix(path.suffix + ".json"), sidecar)
    return path


def read_snapshot(path) -> tuple[Field, float]:
    raw = Path(path).read_bytes()
    dim, n, length, t = _HEADER.unpack_from(raw)
    grid = Grid(int(dim), int(n), float(length))
    values = np.frombuffer(raw, dtype="<c16", offset=_HEADER.size).reshape(grid.shape)
    return Field(grid, values.copy()), float(t)


def sha256_bytes(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()


def sha256_file(path) -> str:
    return sha256_bytes(Path(path).read_bytes())


def write_manifest(output_dir, command: str, config_doc, artifacts, figures=()) -> Path:
    """Reproducibility manifest: config hash plus per-artifact hashes."""
    output_dir = Path(output_dir)
    entries = [
        {
            "path": str(Path(p).relative_to(output_dir)),
            "bytes": Path(p).stat().st_size,
            "sha256": sha256_file(p),
        }
        for p in sorted(map(str, artifacts))
    ]
    manifest = {
        "command": command,
        "config_sha256": sha256_bytes(canonical_json_bytes(config_doc)),
        "artifacts": entries,
        "figures": sorted(str(Path(p).relative_to(output_dir)) for p in figures),
    }
    return write_json(output_dir / "manifest.json", manifest)
