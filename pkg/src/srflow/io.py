"""CSV and JSON output with a provenance header line."""

import hashlib
import json

import numpy as np

SCHEMA_VERSION = "1"

__all__ = ["SCHEMA_VERSION", "config_hash", "header_line", "write_csv", "read_csv", "fmt"]


def config_hash(config):
    """Short stable hash of a JSON-serialisable configuration."""
    blob = json.dumps(config, sort_keys=True, separators=(",", ":"), default=str)
    return hashlib.sha256(blob.encode()).hexdigest()[:16]


def header_line(config=None, kind="data"):
    h = config_hash(config) if config is not None else "none"
    return f"# srflow {kind} schema={SCHEMA_VERSION} config_hash={h}"


def fmt(v):
    """17 significant digits, round-trip safe; integers stay integers."""
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    v = float(v)
    if v != v:
        return "nan"
    return f"{v:.17g}"


def write_csv(path, columns, arrays, header=None):
    """Write equal-length column arrays.  ``header`` is the first line
    (defaults to a header without config hash)."""
    n = len(arrays[0])
    with open(path, "w", newline="") as f:
        f.write((header or header_line()) + "\n")
        f.write(",".join(columns) + "\n")
        for r in range(n):
            f.write(",".join(fmt(col[r]) for col in arrays) + "\n")


def read_csv(path):
    """Read a file written by :func:`write_csv`; returns (header, columns dict)."""
    with open(path) as f:
        header = f.readline().rstrip("\n")
        names = f.readline().rstrip("\n").split(",")
        rows = [line.rstrip("\n").split(",") for line in f if line.strip()]
    data = np.array([[float(x) for x in r] for r in rows]) if rows else np.empty((0, len(names)))
    return header, {nm: data[:, k] for k, nm in enumerate(names)}
