"""CSV/JSON serialization with reproducibility metadata.

Every data file carries the full flag set and seed that produced it, so the
metadata block alone suffices to regenerate the file.  Numbers are written
with 17 significant digits, which round-trips 64-bit floats exactly.
"""

import json

SCHEMA_VERSION = 1
FLOAT_FMT = "%.17g"


def format_value(v):
    if isinstance(v, float):
        return FLOAT_FMT % v
    return str(v)


def write_csv(path, columns, rows, meta=None):
    """Write rows (iterable of tuples) with '#'-prefixed metadata lines."""
    with open(path, "w") as fh:
        for k, v in sorted((meta or {}).items()):
            fh.write("# %s = %s\n" % (k, v))
        fh.write(",".join(columns) + "\n")
        for row in rows:
            fh.write(",".join(format_value(v) for v in row) + "\n")


def read_csv(path):
    """Parse a metadata-bearing CSV; returns (meta, columns, rows of strings).

    Malformed lines raise ValueError with the 1-based line number.
    """
    meta = {}
    columns = None
    rows = []
    with open(path) as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.rstrip("\n")
            if not line:
                continue
            if line.startswith("#"):
                body = line[1:].strip()
                if "=" in body:
                    k, v = body.split("=", 1)
                    meta[k.strip()] = v.strip()
                continue
            parts = line.split(",")
            if columns is None:
                columns = [p.strip() for p in parts]
                continue
            if len(parts) != len(columns):
                raise ValueError(
                    "%s:%d: expected %d fields, got %d" % (path, lineno, len(columns), len(parts))
                )
            rows.append(parts)
    if columns is None:
        raise ValueError("%s: no header line found" % path)
    return meta, columns, rows


def write_json(path, columns, rows, meta=None):
    payload = {
        "schema": SCHEMA_VERSION,
        "meta": {k: str(v) for k, v in sorted((meta or {}).items())},
        "columns": list(columns),
        "rows": [[format_value(v) for v in row] for row in rows],
    }
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=1)
        fh.write("\n")


def read_json(path):
    with open(path) as fh:
        payload = json.load(fh)
    if payload.get("schema") != SCHEMA_VERSION:
        raise ValueError("%s: unsupported schema %r" % (path, payload.get("schema")))
    return payload["meta"], payload["columns"], payload["rows"]


def read_table(path):
    """Dispatch on extension; returns (meta, columns, string rows)."""
    if path.endswith(".json"):
        return read_json(path)
    return read_csv(path)


def write_table(path, columns, rows, meta=None, fmt=None):
    fmt = fmt or ("json" if path.endswith(".json") else "csv")
    if fmt == "json":
        write_json(path, columns, rows, meta)
    else:
        write_csv(path, columns, rows, meta)


def histogram_rows(values, bins=100):
    """Plot-ready binned data: rows of (bin_lo, bin_hi, count)."""
    import numpy as np

    counts, edges = np.histogram(np.asarray(values, dtype=float), bins=bins)
    return [(float(edges[i]), float(edges[i + 1]), int(c)) for i, c in enumerate(counts)]


def hexbin_rows(x, y, bins=60):
    """2-D binned data for complex configurations: rows of (x, y, count)."""
    import numpy as np

    counts, xe, ye = np.histogram2d(np.asarray(x, float), np.asarray(y, float), bins=bins)
    rows = []
    for i in range(counts.shape[0]):
        for j in range(counts.shape[1]):
            c = int(counts[i, j])
            if c:
                rows.append((float((xe[i] + xe[i + 1]) / 2), float((ye[j] + ye[j + 1]) / 2), c))
    return rows
