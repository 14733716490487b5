"""CSV/manifest output helpers: fixed cell formats so identical runs
produce bitwise-identical files."""

import json


def fmt_float(x):
    """17 significant digits: enough to round-trip any finite double."""
    return format(float(x), ".17g")


def fmt_flag(b):
    return "1" if b else "0"


def write_csv(path, header, rows):
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(row) + "\n")


def manifest_path(csv_path):
    """Sibling manifest file: results.csv -> results.manifest.json."""
    base = str(csv_path)
    if base.endswith(".csv"):
        base = base[: -len(".csv")]
    return base + ".manifest.json"


def write_manifest(csv_path, payload):
    path = manifest_path(csv_path)
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return path
