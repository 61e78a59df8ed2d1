"""Dataset emission: unit-tagged CSV, JSON reports, run manifests.

Outputs are plain text so the renderer and any external tool can
consume them; identical configs reproduce byte-identical datasets
(deterministic float formatting, sorted JSON keys).
"""

from __future__ import annotations

import hashlib
import json
import time

import numpy as np
from pathlib import Path

SCHEMA_VERSION = 1


def fmt(x) -> str:
    if isinstance(x, complex):
        raise TypeError("split complex values into Re/Im columns")
    if isinstance(x, bool):
        return "1" if x else "0"
    if isinstance(x, str):
        return x
    if isinstance(x, (int, np.integer)):
        return str(x)
    return format(float(x), ".17g")


def write_csv(path, columns: list[tuple[str, str]], rows) -> Path:
    """columns: (name, unit) pairs; the header carries name[unit]."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w") as fh:
        fh.write(",".join(f"{name}[{unit}]" for name, unit in columns) + "\n")
        for row in rows:
            fh.write(",".join(fmt(v) for v in row) + "\n")
    return path


def write_json(path, payload: dict) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=1, sort_keys=True, default=_json_default)
        fh.write("\n")
    return path


def _json_default(obj):
    import numpy as np
    if isinstance(obj, (np.floating,)):
        return float(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, complex):
        return {"re": obj.real, "im": obj.imag}
    raise TypeError(f"not JSON-serializable: {type(obj)}")


def sha256_file(path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(65536), b""):
            h.update(chunk)
    return h.hexdigest()


def write_manifest(outdir, config_text: str, outputs: list[Path], code_version: str) -> Path:
    outdir = Path(outdir)
    manifest = {
        "schema_version": SCHEMA_VERSION,
        "code_version": code_version,
        "config_sha256": hashlib.sha256(config_text.encode()).hexdigest(),
        "created_unix": time.time(),
        "outputs": {p.name: sha256_file(p) for p in sorted(outputs, key=lambda q: q.name)},
    }
    return write_json(outdir / "manifest.json", manifest)
