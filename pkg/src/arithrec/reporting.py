"""CSV tables and JSON run manifests."""
from __future__ import annotations

import csv
import datetime as _dt
import json
import platform
from pathlib import Path

import numpy as np
import scipy

from . import __version__


def _plain(value):
    if isinstance(value, (np.floating, float)):
        return float(value)
    if isinstance(value, (np.integer,)):
        return int(value)
    if isinstance(value, np.ndarray):
        return [_plain(v) for v in value.tolist()]
    if isinstance(value, dict):
        return {str(k): _plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    if isinstance(value, Path):
        return str(value)
    return value


def write_csv(rows, path) -> Path:
    """Comma separated, header row, LF line endings, ``repr`` floats."""
    rows = [dict(r) for r in rows]
    if not rows:
        raise ValueError("no rows to write")
    fields = list(rows[0])
    for r in rows[1:]:
        fields += [k for k in r if k not in fields]
    path = Path(path)
    with path.open("w", newline="") as fh:
        w = csv.DictWriter(fh, fieldnames=fields, lineterminator="\n")
        w.writeheader()
        for r in rows:
            w.writerow({k: _fmt(r.get(k, "")) for k in fields})
    return path


def _fmt(v):
    v = _plain(v)
    if isinstance(v, float):
        return repr(v)
    if isinstance(v, list):
        return " ".join(_fmt(x) for x in v)
    return v


def write_json(obj, path) -> Path:
    path = Path(path)
    path.write_text(json.dumps(_plain(obj), indent=2, sort_keys=True) + "\n")
    return path


def manifest(command: str, config: dict, outputs, **extra) -> dict:
    """Run manifest: effective config, outputs and environment.

    The timestamp lives here and nowhere else so data files stay
    byte-reproducible.
    """
    return _plain({
        "command": command,
        "config": config,
        "outputs": [str(p) for p in outputs],
        "created_utc": _dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds"),
        "versions": {
            "arithrec": __version__,
            "numpy": np.__version__,
            "scipy": scipy.__version__,
            "python": platform.python_version(),
        },
        "rng": "numpy Philox; SeedSequence(seed, spawn_key=...); ziggurat normals",
        **extra,
    })
