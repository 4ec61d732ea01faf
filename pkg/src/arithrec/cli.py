"""Command line front end: ``arithrec {alpha,mi-curve,efficiency,reconcile}``.

Settings come from an optional JSON config file (``--config``) and are
overridden by command line flags. Each run writes a data file (CSV or
JSON) plus ``<name>.manifest.json`` describing how to reproduce it.
"""
from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from pathlib import Path

import numpy as np

from . import channel_analysis as ca
from .efficiency import MI_MODES, efficiency_sweep
from .errors import QuadratureError
from .mi_estimators import estimator_config
from .pipeline import LLR_MODES, MatrixSource, run_mi_preservation, run_reconciliation_experiment
from .reporting import manifest, write_csv, write_json
from .source import db_to_linear

THREADS_ENV = "ARITHREC_THREADS"

COMMON_KEYS = {"out", "seed", "threads", "format"}
COMMAND_KEYS = {
    "alpha": {"snr_db"},
    "mi-curve": {"snr_db", "n", "seeds", "k"},
    "efficiency": {"snr_db", "m", "n", "seeds", "mi_mode", "k", "code_efficiency"},
    "reconcile": {"snr_db", "frames", "matrix", "generate", "level", "max_iterations",
                  "llr_mode"},
}
DEFAULTS = {
    "alpha": {"snr_db": "-14:2:1"},
    "mi-curve": {"snr_db": "-14:2:2", "n": 5000, "seeds": 10, "k": 3},
    "efficiency": {"snr_db": "-14:2:1", "m": 4, "n": 5000, "seeds": 10,
                   "mi_mode": "vs_X", "k": 3, "code_efficiency": 1.0},
    "reconcile": {"snr_db": "2:7:0.5", "frames": 50, "generate": "4000,3,4",
                  "level": 1, "max_iterations": 50, "llr_mode": "soft_x"},
}


class ConfigError(ValueError):
    pass


def parse_grid(text) -> list[float]:
    """``"a,b,c"`` or inclusive ``"start:stop:step"``; lists pass through."""
    if isinstance(text, (list, tuple)):
        vals = [float(v) for v in text]
    else:
        text = str(text).strip()
        if not text:
            return []
        if ":" in text:
            parts = [float(p) for p in text.split(":")]
            if len(parts) != 3 or parts[2] <= 0:
                raise ValueError(f"bad range {text!r}; expected start:stop:step with step > 0")
            start, stop, step = parts
            count = int(np.floor((stop - start) / step + 1e-9)) + 1
            vals = [round(start + i * step, 10) for i in range(max(count, 0))]
        else:
            vals = [float(p) for p in text.split(",") if p.strip()]
    return vals


def load_config(path, command) -> dict:
    try:
        data = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: invalid JSON ({exc})") from None
    if not isinstance(data, dict):
        raise ConfigError(f"{path}: top level must be an object")
    allowed = COMMON_KEYS | COMMAND_KEYS[command]
    for key in data:
        if key not in allowed:
            raise ConfigError(f"{path}: {key}: unknown key for '{command}' "
                              f"(allowed: {', '.join(sorted(allowed))})")
    return data


def _int_field(cfg, key, minimum=None):
    try:
        val = int(cfg[key])
    except (TypeError, ValueError):
        raise ConfigError(f"{key}: expected an integer, got {cfg[key]!r}") from None
    if minimum is not None and val < minimum:
        raise ConfigError(f"{key}: must be >= {minimum}, got {val}")
    return val


def _threads(value):
    if value in (None, ""):
        value = os.environ.get(THREADS_ENV, "1")
    if str(value) == "auto":
        return os.cpu_count() or 1
    try:
        t = int(value)
    except ValueError:
        raise ConfigError(f"threads: expected an integer or 'auto', got {value!r}") from None
    if t < 1:
        raise ConfigError("threads: must be >= 1")
    return t


def effective_config(args) -> dict:
    cfg = dict(DEFAULTS[args.command])
    cfg.update({"out": ".", "seed": 0, "threads": None, "format": "csv"})
    if args.config:
        cfg.update(load_config(args.config, args.command))
    for key in COMMON_KEYS | COMMAND_KEYS[args.command]:
        val = getattr(args, key, None)
        if val is not None:
            cfg[key] = val
    if cfg.get("matrix") and getattr(args, "generate", None) is None:
        cfg.pop("generate", None)
    cfg["threads"] = _threads(cfg["threads"])
    if cfg["format"] not in ("csv", "json"):
        raise ConfigError(f"format: expected 'csv' or 'json', got {cfg['format']!r}")
    try:
        cfg["snr_db"] = parse_grid(cfg["snr_db"])
    except ValueError as exc:
        raise ConfigError(f"snr_db: {exc}") from None
    if not cfg["snr_db"]:
        raise ConfigError("snr_db: empty SNR grid")
    cfg["seed"] = _int_field(cfg, "seed", 0)
    return cfg


# ---------------------------------------------------------------------------


def cmd_alpha(cfg):
    rows = []
    for d in cfg["snr_db"]:
        snr = float(db_to_linear(d))
        m1, m2 = ca.subchannel_model(1, snr), ca.subchannel_model(2, snr)
        rows.append({
            "snr_db": d, "alpha1": m1.alpha, "alpha2": m2.alpha,
            "C1": m1.capacity, "C2": m2.capacity,
            "rho1": m1.bit_correlation, "rho2": m2.bit_correlation,
        })
    return rows, {}


def _seeds(cfg):
    count = _int_field(cfg, "seeds", 1)
    return list(range(cfg["seed"], cfg["seed"] + count))


def cmd_mi_curve(cfg):
    n, k = _int_field(cfg, "n", 2), _int_field(cfg, "k", 1)
    rows = run_mi_preservation(cfg["snr_db"], n=n, seeds=_seeds(cfg), k=k,
                               threads=cfg["threads"])
    return [r.csv_row() for r in rows], {"estimator": estimator_config(k)}


def cmd_efficiency(cfg):
    if cfg["mi_mode"] not in MI_MODES:
        raise ConfigError(f"mi_mode: expected one of {MI_MODES}, got {cfg['mi_mode']!r}")
    m = _int_field(cfg, "m", 1)
    k = _int_field(cfg, "k", 1)
    reports = efficiency_sweep(cfg["snr_db"], m=m, n_samples=_int_field(cfg, "n", 2),
                               seeds=_seeds(cfg), mi_mode=cfg["mi_mode"], k=k,
                               code_efficiency=float(cfg["code_efficiency"]),
                               threads=cfg["threads"], capacity_seed=cfg["seed"])
    return [r.csv_row() for r in reports], {"estimator": estimator_config(k)}


def _matrix_source(cfg):
    if cfg.get("matrix"):
        return MatrixSource(alist=str(cfg["matrix"]))
    try:
        parts = [int(p) for p in str(cfg["generate"]).split(",")]
        n, dv, dc = parts[:3]
        seed = parts[3] if len(parts) > 3 else 7
    except (ValueError, KeyError):
        raise ConfigError(f"generate: expected 'n,dv,dc[,seed]', got {cfg.get('generate')!r}") from None
    return MatrixSource.regular(n, dv, dc, seed)


def cmd_reconcile(cfg):
    if cfg["llr_mode"] not in LLR_MODES:
        raise ConfigError(f"llr_mode: expected one of {LLR_MODES}, got {cfg['llr_mode']!r}")
    src = _matrix_source(cfg)
    reports = run_reconciliation_experiment(
        cfg["snr_db"], n_frames=_int_field(cfg, "frames", 1), matrix_source=src,
        level=_int_field(cfg, "level", 1),
        max_iterations=_int_field(cfg, "max_iterations", 1),
        llr_mode=cfg["llr_mode"], base_seed=cfg["seed"], threads=cfg["threads"])
    extra = {
        "code": {"source": src.describe(), "description": src.load().description},
        "iteration_histograms": {str(r.snr_db): r.iteration_histogram for r in reports},
    }
    return [r.csv_row() for r in reports], extra


COMMANDS = {
    "alpha": cmd_alpha,
    "mi-curve": cmd_mi_curve,
    "efficiency": cmd_efficiency,
    "reconcile": cmd_reconcile,
}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="arithrec", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--config", help="JSON file with settings (strict keys)")
        sp.add_argument("--out", help="output directory (default: .)")
        sp.add_argument("--seed", type=int, help="base seed")
        sp.add_argument("--threads", help=f"worker threads or 'auto' (env {THREADS_ENV})")
        sp.add_argument("--format", choices=("csv", "json"))
        sp.add_argument("--snr-db", dest="snr_db",
                        help="SNR grid in dB: 'a,b,c' or 'start:stop:step'")

    sp = sub.add_parser("alpha", help="crossover probabilities and capacities of levels 1-2")
    common(sp)

    sp = sub.add_parser("mi-curve", help="KSG I(U;V) against analytic I(X;Y)")
    common(sp)
    sp.add_argument("--n", type=int)
    sp.add_argument("--seeds", type=int, help="number of replicates")
    sp.add_argument("--k", type=int)

    sp = sub.add_parser("efficiency", help="quantization efficiency sweep")
    common(sp)
    sp.add_argument("--m", type=int)
    sp.add_argument("--n", type=int)
    sp.add_argument("--seeds", type=int)
    sp.add_argument("--mi-mode", dest="mi_mode", choices=MI_MODES)
    sp.add_argument("--k", type=int)
    sp.add_argument("--code-efficiency", dest="code_efficiency", type=float)

    sp = sub.add_parser("reconcile", help="LDPC syndrome reconciliation experiment")
    common(sp)
    src = sp.add_mutually_exclusive_group()
    src.add_argument("--matrix", help="alist file with the parity-check matrix")
    src.add_argument("--generate", help="regular code 'n,dv,dc[,seed]'")
    sp.add_argument("--frames", type=int)
    sp.add_argument("--level", type=int)
    sp.add_argument("--max-iterations", dest="max_iterations", type=int)
    sp.add_argument("--llr-mode", dest="llr_mode", choices=LLR_MODES)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    try:
        cfg = effective_config(args)
    except ConfigError as exc:
        parser.error(str(exc))  # exits with status 2

    out_dir = Path(cfg["out"])
    out_dir.mkdir(parents=True, exist_ok=True)
    name = args.command.replace("-", "_")
    data_path = out_dir / f"{name}.{cfg['format']}"
    man_path = out_dir / f"{name}.manifest.json"
    try:
        rows, extra = COMMANDS[args.command](cfg)
        if cfg["format"] == "csv":
            write_csv(rows, data_path)
        else:
            write_json(rows, data_path)
        write_json(manifest(args.command, cfg, [data_path], **extra), man_path)
    except ConfigError as exc:
        parser.error(str(exc))
    except (QuadratureError, ValueError, OSError, ArithmeticError) as exc:
        for p in (data_path, man_path):
            p.unlink(missing_ok=True)
        print(f"arithrec {args.command}: error: {exc}", file=sys.stderr)
        return 1
    print(data_path)
    return 0


if __name__ == "__main__":
    sys.exit(main())
