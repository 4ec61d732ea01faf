"""End-to-end experiments.

* :func:`run_mi_preservation` - I(U;V) after the DTE against the analytic
  I(X;Y).
* :func:`run_reconciliation_experiment` - reverse reconciliation with
  syndrome coding: Bob publishes the syndrome of his level bits, Alice
  decodes from her side information.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from functools import lru_cache
from typing import Optional, Sequence

import numpy as np

from . import ldpc
from .channel_analysis import analytic_alpha, monte_carlo_alpha
from .dte import distributional_transform, expand_batch
from .mi_estimators import DEFAULT_K, ksg_mi
from .source import analytic_mutual_information, db_to_linear, sample_pairs

LLR_MODES = ("soft_x", "hard_bsc")


@dataclass(frozen=True)
class MatrixSource:
    """Where the parity-check matrix comes from: an alist file or a generator."""

    alist: Optional[str] = None
    n: Optional[int] = None
    dv: Optional[int] = None
    dc: Optional[int] = None
    seed: int = 0

    def __post_init__(self):
        if (self.alist is None) == (self.n is None):
            raise ValueError("give either an alist path or generator parameters (n, dv, dc)")
        if self.n is not None and (self.dv is None or self.dc is None):
            raise ValueError("generator needs n, dv and dc")

    @classmethod
    def regular(cls, n, dv, dc, seed=0):
        return cls(n=int(n), dv=int(dv), dc=int(dc), seed=int(seed))

    def load(self) -> ldpc.ParityCheckMatrix:
        return _load_matrix(self)

    def describe(self) -> dict:
        return {k: v for k, v in asdict(self).items() if v is not None}


@lru_cache(maxsize=8)
def _load_matrix(src: MatrixSource) -> ldpc.ParityCheckMatrix:
    if src.alist is not None:
        return ldpc.load_alist(src.alist)
    return ldpc.generate_regular(src.n, src.dv, src.dc, seed=src.seed)


DESK_MATRIX = MatrixSource.regular(4000, 3, 4, seed=7)


@dataclass(frozen=True)
class ReconcileTrialConfig:
    snr_db: float
    n_frames: int = 1
    matrix_source: MatrixSource = DESK_MATRIX
    level: int = 1
    max_iterations: int = ldpc.DEFAULT_MAX_ITERATIONS
    llr_mode: str = "soft_x"
    base_seed: int = 0

    def __post_init__(self):
        if self.n_frames < 1:
            raise ValueError("n_frames must be >= 1")
        if self.level < 1:
            raise ValueError("level must be >= 1")
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be >= 1")
        if self.llr_mode not in LLR_MODES:
            raise ValueError(f"llr_mode must be one of {LLR_MODES}, got {self.llr_mode!r}")

    @property
    def snr(self) -> float:
        return float(db_to_linear(self.snr_db))


def frame_seed(base_seed: int, frame_index: int) -> int:
    """Per-frame seed derived from ``(base_seed, frame_index)`` only."""
    ss = np.random.SeedSequence(int(base_seed), spawn_key=(0x5246, int(frame_index)))
    return int(ss.generate_state(1, np.uint64)[0])


@dataclass
class TrialResult:
    frame_index: int
    outcome: ldpc.DecodeOutcome
    sequence_matched: bool
    channel_errors: int

    @property
    def matched_syndrome_wrong_sequence(self) -> bool:
        return self.outcome.syndrome_matched and not self.sequence_matched


@lru_cache(maxsize=64)
def _hard_alpha(level: int, snr: float) -> float:
    if level <= 2:
        return analytic_alpha(level, snr)
    alpha, _ = monte_carlo_alpha([level], snr, 10**6, seed=0x41)
    return float(alpha[0])


def side_information_llrs(config: ReconcileTrialConfig, x, alice_bits) -> np.ndarray:
    if config.llr_mode == "soft_x":
        return ldpc.conditional_bit_llr(x, config.snr, config.level)
    return ldpc.hard_bsc_llr(alice_bits, _hard_alpha(config.level, config.snr))


def run_reconciliation_trial(config: ReconcileTrialConfig, frame_index: int,
                             H: Optional[ldpc.ParityCheckMatrix] = None) -> TrialResult:
    """Reconcile one code block of fresh samples."""
    H = H if H is not None else config.matrix_source.load()
    batch = sample_pairs(H.n, config.snr, frame_seed(config.base_seed, frame_index))
    alice, bob = expand_batch(distributional_transform(batch), config.level)
    v = bob.level(config.level)
    u = alice.level(config.level)
    target = ldpc.syndrome(H, v)
    llrs = side_information_llrs(config, batch.x, u)
    out = ldpc.decode_syndrome(H, llrs, target, config.max_iterations, reference=v)
    return TrialResult(
        frame_index=int(frame_index),
        outcome=out,
        sequence_matched=out.bit_errors_vs_reference == 0,
        channel_errors=int(np.count_nonzero(u != v)),
    )


@dataclass
class ReconcileReport:
    snr_db: float
    frames: int
    syndrome_match_rate: float
    sequence_match_rate: float
    mean_iterations: float
    iteration_histogram: list
    residual_ber: float
    channel_ber: float
    matched_syndrome_wrong_sequence: int
    llr_mode: str = "soft_x"
    code: str = ""

    def csv_row(self) -> dict:
        return {
            "snr_db": self.snr_db, "frames": self.frames,
            "syndrome_match_rate": self.syndrome_match_rate,
            "sequence_match_rate": self.sequence_match_rate,
            "mean_iterations": self.mean_iterations,
            "residual_ber": self.residual_ber, "channel_ber": self.channel_ber,
            "matched_syndrome_wrong_sequence": self.matched_syndrome_wrong_sequence,
            "llr_mode": self.llr_mode,
        }


def summarize(config: ReconcileTrialConfig, trials: Sequence[TrialResult], n: int) -> ReconcileReport:
    frames = len(trials)
    iters = np.array([t.outcome.iterations for t in trials])
    errs = sum(t.outcome.bit_errors_vs_reference for t in trials)
    return ReconcileReport(
        snr_db=float(config.snr_db),
        frames=frames,
        syndrome_match_rate=sum(t.outcome.syndrome_matched for t in trials) / frames,
        sequence_match_rate=sum(t.sequence_matched for t in trials) / frames,
        mean_iterations=float(iters.mean()),
        iteration_histogram=np.bincount(iters, minlength=config.max_iterations + 1).tolist(),
        residual_ber=errs / (frames * n),
        channel_ber=sum(t.channel_errors for t in trials) / (frames * n),
        matched_syndrome_wrong_sequence=sum(t.matched_syndrome_wrong_sequence for t in trials),
        llr_mode=config.llr_mode,
    )


def run_reconciliation_point(config: ReconcileTrialConfig, threads: int = 1):
    """All frames of one SNR point; returns ``(report, trials)``."""
    H = config.matrix_source.load()
    idx = range(config.n_frames)
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            trials = list(pool.map(lambda i: run_reconciliation_trial(config, i, H), idx))
    else:
        trials = [run_reconciliation_trial(config, i, H) for i in idx]
    report = summarize(config, trials, H.n)
    report.code = H.description
    return report, trials


def run_reconciliation_experiment(snr_db_grid, n_frames: int = 250,
                                  matrix_source: MatrixSource = DESK_MATRIX,
                                  level: int = 1,
                                  max_iterations: int = ldpc.DEFAULT_MAX_ITERATIONS,
                                  llr_mode: str = "soft_x", base_seed: int = 0,
                                  threads: int = 1) -> list[ReconcileReport]:
    """Reports for every SNR point in ``snr_db_grid``.

    Frame ``i`` uses the same underlying noise at every SNR.
    """
    grid = [float(d) for d in snr_db_grid]
    if not grid:
        raise ValueError("empty SNR grid")
    reports = []
    for d in grid:
        cfg = ReconcileTrialConfig(d, n_frames, matrix_source, level, max_iterations,
                                   llr_mode, base_seed)
        reports.append(run_reconciliation_point(cfg, threads)[0])
    return reports


@dataclass
class MiPreservationRow:
    snr_db: float
    i_xy_analytic: float
    i_uv_ksg: float
    i_uv_ksg_stderr: float
    i_xy_ksg: float
    i_xy_ksg_stderr: float
    n: int
    seeds: int
    k: int = DEFAULT_K
    per_seed_uv: list = field(default_factory=list, repr=False)

    def csv_row(self) -> dict:
        return {
            "snr_db": self.snr_db, "I_XY_analytic": self.i_xy_analytic,
            "I_UV_ksg": self.i_uv_ksg, "stderr": self.i_uv_ksg_stderr,
            "I_XY_ksg": self.i_xy_ksg, "I_XY_ksg_stderr": self.i_xy_ksg_stderr,
        }


def _stderr(values):
    values = np.asarray(values, dtype=float)
    if values.size < 2:
        return 0.0
    return float(values.std(ddof=1) / math.sqrt(values.size))


def run_mi_preservation(snr_db_grid, n: int = 5000, seeds: Sequence[int] = tuple(range(10)),
                        k: int = DEFAULT_K, threads: int = 1) -> list[MiPreservationRow]:
    """KSG estimates of I(U;V) and I(X;Y) against ``0.5 log2(1 + snr)``."""
    if n <= k:
        raise ValueError(f"need n > k, got n={n}, k={k}")
    grid = [float(d) for d in snr_db_grid]
    if not grid:
        raise ValueError("empty SNR grid")
    seeds = list(seeds)

    def job(args):
        d, s = args
        batch = sample_pairs(n, float(db_to_linear(d)), s)
        unit = distributional_transform(batch)
        return ksg_mi(unit.u, unit.v, k).value, ksg_mi(batch.x, batch.y, k).value

    jobs = [(d, s) for d in grid for s in seeds]
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            res = list(pool.map(job, jobs))
    else:
        res = [job(j) for j in jobs]
    rows = []
    for gi, d in enumerate(grid):
        chunk = res[gi * len(seeds):(gi + 1) * len(seeds)]
        uv = [c[0] for c in chunk]
        xy = [c[1] for c in chunk]
        rows.append(MiPreservationRow(
            snr_db=d,
            i_xy_analytic=analytic_mutual_information(float(db_to_linear(d))),
            i_uv_ksg=float(np.mean(uv)), i_uv_ksg_stderr=_stderr(uv),
            i_xy_ksg=float(np.mean(xy)), i_xy_ksg_stderr=_stderr(xy),
            n=n, seeds=len(seeds), k=k, per_seed_uv=uv,
        ))
    return rows
