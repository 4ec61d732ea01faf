"""Quantization and reconciliation efficiencies.

Every ratio is normalised by the Gaussian channel's I(X;Y) in bits:

* ``beta_q_forward``  = sum_i I(U_i; Y) / I(X;Y)   (direct reconciliation)
* ``beta_q_reverse``  = sum_i I(V_i; X) / I(X;Y)   (reverse reconciliation)
* ``beta_q_max``      = sum_i C_i / I(X;Y)         (same for both directions)
* ``beta_total``      = sum_i R_i / I(X;Y)         (real codes, R_i <= C_i)
"""
from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from . import mi_estimators as mie
from .channel_analysis import SubchannelModel, monte_carlo_alpha, subchannel_model
from .dte import distributional_transform, expand_batch
from .errors import InfeasibleRateError
from .source import analytic_mutual_information, db_to_linear, sample_pairs

log = logging.getLogger(__name__)

MI_MODES = ("vs_X", "vs_U", "hard_dd")
DEFAULT_GRID_DB = tuple(float(d) for d in range(-14, 3))
CAPACITY_SAMPLES = 10**6


def _seq(values, name):
    arr = np.asarray(values, dtype=float).ravel()
    if arr.size == 0:
        raise ValueError(f"{name} must not be empty")
    return arr


def clamp_mi(values):
    """Clamp negative MI estimates to zero; returns ``(clamped, n_clamped)``."""
    arr = _seq(values, "per-level MI")
    neg = int(np.count_nonzero(arr < 0))
    if neg:
        log.warning("clamped %d negative MI estimate(s) to 0", neg)
    return np.maximum(arr, 0.0), neg


def beta_q_reverse(per_level_mi, snr: float) -> float:
    """``sum_i I(V_i; X) / I(X;Y)``; negative entries are clamped to 0."""
    mi, _ = clamp_mi(per_level_mi)
    return float(mi.sum() / analytic_mutual_information(snr))


def beta_q_forward(per_level_mi, snr: float) -> float:
    """``sum_i I(U_i; Y) / I(X;Y)``; negative entries are clamped to 0."""
    mi, _ = clamp_mi(per_level_mi)
    return float(mi.sum() / analytic_mutual_information(snr))


def beta_q_max(capacities, snr: float) -> float:
    """``sum_i C_i / I(X;Y)``, the common upper bound of both directions."""
    caps = _seq(capacities, "capacities")
    if np.any(caps < 0):
        raise ValueError("capacities must be non-negative")
    return float(caps.sum() / analytic_mutual_information(snr))


def _check_rates(code_rates, capacities):
    rates = _seq(code_rates, "code rates")
    caps = _seq(capacities, "capacities")
    if rates.shape != caps.shape:
        raise ValueError("code rates and capacities must have the same length")
    if np.any(rates < 0):
        raise ValueError("code rates must be non-negative")
    over = np.nonzero(rates > caps + 1e-12)[0]
    if over.size:
        i = int(over[0])
        raise InfeasibleRateError(
            f"level {i + 1}: rate {rates[i]:.6g} exceeds capacity {caps[i]:.6g}"
        )
    return rates, caps


def beta_total(code_rates, capacities, snr: float) -> float:
    """Overall efficiency ``sum_i R_i / I(X;Y)`` of a code assignment."""
    rates, _ = _check_rates(code_rates, capacities)
    return float(rates.sum() / analytic_mutual_information(snr))


def implied_code_efficiency(code_rates, capacities) -> float:
    """Common code efficiency ``beta_c`` with ``R_i = beta_c C_i``.

    Computed as ``sum R_i / sum C_i``, which is exact when all levels share
    one ``beta_c`` and a capacity-weighted average otherwise.
    """
    rates, caps = _check_rates(code_rates, capacities)
    total = caps.sum()
    return float(rates.sum() / total) if total > 0 else 0.0


def subchannel_models(snr: float, m: int, mc_samples: int = CAPACITY_SAMPLES,
                      seed: int = 0) -> list[SubchannelModel]:
    """Models for levels ``1..m``: quadrature for 1-2, Monte Carlo beyond."""
    models = [subchannel_model(i, snr) for i in range(1, min(m, 2) + 1)]
    if m > 2:
        levels = list(range(3, m + 1))
        alpha, err = monte_carlo_alpha(levels, snr, mc_samples, seed)
        models += [subchannel_model(lv, snr, alpha=a, alpha_stderr=e)
                   for lv, a, e in zip(levels, alpha, err)]
    return models


def capacity_stderr(model: SubchannelModel) -> float:
    """Delta-method standard error of ``1 - h2(alpha)``."""
    a = model.alpha
    if model.alpha_stderr == 0.0 or a <= 0.0 or a >= 0.5:
        return 0.0
    return float(abs(np.log2((1.0 - a) / a)) * model.alpha_stderr)


@dataclass
class EfficiencyReport:
    snr_db: float
    m: int
    mi_mode: str
    beta_q_forward: float
    beta_q_reverse: float
    beta_q_max: float
    beta_total: float
    per_level_mi: list
    per_level_mi_forward: list
    per_level_capacity: list
    per_level_capacity_stderr: list
    n_samples: int
    n_seeds: int
    clamped_estimates: int
    estimator_config: dict = field(default_factory=dict)

    def csv_row(self) -> dict:
        row = {
            "snr_db": self.snr_db, "m": self.m, "mi_mode": self.mi_mode,
            "beta_q_fwd": self.beta_q_forward, "beta_q_rev": self.beta_q_reverse,
            "beta_q_max": self.beta_q_max, "beta_total": self.beta_total,
        }
        row.update({f"mi_{i + 1}": v for i, v in enumerate(self.per_level_mi)})
        row.update({f"c_{i + 1}": v for i, v in enumerate(self.per_level_capacity)})
        return row


def level_mi(batch, m: int, mi_mode: str, k: int = mie.DEFAULT_K):
    """Per-level MI for one batch: ``(reverse, forward)`` arrays of length m.

    ``vs_X``: I(X; V_i) and I(Y; U_i); ``vs_U``: I(U; V_i) and I(V; U_i);
    ``hard_dd``: I(U_i; V_i) for both.
    """
    if mi_mode not in MI_MODES:
        raise ValueError(f"mi_mode must be one of {MI_MODES}, got {mi_mode!r}")
    unit = distributional_transform(batch)
    alice, bob = expand_batch(unit, m)
    rev = np.empty(m)
    fwd = np.empty(m)
    for i in range(m):
        a_bits, b_bits = alice.bits[i], bob.bits[i]
        if mi_mode == "hard_dd":
            rev[i] = fwd[i] = mie.plugin_mi_dd(a_bits, b_bits).value
            continue
        alice_c, bob_c = (batch.x, batch.y) if mi_mode == "vs_X" else (unit.u, unit.v)
        rev[i] = mie.knn_mi_cd(alice_c, b_bits, k=k).value
        fwd[i] = mie.knn_mi_cd(bob_c, a_bits, k=k).value
    return rev, fwd


def efficiency_point(snr_db: float, m: int, n_samples: int, seeds: Sequence[int],
                     mi_mode: str = "vs_X", k: int = mie.DEFAULT_K,
                     models: Optional[list] = None, code_efficiency: float = 1.0,
                     threads: int = 1, capacity_seed: int = 0) -> EfficiencyReport:
    """One sweep point, averaging raw per-level MI over ``seeds``.

    The batch for seed ``s`` is ``sample_pairs(n_samples, snr, s)`` so the
    same seeds at different SNRs reuse the same underlying noise.
    """
    snr = float(db_to_linear(snr_db))
    seeds = list(seeds)
    if not seeds:
        raise ValueError("need at least one seed")

    def job(seed):
        return level_mi(sample_pairs(n_samples, snr, seed), m, mi_mode, k)

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(job, seeds))
    else:
        results = [job(s) for s in seeds]
    rev = np.mean([r[0] for r in results], axis=0)
    fwd = np.mean([r[1] for r in results], axis=0)
    rev_c, neg_r = clamp_mi(rev)
    fwd_c, neg_f = clamp_mi(fwd)

    if models is None:
        models = subchannel_models(snr, m, seed=capacity_seed)
    caps = [md.capacity for md in models[:m]]
    bmax = beta_q_max(caps, snr)
    if not 0.0 <= code_efficiency <= 1.0:
        raise ValueError("code_efficiency must lie in [0, 1]")
    btot = beta_total([code_efficiency * c for c in caps], caps, snr)
    return EfficiencyReport(
        snr_db=float(snr_db), m=m, mi_mode=mi_mode,
        beta_q_forward=beta_q_forward(fwd_c, snr),
        beta_q_reverse=beta_q_reverse(rev_c, snr),
        beta_q_max=bmax, beta_total=btot,
        per_level_mi=[float(v) for v in rev],
        per_level_mi_forward=[float(v) for v in fwd],
        per_level_capacity=caps,
        per_level_capacity_stderr=[capacity_stderr(md) for md in models[:m]],
        n_samples=int(n_samples), n_seeds=len(seeds),
        clamped_estimates=neg_r + neg_f,
        estimator_config=mie.estimator_config(k),
    )


def efficiency_sweep(snr_db_grid=DEFAULT_GRID_DB, m: int = 4, n_samples: int = 5000,
                     seeds: Sequence[int] = tuple(range(10)), mi_mode: str = "vs_X",
                     k: int = mie.DEFAULT_K, code_efficiency: float = 1.0,
                     threads: int = 1, capacity_seed: int = 0) -> list[EfficiencyReport]:
    """Efficiency reports over an SNR grid (default -14..2 dB, 1 dB steps)."""
    grid = [float(d) for d in snr_db_grid]
    if not grid:
        raise ValueError("empty SNR grid")
    return [
        efficiency_point(d, m, n_samples, seeds, mi_mode, k,
                         code_efficiency=code_efficiency, threads=threads,
                         capacity_seed=capacity_seed)
        for d in grid
    ]
