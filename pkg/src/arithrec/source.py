"""Correlated Gaussian source modelling Alice's and Bob's measurements.

After the quantum stage the two parties hold ``X ~ N(0, 1)`` and
``Y = X + Z / sqrt(snr)`` with ``Z ~ N(0, 1)`` independent of ``X``.

Random numbers come from numpy's ``Philox`` counter-based bit generator;
normal variates use numpy's ziggurat sampler (``Generator.standard_normal``).
Samples are produced in fixed-size chunks, each chunk seeded by
``SeedSequence(seed, spawn_key=(chunk_index,))``, so a batch depends only on
``(n, snr, seed)`` and never on how chunks are scheduled.
"""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

CHUNK_SIZE = 1 << 16


def db_to_linear(snr_db):
    """Convert an SNR in dB to linear scale (``10 ** (dB / 10)``)."""
    return 10.0 ** (np.asarray(snr_db, dtype=float) / 10.0)


def linear_to_db(snr):
    return 10.0 * np.log10(np.asarray(snr, dtype=float))


def _check_snr(snr):
    snr = float(snr)
    if not snr > 0.0 or not np.isfinite(snr):
        raise ValueError(f"snr must be a positive finite number, got {snr!r}")
    return snr


def make_rng(seed: int, *key: int) -> np.random.Generator:
    """Philox generator for ``seed`` and an optional derivation key.

    ``make_rng(s, a, b)`` is a deterministic, statistically independent
    stream for every distinct ``(s, a, b)``.
    """
    ss = np.random.SeedSequence(int(seed), spawn_key=tuple(int(k) for k in key))
    return np.random.Generator(np.random.Philox(ss))


@dataclass(frozen=True)
class GaussianPairBatch:
    """Paired samples ``(x, y)`` with the SNR and seed that produced them."""

    x: np.ndarray
    y: np.ndarray
    snr: float
    seed: int

    def __post_init__(self):
        if self.x.ndim != 1 or self.x.shape != self.y.shape or self.x.size < 1:
            raise ValueError("x and y must be 1-D arrays of equal, non-zero length")
        _check_snr(self.snr)
        self.x.flags.writeable = False
        self.y.flags.writeable = False

    def __len__(self):
        return self.x.size

    @property
    def n(self) -> int:
        return self.x.size

    @property
    def y_std(self) -> float:
        """Exact marginal standard deviation of Y, ``sqrt(1 + 1/snr)``."""
        return float(np.sqrt(1.0 + 1.0 / self.snr))


def _chunk(seed, index, size):
    rng = make_rng(seed, index)
    x = rng.standard_normal(size)
    z = rng.standard_normal(size)
    return x, z


def sample_xz(n: int, seed: int, threads: int = 1):
    """Independent standard-normal streams ``(x, z)`` of length ``n``."""
    n = int(n)
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    sizes = [CHUNK_SIZE] * (n // CHUNK_SIZE)
    if n % CHUNK_SIZE:
        sizes.append(n % CHUNK_SIZE)
    jobs = list(enumerate(sizes))
    if threads > 1 and len(jobs) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(lambda job: _chunk(seed, *job), jobs))
    else:
        parts = [_chunk(seed, i, s) for i, s in jobs]
    x = np.concatenate([p[0] for p in parts])
    z = np.concatenate([p[1] for p in parts])
    return x, z


def sample_pairs(n: int, snr: float, seed: int, threads: int = 1) -> GaussianPairBatch:
    """Draw ``n`` pairs ``y = x + z / sqrt(snr)``.

    The underlying ``(x, z)`` streams depend on ``seed`` only, so batches at
    different SNRs with the same seed share their randomness (useful as
    common random numbers in sweeps).
    """
    snr = _check_snr(snr)
    x, z = sample_xz(n, seed, threads=threads)
    y = x + z / np.sqrt(snr)
    return GaussianPairBatch(x=x, y=y, snr=snr, seed=int(seed))


def correlation_coefficient(snr: float) -> float:
    """Pearson correlation of X and Y: ``1 / sqrt(1 + 1/snr)``."""
    snr = float(snr)
    if not snr > 0.0:
        raise ValueError(f"snr must be positive, got {snr!r}")
    return float(1.0 / np.sqrt(1.0 + 1.0 / snr))


def analytic_mutual_information(snr: float) -> float:
    """I(X;Y) = 0.5 * log2(1 + snr) in bits."""
    snr = _check_snr(snr)
    return float(0.5 * np.log1p(snr) / np.log(2.0))
