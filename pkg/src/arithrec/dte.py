"""Distributional Transform Expansion (DTE).

Each party maps its sample through its own marginal CDF, which makes it
uniform on [0, 1], and keeps the first ``m`` binary digits of the result.
Digit ``k`` of ``u`` is 1 exactly when ``u`` lies in one of the half-open
intervals ``[(2j - 1) / 2**k, 2j / 2**k)``; ``u == 1.0`` is clamped into the
last interval and therefore expands to all ones.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import ndtr

from .source import GaussianPairBatch

MAX_PRECISION = 52
# Largest double below 1; its first 52 binary digits are all ones.
_ONE_MINUS = np.nextafter(1.0, 0.0)


def normal_cdf(x):
    """Standard normal CDF.

    Uses ``scipy.special.ndtr`` (Cephes, erf/erfc based), accurate to a few
    ulp over the whole real line.
    """
    return ndtr(x)


@dataclass(frozen=True)
class UnitPairBatch:
    u: np.ndarray
    v: np.ndarray
    snr: float

    def __post_init__(self):
        for name in ("u", "v"):
            arr = getattr(self, name)
            if np.any((arr < 0.0) | (arr > 1.0)) or np.any(np.isnan(arr)):
                raise ValueError(f"{name} has entries outside [0, 1]")
        if self.u.shape != self.v.shape:
            raise ValueError("u and v must have equal shape")

    @property
    def n(self) -> int:
        return self.u.size


@dataclass(frozen=True)
class BitPlanes:
    """Binary matrix of shape ``(m, n)``; row ``i`` is subchannel ``i + 1``."""

    bits: np.ndarray

    def __post_init__(self):
        if self.bits.ndim != 2:
            raise ValueError("bits must be a 2-D (m, n) array")

    @property
    def m(self) -> int:
        return self.bits.shape[0]

    @property
    def n(self) -> int:
        return self.bits.shape[1]

    def level(self, k: int) -> np.ndarray:
        """Bit sequence of subchannel ``k`` (1-based)."""
        if not 1 <= k <= self.m:
            raise ValueError(f"level must be in [1, {self.m}], got {k}")
        return self.bits[k - 1]


def distributional_transform(batch: GaussianPairBatch) -> UnitPairBatch:
    """``u = Phi(x)`` and ``v = Phi(y / sqrt(1 + 1/snr))``."""
    u = normal_cdf(batch.x)
    v = normal_cdf(batch.y / batch.y_std)
    return UnitPairBatch(u=u, v=v, snr=batch.snr)


def _check_unit(u):
    u = np.asarray(u, dtype=float)
    if np.any(np.isnan(u)) or np.any((u < 0.0) | (u > 1.0)):
        raise ValueError("values must lie in [0, 1]")
    return u


def bits_of_level(u, k: int) -> np.ndarray:
    """Vectorised k-th binary digit of every entry of ``u``."""
    k = int(k)
    if not 1 <= k <= MAX_PRECISION:
        raise ValueError(f"level must be in [1, {MAX_PRECISION}], got {k}")
    u = np.minimum(_check_unit(u), _ONE_MINUS)
    # scaling by 2**k is exact in binary floating point
    return (np.floor(np.ldexp(u, k)).astype(np.int64) & 1).astype(np.uint8)


def bit_of_level(u: float, k: int) -> int:
    """k-th binary digit (``k >= 1``) of a scalar ``u`` in [0, 1]."""
    return int(bits_of_level(np.array([u]), k)[0])


def expand(u, m: int) -> BitPlanes:
    """First ``m`` expansion bits of every entry of ``u``."""
    m = int(m)
    if not 1 <= m <= MAX_PRECISION:
        raise ValueError(f"precision m must be in [1, {MAX_PRECISION}], got {m}")
    u = np.minimum(_check_unit(u), _ONE_MINUS)
    ints = np.floor(np.ldexp(u, m)).astype(np.int64)
    shifts = np.arange(m - 1, -1, -1, dtype=np.int64)[:, None]
    return BitPlanes(((ints[None, :] >> shifts) & 1).astype(np.uint8))


def expand_batch(unit: UnitPairBatch, m: int):
    """Expand both parties; returns ``(alice, bob)`` BitPlanes."""
    return expand(unit.u, m), expand(unit.v, m)


def reassemble(planes: BitPlanes) -> np.ndarray:
    """Dyadic value ``sum_k bits[k] * 2**-k`` for every column."""
    weights = np.ldexp(1.0, -np.arange(1, planes.m + 1))
    return weights @ planes.bits.astype(float)
