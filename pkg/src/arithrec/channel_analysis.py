"""Binary symmetric channels induced by the DTE.

Subchannel ``i`` links Alice's bit ``U_i`` with Bob's bit ``V_i``. Since the
bits are Bernoulli(1/2) and the joint law is symmetric under
``(U, V) -> (1 - U, 1 - V)``, the link is a BSC with crossover
``alpha_i = Pr[U_i != V_i] = 2 Pr[U_i = 0, V_i = 1]``.

Levels 1 and 2 are evaluated by adaptive Gauss-Kronrod quadrature (QUADPACK
via ``scipy.integrate.quad``) of single integrals over Alice's variable;
deeper levels only have the Monte Carlo path.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy import integrate
from scipy.special import ndtr, ndtri

from .dte import BitPlanes, expand_batch, distributional_transform
from .errors import QuadratureError, UnsupportedLevelError
from .source import sample_pairs

QUAD_TOL = 1e-9
# Standard normal mass beyond |x| = 9 is below 1e-18.
TAIL = 9.0

_X2 = float(ndtri(0.25))  # Phi^-1(1/4)
_X34 = float(ndtri(0.75))  # Phi^-1(3/4)


def _check_snr(snr):
    snr = float(snr)
    if not snr > 0.0:
        raise ValueError(f"snr must be positive, got {snr!r}")
    return snr


def _phi(x):
    return np.exp(-0.5 * x * x) / np.sqrt(2.0 * np.pi)


def _quad(func, lo, hi, what, points=None):
    res = integrate.quad(func, lo, hi, epsabs=1e-13, epsrel=1e-12, limit=400,
                         points=points, full_output=1)
    value, abserr = res[0], res[1]
    detail = res[3] if len(res) > 3 else ""
    if abserr > QUAD_TOL / 10 or not np.isfinite(value):
        raise QuadratureError(what, value, abserr, QUAD_TOL / 10, detail)
    return value


def _clamp_alpha(a):
    return float(min(max(a, 0.0), 0.5))


def y_quantile(q, snr):
    """Bob's marginal quantile ``F_Y^-1(q) = sqrt(1 + 1/snr) * Phi^-1(q)``."""
    snr = _check_snr(snr)
    q = np.asarray(q, dtype=float)
    if np.any(~((q > 0.0) & (q < 1.0))):
        raise ValueError("quantile level q must lie in (0, 1)")
    out = np.sqrt(1.0 + 1.0 / snr) * ndtri(q)
    return float(out) if out.ndim == 0 else out


def quantile_boundary(i: int, snr: float) -> float:
    """Boundary ``y_i = F_Y^-1(2**-i)`` on Bob's axis."""
    if int(i) < 1:
        raise ValueError(f"level must be >= 1, got {i}")
    return y_quantile(2.0 ** -int(i), snr)


def alpha1(snr: float) -> float:
    """Crossover of the first subchannel, ``2 int_0^inf Q(sqrt(snr) v) phi(v) dv``."""
    snr = _check_snr(snr)
    a = np.sqrt(snr)
    brk = [min(TAIL / 2, 1.0 / a)]
    val = _quad(lambda v: ndtr(-a * v) * _phi(v), 0.0, TAIL, "alpha1", points=brk)
    return _clamp_alpha(2.0 * val)


def event_probability(j: int, snr: float) -> float:
    """Pr[E_j], the four disjoint ways of having ``U_2 = 0`` and ``V_2 = 1``.

    ===  =====================  =====================
    j    Alice (F_X(X))          Bob (F_Y(Y))
    ===  =====================  =====================
    1    < 1/4                   in (1/4, 1/2)
    2    < 1/4                   > 3/4
    3    in (1/2, 3/4)           in (1/4, 1/2)
    4    in (1/2, 3/4)           > 3/4
    ===  =====================  =====================
    """
    snr = _check_snr(snr)
    a = np.sqrt(snr)
    b = np.sqrt(snr + 1.0)
    if j in (1, 3):
        # Bob's Y in (y_2, 0)
        def inner(x):
            return ndtr(-a * x) - ndtr(b * _X2 - a * x)
    elif j in (2, 4):
        # Bob's Y > F_Y^-1(3/4)
        def inner(x):
            return ndtr(a * x - b * _X34)
    else:
        raise ValueError(f"event index must be 1..4, got {j}")
    lo, hi = (-TAIL, _X2) if j in (1, 2) else (0.0, _X34)
    return _quad(lambda x: _phi(x) * inner(x), lo, hi, f"Pr[E{j}]")


def alpha2(snr: float) -> float:
    """Crossover of the second subchannel, ``2 * sum_j Pr[E_j]``."""
    return _clamp_alpha(2.0 * sum(event_probability(j, snr) for j in (1, 2, 3, 4)))


def alpha_empirical(level: int, alice: BitPlanes, bob: BitPlanes) -> float:
    """Fraction of positions where the two parties' level bits differ."""
    if alice.bits.shape != bob.bits.shape:
        raise ValueError(
            f"bit plane shapes differ: {alice.bits.shape} vs {bob.bits.shape}"
        )
    return float(np.mean(alice.level(level) != bob.level(level)))


def monte_carlo_alpha(levels, snr, n, seed, chunk=1 << 20):
    """Simulated crossovers for several levels.

    Returns ``(alpha, stderr)`` arrays aligned with ``levels``; the standard
    error is the binomial ``sqrt(a (1 - a) / n)``.
    """
    levels = [int(k) for k in levels]
    m = max(levels)
    errors = np.zeros(m)
    done = 0
    part = 0
    while done < n:
        size = min(chunk, n - done)
        batch = sample_pairs(size, snr, seed=_derive(seed, part))
        alice, bob = expand_batch(distributional_transform(batch), m)
        errors += np.count_nonzero(alice.bits != bob.bits, axis=1)
        done += size
        part += 1
    alpha = errors[np.array(levels) - 1] / n
    return alpha, np.sqrt(alpha * (1.0 - alpha) / n)


def _derive(seed, part):
    return int(np.random.SeedSequence(int(seed), spawn_key=(0x4D43, part)).generate_state(1, np.uint64)[0])


def binary_entropy(p):
    """h2(p) in bits, with 0 log 0 = 0."""
    p = np.asarray(p, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        h = -(p * np.log2(p) + (1.0 - p) * np.log2(1.0 - p))
    h = np.where((p <= 0.0) | (p >= 1.0), 0.0, h)
    return float(h) if h.ndim == 0 else h


def bsc_capacity(alpha):
    """Capacity ``1 - h2(alpha)`` of a BSC with crossover in [0, 1/2]."""
    a = np.asarray(alpha, dtype=float)
    if np.any(np.isnan(a)) or np.any((a < 0.0) | (a > 0.5)):
        raise ValueError(f"crossover must lie in [0, 1/2], got {alpha!r}")
    c = 1.0 - binary_entropy(a)
    return float(c) if np.ndim(c) == 0 else c


@dataclass(frozen=True)
class SubchannelModel:
    level: int
    alpha: float
    capacity: float
    bit_correlation: float
    snr: float
    alpha_stderr: float = 0.0

    @classmethod
    def from_alpha(cls, level, alpha, snr, alpha_stderr=0.0):
        alpha = _clamp_alpha(alpha)
        return cls(
            level=int(level),
            alpha=alpha,
            capacity=bsc_capacity(alpha),
            bit_correlation=1.0 - 2.0 * alpha,
            snr=float(snr),
            alpha_stderr=float(alpha_stderr),
        )


def analytic_alpha(level: int, snr: float) -> float:
    if level == 1:
        return alpha1(snr)
    if level == 2:
        return alpha2(snr)
    raise UnsupportedLevelError(
        f"no analytic crossover for level {level}; estimate it with "
        "alpha_empirical / monte_carlo_alpha and pass alpha= explicitly"
    )


def subchannel_model(level: int, snr: float, alpha: Optional[float] = None,
                     alpha_stderr: float = 0.0) -> SubchannelModel:
    """Assemble a :class:`SubchannelModel`.

    Levels 1 and 2 default to the quadrature crossover; other levels need an
    empirical ``alpha``.
    """
    level = int(level)
    if level < 1:
        raise ValueError(f"level must be >= 1, got {level}")
    snr = _check_snr(snr)
    if alpha is None:
        alpha = analytic_alpha(level, snr)
    return SubchannelModel.from_alpha(level, alpha, snr, alpha_stderr)
