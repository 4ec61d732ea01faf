"""Mutual information estimators (all results in bits).

* :func:`ksg_mi` - Kraskov-Stoegbauer-Grassberger estimator (first variant,
  max-norm) for two continuous scalars.
* :func:`knn_mi_cd` - k-NN estimator for a continuous scalar against a
  discrete label, built on the Kozachenko-Leonenko entropy estimator
  (the construction popularised by Ross, 2014).
* :func:`plugin_mi_dd` - plug-in estimate from the empirical joint table of
  two binary sequences.

Neighbour searches are exact (``scipy.spatial.cKDTree``). Averages use
``math.fsum`` so estimates do not depend on sample order. Exact duplicate
coordinates make k-NN distances degenerate; when present, a deterministic
jitter of relative size 1e-11 (seeded by ``jitter_seed``) is added to the
affected marginal.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.spatial import cKDTree
from scipy.special import digamma

from .errors import DegenerateInputError

LN2 = math.log(2.0)
DEFAULT_K = 3
JITTER_SCALE = 1e-11


@dataclass(frozen=True)
class MiEstimate:
    value: float
    k_neighbors: int
    n_samples: int
    estimator: str  # "ksg_cc", "knn_cd" or "plugin_dd"
    notes: dict = field(default_factory=dict, compare=False)

    def __float__(self):
        return self.value


def estimator_config(k: int = DEFAULT_K) -> dict:
    """Descriptor recorded alongside every report that uses these estimators."""
    return {
        "ksg_cc": {"variant": 1, "norm": "max", "k": k},
        "knn_cd": {"base": "kozachenko-leonenko", "norm": "abs", "k": k},
        "plugin_dd": {"table": "2x2 empirical"},
        "units": "bits",
        "jitter": {"relative_scale": JITTER_SCALE, "applied": "only on duplicate values"},
    }


def _mean(values) -> float:
    return math.fsum(values) / len(values)


def _as_1d(a, name):
    a = np.asarray(a, dtype=float)
    if a.ndim != 1:
        raise ValueError(f"{name} must be one-dimensional")
    if not np.all(np.isfinite(a)):
        raise ValueError(f"{name} contains non-finite values")
    return a


def _dejitter(a, seed, stream):
    """Break exact ties with a tiny deterministic perturbation."""
    if np.unique(a).size == a.size:
        return a, False
    scale = JITTER_SCALE * max(float(np.std(a)), float(np.max(np.abs(a))), 1.0)
    rng = np.random.Generator(np.random.Philox(np.random.SeedSequence(seed, spawn_key=(stream,))))
    return a + scale * rng.standard_normal(a.size), True


def _count_within(values, radius):
    """Number of points with |v_j - v_i| <= radius_i, self included."""
    tree = cKDTree(values[:, None])
    return np.asarray(
        tree.query_ball_point(values[:, None], radius, p=np.inf, return_length=True)
    )


def ksg_mi(xs, ys, k: int = DEFAULT_K, jitter_seed: int = 0) -> MiEstimate:
    """KSG estimate of I(X;Y) for paired scalar samples.

    ``psi(k) + psi(n) - <psi(n_x + 1) + psi(n_y + 1)>`` where ``n_x`` counts
    the other points strictly closer in x than the k-th joint neighbour under
    the max-norm.
    """
    x = _as_1d(xs, "xs")
    y = _as_1d(ys, "ys")
    if x.size != y.size:
        raise ValueError(f"length mismatch: {x.size} vs {y.size}")
    n = x.size
    k = int(k)
    if not 1 <= k < n:
        raise ValueError(f"need 1 <= k < n, got k={k}, n={n}")
    x, jx = _dejitter(x, jitter_seed, 0)
    y, jy = _dejitter(y, jitter_seed, 1)

    joint = np.column_stack([x, y])
    dist, _ = cKDTree(joint).query(joint, k=k + 1, p=np.inf)
    eps = np.nextafter(dist[:, -1], 0.0)
    # counts include the point itself, i.e. they already equal n_x + 1
    nx1 = _count_within(x, eps)
    ny1 = _count_within(y, eps)
    nats = digamma(k) + digamma(n) - _mean(digamma(nx1) + digamma(ny1))
    return MiEstimate(float(nats / LN2), k, n, "ksg_cc", {"jittered": jx or jy})


def knn_mi_cd(xs, bits, k: int = DEFAULT_K, jitter_seed: int = 0) -> MiEstimate:
    """k-NN estimate of I(X;B) for continuous ``xs`` and discrete ``bits``.

    For each sample the distance ``d`` to its k-th neighbour within its own
    class is found; ``m`` counts all samples within ``d``. Then
    ``I = psi(n) - <psi(n_class)> + psi(k) - <psi(m)>``.
    """
    x = _as_1d(xs, "xs")
    b = np.asarray(bits)
    if b.shape != x.shape:
        raise ValueError(f"length mismatch: {x.size} vs {b.size}")
    n = x.size
    k = int(k)
    if k < 1:
        raise ValueError("k must be >= 1")
    labels, inverse, counts = np.unique(b, return_inverse=True, return_counts=True)
    if labels.size < 2:
        raise DegenerateInputError(
            "discrete sequence has a single class; the k-NN estimator is undefined"
        )
    x, jittered = _dejitter(x, jitter_seed, 2)

    radius = np.zeros(n)
    k_all = np.zeros(n)
    class_n = counts[inverse].astype(float)
    for c in range(labels.size):
        mask = inverse == c
        if counts[c] < 2:
            continue
        kc = min(k, int(counts[c]) - 1)
        pts = x[mask][:, None]
        dist, _ = cKDTree(pts).query(pts, k=kc + 1)
        radius[mask] = np.nextafter(dist[:, -1], 0.0)
        k_all[mask] = kc
    keep = class_n > 1
    if keep.sum() <= k:
        raise DegenerateInputError("too few samples in non-singleton classes")
    if not keep.all():
        # singleton classes are dropped from the sample entirely
        x, radius, k_all, class_n = x[keep], radius[keep], k_all[keep], class_n[keep]
    m_all = _count_within(x, radius)
    n_used = x.size
    nats = (
        digamma(n_used)
        - _mean(digamma(class_n))
        + _mean(digamma(k_all))
        - _mean(digamma(m_all))
    )
    return MiEstimate(float(nats / LN2), k, n_used, "knn_cd", {"jittered": jittered})


def plugin_mi_dd(a, b) -> MiEstimate:
    """Plug-in MI of two binary sequences from their empirical 2x2 table."""
    a = np.asarray(a).astype(np.int64).ravel()
    b = np.asarray(b).astype(np.int64).ravel()
    if a.size != b.size:
        raise ValueError(f"length mismatch: {a.size} vs {b.size}")
    n = a.size
    if n < 1:
        raise ValueError("need at least one sample")
    if np.any((a < 0) | (a > 1)) or np.any((b < 0) | (b > 1)):
        raise ValueError("inputs must be binary")
    joint = np.bincount(2 * a + b, minlength=4).reshape(2, 2) / n
    pa = joint.sum(axis=1, keepdims=True)
    pb = joint.sum(axis=0, keepdims=True)
    nz = joint > 0
    terms = joint[nz] * np.log2(joint[nz] / (pa @ pb)[nz])
    value = min(max(math.fsum(terms), 0.0), 1.0)
    return MiEstimate(value, 0, n, "plugin_dd")
