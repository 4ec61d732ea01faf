"""LDPC syndrome coding for Slepian-Wolf reconciliation.

Bob sends the syndrome ``s = H v (mod 2)`` of his bits; Alice runs belief
propagation on her side-information LLRs with every check-node message
multiplied by ``(-1)**s_j`` so the decoder searches the coset of ``s``
rather than the code itself.

LLRs are natural-log ratios ``log Pr(bit = 0) / Pr(bit = 1)``.
"""
from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Sequence

import numpy as np
from scipy import sparse
from scipy.special import log_ndtr, ndtr, ndtri

from .errors import AlistParseError

LLR_CLIP = 30.0
DEFAULT_MAX_ITERATIONS = 50


class ParityCheckMatrix:
    """Sparse binary ``r x n`` parity-check matrix.

    Stored as an edge list sorted by (check, variable); ``rows`` and ``cols``
    are the two adjacency views. Instances are treated as immutable.
    """

    def __init__(self, n: int, r: int, edge_check, edge_var, description: str = ""):
        self.n = int(n)
        self.r = int(r)
        ec = np.asarray(edge_check, dtype=np.int64)
        ev = np.asarray(edge_var, dtype=np.int64)
        if ec.shape != ev.shape or ec.ndim != 1:
            raise ValueError("edge arrays must be 1-D and of equal length")
        if self.n < 1 or self.r < 1:
            raise ValueError("matrix dimensions must be positive")
        if ec.size and (ec.min() < 0 or ec.max() >= self.r or ev.min() < 0 or ev.max() >= self.n):
            raise ValueError("edge index out of range")
        order = np.lexsort((ev, ec))
        ec, ev = ec[order], ev[order]
        if ec.size > 1 and np.any((np.diff(ec) == 0) & (np.diff(ev) == 0)):
            raise ValueError("duplicate entry in parity-check matrix")
        self.edge_check = ec
        self.edge_var = ev
        self.edge_check.flags.writeable = False
        self.edge_var.flags.writeable = False
        self.description = description
        self._rows = None
        self._cols = None

    @classmethod
    def from_dense(cls, H, description: str = "dense"):
        H = np.asarray(H)
        c, v = np.nonzero(H % 2)
        return cls(H.shape[1], H.shape[0], c, v, description)

    @property
    def num_edges(self) -> int:
        return self.edge_check.size

    @property
    def rows(self) -> list:
        """Sorted variable indices of every check."""
        if self._rows is None:
            bounds = np.searchsorted(self.edge_check, np.arange(self.r + 1))
            self._rows = [self.edge_var[bounds[i]:bounds[i + 1]] for i in range(self.r)]
        return self._rows

    @property
    def cols(self) -> list:
        """Sorted check indices of every variable."""
        if self._cols is None:
            order = np.lexsort((self.edge_check, self.edge_var))
            ev, ec = self.edge_var[order], self.edge_check[order]
            bounds = np.searchsorted(ev, np.arange(self.n + 1))
            self._cols = [ec[bounds[j]:bounds[j + 1]] for j in range(self.n)]
        return self._cols

    def row_degrees(self) -> np.ndarray:
        return np.bincount(self.edge_check, minlength=self.r)

    def col_degrees(self) -> np.ndarray:
        return np.bincount(self.edge_var, minlength=self.n)

    def to_sparse(self) -> sparse.csr_matrix:
        data = np.ones(self.num_edges, dtype=np.int64)
        return sparse.csr_matrix((data, (self.edge_check, self.edge_var)), shape=(self.r, self.n))

    def to_dense(self) -> np.ndarray:
        return self.to_sparse().toarray().astype(np.uint8)

    def count_4cycles(self) -> int:
        """Number of length-4 cycles (pairs of columns sharing two checks)."""
        A = self.to_sparse()
        G = (A.T @ A).tocoo()
        off = G.row < G.col
        k = G.data[off]
        return int(np.sum(k * (k - 1) // 2))

    def __repr__(self):
        return f"ParityCheckMatrix(n={self.n}, r={self.r}, edges={self.num_edges}, {self.description!r})"


# ---------------------------------------------------------------------------
# alist I/O


def _int_tokens(line, lineno):
    try:
        return [int(t) for t in line.split()]
    except ValueError:
        raise AlistParseError(f"non-integer token in {line.strip()!r}", lineno) from None


def load_alist(path) -> ParityCheckMatrix:
    """Read an alist file (MacKay's format).

    Layout: ``n r``; max column/row degree; ``n`` column degrees; ``r`` row
    degrees; ``n`` lines of 1-based check indices per column; ``r`` lines of
    1-based variable indices per row. Zero padding of short lists is
    accepted. The row section is checked against the column section.
    """
    path = Path(path)
    lines = [(i + 1, ln) for i, ln in enumerate(path.read_text().splitlines()) if ln.strip()]
    pos = 0

    def next_line(what):
        nonlocal pos
        if pos >= len(lines):
            last = lines[-1][0] if lines else 0
            raise AlistParseError(f"unexpected end of file while reading {what}", last + 1)
        lineno, text = lines[pos]
        pos += 1
        return lineno, _int_tokens(text, lineno)

    lineno, head = next_line("dimensions")
    if len(head) != 2 or min(head) < 1:
        raise AlistParseError("expected 'n r' with positive values", lineno)
    n, r = head
    lineno, maxdeg = next_line("maximum degrees")
    if len(maxdeg) != 2:
        raise AlistParseError("expected two maximum degrees", lineno)

    def read_counts(count, what):
        vals = []
        first = None
        while len(vals) < count:
            ln, toks = next_line(what)
            first = first or ln
            vals.extend(toks)
        if len(vals) != count:
            raise AlistParseError(f"expected {count} {what}, got {len(vals)}", first)
        return np.array(vals, dtype=np.int64)

    col_deg = read_counts(n, "column degrees")
    row_deg = read_counts(r, "row degrees")
    if col_deg.max(initial=0) > maxdeg[0] or row_deg.max(initial=0) > maxdeg[1]:
        raise AlistParseError("degree exceeds declared maximum", lineno)
    if col_deg.sum() != row_deg.sum():
        raise AlistParseError("column and row degree totals differ", lineno)

    def read_lists(count, degrees, bound, what):
        out = []
        for idx in range(count):
            ln, toks = next_line(f"{what} {idx + 1}")
            nz = [t for t in toks if t != 0]
            if len(nz) != degrees[idx]:
                raise AlistParseError(
                    f"{what} {idx + 1}: expected {degrees[idx]} indices, got {len(nz)}", ln
                )
            if any(t < 1 or t > bound for t in nz):
                raise AlistParseError(f"{what} {idx + 1}: index out of range 1..{bound}", ln)
            if len(set(nz)) != len(nz):
                raise AlistParseError(f"{what} {idx + 1}: duplicate index", ln)
            out.append(nz)
        return out

    col_lists = read_lists(n, col_deg, r, "column")
    row_lists = read_lists(r, row_deg, n, "row")

    from_cols = {(c - 1, v) for v, lst in enumerate(col_lists) for c in lst}
    from_rows = {(c, v - 1) for c, lst in enumerate(row_lists) for v in lst}
    if from_cols != from_rows:
        raise ValueError(f"{path}: row and column adjacency lists are inconsistent")
    edges = np.array(sorted(from_cols), dtype=np.int64).reshape(-1, 2)
    return ParityCheckMatrix(n, r, edges[:, 0], edges[:, 1], description=f"alist:{path}")


def write_alist(H: ParityCheckMatrix, path) -> None:
    cd, rd = H.col_degrees(), H.row_degrees()
    mc, mr = int(cd.max(initial=0)), int(rd.max(initial=0))
    out = [f"{H.n} {H.r}", f"{mc} {mr}", " ".join(map(str, cd)), " ".join(map(str, rd))]
    for col in H.cols:
        out.append(" ".join(str(c + 1) for c in col) + " 0" * (mc - len(col)))
    for row in H.rows:
        out.append(" ".join(str(v + 1) for v in row) + " 0" * (mr - len(row)))
    Path(path).write_text("\n".join(s.strip() for s in out) + "\n")


# ---------------------------------------------------------------------------
# random regular construction


def generate_regular(n: int, dv: int, dc: int, seed: int = 0,
                     max_rounds: int = 200) -> ParityCheckMatrix:
    """Random ``(dv, dc)``-regular matrix by socket matching.

    Parallel edges are always removed by degree-preserving edge swaps.
    Length-4 cycles are then broken by further random swaps; this is best
    effort and the number left over is recorded in ``description``.
    """
    n, dv, dc = int(n), int(dv), int(dc)
    if n < 1 or dv < 1 or dc < 2:
        raise ValueError("need n >= 1, dv >= 1, dc >= 2")
    if (n * dv) % dc:
        raise ValueError(f"n*dv = {n * dv} is not divisible by dc = {dc}")
    r = n * dv // dc
    if r >= n:
        raise ValueError(f"degree profile gives r = {r} >= n = {n}; no positive rate")
    if dv > r or dc > n:
        raise ValueError("degrees exceed the number of nodes on the other side")

    rng = np.random.Generator(np.random.Philox(np.random.SeedSequence(int(seed), spawn_key=(0x4C44,))))
    ec = np.repeat(np.arange(r), dc)
    ev = rng.permutation(np.repeat(np.arange(n), dv))
    E = ec.size

    def duplicate_edges():
        key = ec * n + ev
        _, first, counts = np.unique(key, return_index=True, return_counts=True)
        seen = np.zeros(E, dtype=bool)
        seen[first] = True
        dup_keys = set(np.unique(key)[counts > 1].tolist())
        return [e for e in range(E) if not seen[e] and key[e] in dup_keys]

    def cycle_edges():
        A = sparse.csr_matrix((np.ones(E), (ec, ev)), shape=(r, n))
        G = sparse.triu(A.T @ A, k=1).tocoo()
        bad = G.data >= 2
        out = set()
        col_checks = None
        for v1, v2 in zip(G.row[bad], G.col[bad]):
            if col_checks is None:
                col_checks = _col_check_map(ec, ev)
            shared = sorted(set(col_checks[v1]) & set(col_checks[v2]))
            # move v2 out of one shared check
            c = shared[0]
            out.add(int(col_checks[v2][c]))
        return sorted(out)

    def _col_check_map(ec_, ev_):
        m = [dict() for _ in range(n)]
        for e, (c, v) in enumerate(zip(ec_, ev_)):
            m[v][c] = e
        return m

    def try_swap(e):
        f = int(rng.integers(E))
        ce, cf = ec[e], ec[f]
        if ce == cf:
            return False
        ve, vf = ev[e], ev[f]
        row_e = ev[ce * dc:(ce + 1) * dc]
        row_f = ev[cf * dc:(cf + 1) * dc]
        if vf in row_e or ve in row_f:
            return False
        ev[e], ev[f] = vf, ve
        return True

    for _ in range(100 * E):
        dups = duplicate_edges()
        if not dups:
            break
        for e in dups:
            try_swap(e)
    else:
        raise RuntimeError("could not remove parallel edges")

    best = ev.copy()
    best_count = len(cycle_edges())
    for _ in range(max_rounds):
        bad = cycle_edges()
        if not bad:
            best, best_count = ev.copy(), 0
            break
        for e in bad:
            try_swap(e)
        cnt = len(cycle_edges())
        if cnt < best_count:
            best, best_count = ev.copy(), cnt
    H = ParityCheckMatrix(n, r, ec, best,
                          description=f"regular(n={n}, dv={dv}, dc={dc}, seed={seed})")
    H.description += f", 4-cycles={H.count_4cycles()}"
    return H


# ---------------------------------------------------------------------------
# syndrome and LLRs


def syndrome(H: ParityCheckMatrix, word) -> np.ndarray:
    """``H word (mod 2)`` as a uint8 vector of length ``r``."""
    w = np.asarray(word)
    if w.shape != (H.n,):
        raise ValueError(f"word must have length {H.n}, got shape {w.shape}")
    ones = (w[H.edge_var] & 1).astype(np.int64) if w.dtype.kind in "iub" else (w[H.edge_var] % 2).astype(np.int64)
    return (np.bincount(H.edge_check, weights=ones, minlength=H.r).astype(np.int64) & 1).astype(np.uint8)


def conditional_bit_llr(x, snr: float, level: int = 1):
    """Alice's LLR of Bob's DTE bit ``V_level`` given her sample ``x``.

    ``Y | X = x`` is normal with mean ``x`` and variance ``1/snr``; bit
    ``V_level`` is 1 on the odd dyadic cells of Bob's quantile axis, whose
    boundaries are ``sqrt(1 + 1/snr) * Phi^-1(t / 2**level)``.
    """
    snr = float(snr)
    if not snr > 0:
        raise ValueError(f"snr must be positive, got {snr!r}")
    level = int(level)
    if level < 1:
        raise ValueError(f"level must be >= 1, got {level}")
    x = np.asarray(x, dtype=float)
    a = np.sqrt(snr)
    if level == 1:
        llr = log_ndtr(-a * x) - log_ndtr(a * x)
        return np.clip(llr, -LLR_CLIP, LLR_CLIP)

    cells = 1 << level
    t = np.arange(1, cells) / cells
    bounds = np.concatenate([[-np.inf], np.sqrt(1.0 + 1.0 / snr) * ndtri(t), [np.inf]])
    z = (bounds[:, None] - x[None, ...].reshape(1, -1)) * a
    lo, hi = z[:-1], z[1:]
    # evaluate each cell in the tail where it is numerically small
    p = np.where(lo > 0, ndtr(-lo) - ndtr(-hi), ndtr(hi) - ndtr(lo))
    p0 = p[0::2].sum(axis=0)
    p1 = p[1::2].sum(axis=0)
    with np.errstate(divide="ignore"):
        llr = np.log(p0) - np.log(p1)
    llr = np.nan_to_num(llr, nan=0.0, posinf=LLR_CLIP, neginf=-LLR_CLIP)
    return np.clip(llr, -LLR_CLIP, LLR_CLIP).reshape(x.shape)


def hard_bsc_llr(bits, alpha: float) -> np.ndarray:
    """LLRs ``(1 - 2u) log((1 - alpha) / alpha)`` from hard bits over a BSC."""
    alpha = float(alpha)
    if not 0.0 <= alpha <= 0.5:
        raise ValueError("alpha must lie in [0, 1/2]")
    mag = LLR_CLIP if alpha == 0.0 else min(np.log((1.0 - alpha) / alpha), LLR_CLIP)
    return (1.0 - 2.0 * np.asarray(bits, dtype=float)) * mag


# ---------------------------------------------------------------------------
# decoder


@dataclass
class DecodeOutcome:
    word: np.ndarray
    iterations: int
    syndrome_matched: bool
    bit_errors_vs_reference: Optional[int] = None


def _phi(x):
    # -log(tanh(x / 2)), its own inverse on (0, inf)
    return np.log1p(2.0 / np.expm1(x))


_MIN_MAG = 1e-12


def decode_syndrome(H: ParityCheckMatrix, channel_llrs, target_syndrome,
                    max_iterations: int = DEFAULT_MAX_ITERATIONS,
                    reference: Optional[Sequence[int]] = None) -> DecodeOutcome:
    """Syndrome-constrained sum-product decoding (flooding schedule).

    Stops as soon as the hard decision reproduces ``target_syndrome`` (checked
    on the channel LLRs before the first iteration, so a consistent input
    returns with ``iterations == 0``) or after ``max_iterations``.
    """
    llr = np.asarray(channel_llrs, dtype=float)
    if llr.shape != (H.n,):
        raise ValueError(f"expected {H.n} channel LLRs, got shape {llr.shape}")
    if not np.all(np.isfinite(llr)):
        raise ValueError("channel LLRs must be finite")
    s = np.asarray(target_syndrome).astype(np.int64)
    if s.shape != (H.r,):
        raise ValueError(f"target syndrome must have length {H.r}")
    max_iterations = int(max_iterations)
    if max_iterations < 1:
        raise ValueError("max_iterations must be >= 1")

    s = (s & 1).astype(np.uint8)
    ec, ev = H.edge_check, H.edge_var
    llr = np.clip(llr, -LLR_CLIP, LLR_CLIP)
    syn_sign = 1.0 - 2.0 * s.astype(float)

    def done(word):
        return np.array_equal(syndrome(H, word), s)

    word = (llr < 0).astype(np.uint8)
    it = 0
    matched = done(word)
    v2c = llr[ev]
    while not matched and it < max_iterations:
        it += 1
        mag = _phi(np.clip(np.abs(v2c), _MIN_MAG, LLR_CLIP))
        neg = v2c < 0
        total_mag = np.bincount(ec, weights=mag, minlength=H.r)
        parity = np.bincount(ec, weights=neg, minlength=H.r).astype(np.int64) & 1
        ext = np.maximum(total_mag[ec] - mag, _MIN_MAG)
        out_mag = np.minimum(_phi(ext), LLR_CLIP)
        # sign of the other incoming messages = total parity xor own sign
        out_neg = parity[ec] ^ neg
        c2v = syn_sign[ec] * np.where(out_neg, -out_mag, out_mag)
        total = llr + np.bincount(ev, weights=c2v, minlength=H.n)
        word = (total < 0).astype(np.uint8)
        matched = done(word)
        v2c = np.clip(total[ev] - c2v, -LLR_CLIP, LLR_CLIP)

    errors = None
    if reference is not None:
        ref = np.asarray(reference).astype(np.uint8)
        errors = int(np.count_nonzero(ref != word))
    return DecodeOutcome(word=word, iterations=it, syndrome_matched=bool(matched),
                         bit_errors_vs_reference=errors)
