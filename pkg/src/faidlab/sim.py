"""Fault-injected Monte Carlo simulation of FAIDs on finite codes.

Every trial owns a Philox stream keyed by ``(seed, trial)``, so results do
not depend on how trials are split between workers.
"""

from __future__ import annotations

import csv
import io
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from enum import Enum

import numba
import numpy as np

from .alphabet import NoiseParams
from .codes import ParityCheckCode, generator_matrix
from .decoder import DecoderSpec
from .faults import decoder_matrices, make_rng

DEFAULT_MAX_ITER = 100


class CodewordMode(str, Enum):
    ALL_ZERO = "ALL_ZERO"
    RANDOM_CODEWORD = "RANDOM_CODEWORD"


@dataclass(frozen=True)
class TrialConfig:
    alpha: float
    noise: NoiseParams = field(default_factory=NoiseParams.noiseless)
    max_iterations: int = DEFAULT_MAX_ITER
    seed: int = 0
    codeword_mode: CodewordMode = CodewordMode.ALL_ZERO
    early_stop: bool = True

    def __post_init__(self):
        object.__setattr__(self, "codeword_mode", CodewordMode(self.codeword_mode))
        if not 0.0 <= self.alpha <= 0.5:
            raise ValueError(f"alpha={self.alpha} outside [0, 0.5]")
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be >= 1")

    def with_(self, **changes) -> TrialConfig:
        from dataclasses import replace

        return replace(self, **changes)


@dataclass(frozen=True)
class BerResult:
    trials: int
    n: int
    bit_errors: int
    frame_errors: int
    iterations: int = 0  # summed over trials
    # sum over frames of (bit errors in the frame)**2; None if not recorded
    sq_errors: int | None = None

    def __post_init__(self):
        if min(self.trials, self.bit_errors, self.frame_errors, self.iterations, self.sq_errors or 0) < 0:
            raise ValueError("counts must be non-negative")

    @property
    def ber(self) -> float:
        return self.bit_errors / (self.trials * self.n)

    @property
    def fer(self) -> float:
        return self.frame_errors / self.trials

    @property
    def stderr_ber(self) -> float:
        """Standard error of ``ber``.

        Bit errors cluster inside failed frames, so the estimate uses the
        spread of per-frame error counts (frames are independent).  Without
        ``sq_errors`` it falls back to treating every bit as independent,
        which understates the error when frames fail in bursts.
        """
        T, n = self.trials, self.n
        if self.sq_errors is None or T < 2:
            p = self.ber
            return math.sqrt(p * (1.0 - p) / (T * n))
        mean = self.bit_errors / T
        var = max(self.sq_errors / T - mean * mean, 0.0) * T / (T - 1)
        return math.sqrt(var / T) / n

    @property
    def stderr_fer(self) -> float:
        p = self.fer
        return math.sqrt(p * (1.0 - p) / self.trials)

    def __add__(self, other: BerResult) -> BerResult:
        if self.n != other.n:
            raise ValueError("block lengths differ")
        return BerResult(
            self.trials + other.trials,
            self.n,
            self.bit_errors + other.bit_errors,
            self.frame_errors + other.frame_errors,
            self.iterations + other.iterations,
            None if self.sq_errors is None or other.sq_errors is None else self.sq_errors + other.sq_errors,
        )


# --- numba kernel -------------------------------------------------------------------
#
# Both fault models keep a message unchanged with the same probability 1 - p
# whatever its value, so faults form a Bernoulli(p) sequence over the messages
# of each unit type.  The kernel draws the gap to the next fault from a
# geometric law and only samples a replacement value when a fault occurs.


def fault_tables(pi: np.ndarray):
    """``(p, order, cum)`` for a transition matrix with a constant diagonal.

    Row ``k`` of ``order`` lists the outputs other than ``k`` and ``cum`` their
    cumulative probabilities conditioned on a fault.
    """
    size = pi.shape[0]
    diag = np.diag(pi)
    if np.ptp(diag) > 1e-15:
        raise ValueError("fault sampling needs the same stay probability on every row")
    p = float(1.0 - diag[0])
    order = np.empty((size, size - 1), dtype=np.int64)
    cum = np.ones((size, size - 1))
    for k in range(size):
        idx = [j for j in range(size) if j != k]
        order[k] = idx
        if p > 0.0:
            cum[k] = np.cumsum(pi[k, idx]) / p
            cum[k, -1] = 1.0
    return p, order, cum


@numba.njit(cache=True, inline="always")
def _replace(order, cum, k, u):
    j = 0
    last = cum.shape[1] - 1
    while j < last and u >= cum[k, j]:
        j += 1
    return order[k, j]


@numba.njit(cache=True)
def _decode_core(
    rng, y, s, s_prime, var_edges, chk_edges, var_of_edge, lut_minus, lut_plus,
    p_v, ord_v, cum_v, p_c, ord_c, cum_c, p_a, ord_a, cum_a, max_iter, early_stop, est,
):
    """Flooding decoder on received values ``y``; writes the estimate into ``est``.

    Returns ``(iterations_run, stopped_early)``.
    """
    n, d_v = var_edges.shape
    m, d_c = chk_edges.shape
    size = 2 * s + 1
    n_edges = n * d_v
    v2c = np.empty(n_edges, dtype=np.int64)
    c2v = np.empty(n_edges, dtype=np.int64)
    gap_v = rng.geometric(p_v) - 1 if p_v > 0.0 else -1
    gap_c = rng.geometric(p_c) - 1 if p_c > 0.0 else -1
    gap_a = rng.geometric(p_a) - 1 if p_a > 0.0 else -1

    # the channel values leave the variable nodes as the first messages
    for e in range(n_edges):
        out = y[var_of_edge[e]]
        if gap_v == 0:
            out = _replace(ord_v, cum_v, out + s, rng.random()) - s
            gap_v = rng.geometric(p_v) - 1
        elif gap_v > 0:
            gap_v -= 1
        v2c[e] = out

    est[:] = 0
    it = 0
    stopped = False
    while it < max_iter:
        it += 1
        # check nodes: min-sum over the other inputs
        for c in range(m):
            neg = 0
            zeros = 0
            min1 = s + 1
            min2 = s + 1
            arg1 = -1
            for k in range(d_c):
                v = v2c[chk_edges[c, k]]
                if v < 0:
                    neg += 1
                a = abs(v)
                if a == 0:
                    zeros += 1
                if a < min1:
                    min2 = min1
                    min1 = a
                    arg1 = k
                elif a < min2:
                    min2 = a
            for k in range(d_c):
                e = chk_edges[c, k]
                v = v2c[e]
                mag = min2 if k == arg1 else min1
                if zeros - (1 if v == 0 else 0) > 0:
                    mag = 0
                out = -mag if (neg - (1 if v < 0 else 0)) % 2 else mag
                if gap_c == 0:
                    out = _replace(ord_c, cum_c, out + s, rng.random()) - s
                    gap_c = rng.geometric(p_c) - 1
                elif gap_c > 0:
                    gap_c -= 1
                c2v[e] = out
        # variable nodes
        for i in range(n):
            table = lut_minus if y[i] < 0 else lut_plus
            for k in range(d_v):
                idx = 0
                for kk in range(d_v):
                    if kk != k:
                        idx = idx * size + (c2v[var_edges[i, kk]] + s)
                out = table[idx]
                if gap_v == 0:
                    out = _replace(ord_v, cum_v, out, rng.random())
                    gap_v = rng.geometric(p_v) - 1
                elif gap_v > 0:
                    gap_v -= 1
                v2c[var_edges[i, k]] = out - s
        # APP and hard decision
        for i in range(n):
            g = y[i]
            for k in range(d_v):
                g += c2v[var_edges[i, k]]
            if gap_a == 0:
                g = _replace(ord_a, cum_a, g + s_prime, rng.random()) - s_prime
                gap_a = rng.geometric(p_a) - 1
            elif gap_a > 0:
                gap_a -= 1
            if g > 0:
                est[i] = 0
            elif g < 0:
                est[i] = 1
            else:
                est[i] = 0 if rng.random() < 0.5 else 1
        if early_stop:
            ok = True
            for c in range(m):
                par = 0
                for k in range(d_c):
                    par ^= est[var_of_edge[chk_edges[c, k]]]
                if par:
                    ok = False
                    break
            if ok:
                stopped = True
                break
    return it, stopped


@numba.njit(cache=True)
def _trial(
    rng, alpha, B, G, random_cw, s, s_prime, var_edges, chk_edges, var_of_edge, lut_minus, lut_plus,
    p_v, ord_v, cum_v, p_c, ord_c, cum_c, p_a, ord_a, cum_a, max_iter, early_stop,
):
    """Draw a codeword and a BSC output, decode, count bit errors."""
    n = var_edges.shape[0]
    x = np.zeros(n, dtype=np.int64)
    if random_cw:
        for r in range(G.shape[0]):
            if rng.random() < 0.5:
                for i in range(n):
                    x[i] ^= G[r, i]
    y = np.empty(n, dtype=np.int64)
    for i in range(n):
        flip = 1 if rng.random() < alpha else 0
        y[i] = -B if (x[i] ^ flip) else B
    est = np.empty(n, dtype=np.int64)
    it, stopped = _decode_core(
        rng, y, s, s_prime, var_edges, chk_edges, var_of_edge, lut_minus, lut_plus,
        p_v, ord_v, cum_v, p_c, ord_c, cum_c, p_a, ord_a, cum_a, max_iter, early_stop, est,
    )
    errors = 0
    for i in range(n):
        if est[i] != x[i]:
            errors += 1
    return errors, it, stopped


# --- driver ------------------------------------------------------------------------

class _Prepared:
    """Arrays shared by all trials of one (code, decoder, config) cell."""

    def __init__(self, code: ParityCheckCode, dspec: DecoderSpec, cfg: TrialConfig, G=None):
        degs = code.regular_degrees()
        if degs != (dspec.ensemble.d_v, dspec.ensemble.d_c):
            raise ValueError(f"code degrees {degs} do not match the decoder ensemble")
        self.n = code.n
        self.var_edges, self.chk_edges = code.edge_tables()
        self.var_of_edge = np.repeat(np.arange(code.n, dtype=np.int64), degs[0])
        s, s_prime = dspec.alphabet.s, dspec.app_alphabet.s_prime
        self.s, self.s_prime, self.B = s, s_prime, dspec.alphabet.B
        minus, plus = dspec.lut.index_tables()
        self.lut_minus = np.ascontiguousarray(minus.ravel(), dtype=np.int64)
        self.lut_plus = np.ascontiguousarray(plus.ravel(), dtype=np.int64)
        mats = decoder_matrices(cfg.noise, s, s_prime)
        self.tables = [a for m in mats for a in fault_tables(m.entries)]
        if cfg.codeword_mode is CodewordMode.RANDOM_CODEWORD:
            if G is None:
                G = generator_matrix(code.H)
            if G.shape[0] != code.k:
                raise ValueError("generator basis has the wrong dimension")
            self.G = np.ascontiguousarray(G, dtype=np.int64)
        else:
            self.G = np.zeros((0, code.n), dtype=np.int64)
        self.cfg = cfg

    def kernel_args(self):
        return (
            self.s, self.s_prime, self.var_edges, self.chk_edges, self.var_of_edge,
            self.lut_minus, self.lut_plus, *self.tables,
        )

    def trial(self, t: int):
        """``(bit_errors, iterations_run, stopped_early)`` of trial ``t``."""
        cfg = self.cfg
        return _trial(
            make_rng(cfg.seed, t), cfg.alpha, self.B, self.G,
            cfg.codeword_mode is CodewordMode.RANDOM_CODEWORD, *self.kernel_args(),
            cfg.max_iterations, cfg.early_stop,
        )


def noisy_decode(code: ParityCheckCode, y, dspec: DecoderSpec, cfg: TrialConfig, rng: np.random.Generator):
    """Decode one received word ``y`` (entries +-B) with fault injection.

    Returns ``(estimate, iterations_run, stopped_early)``.  Only the noise,
    iteration and stopping settings of ``cfg`` are used.
    """
    prep = _Prepared(code, dspec, cfg.with_(codeword_mode=CodewordMode.ALL_ZERO))
    y = np.asarray(y, dtype=np.int64)
    if y.shape != (code.n,) or np.any(np.abs(y) != prep.B):
        raise ValueError(f"y must be a length-{code.n} vector of +-{prep.B}")
    est = np.empty(code.n, dtype=np.int64)
    it, stopped = _decode_core(rng, y, *prep.kernel_args(), cfg.max_iterations, cfg.early_stop, est)
    return est.astype(np.uint8), int(it), bool(stopped)


def _run_chunk(args):
    prep, lo, hi = args
    bit_errors = frame_errors = iterations = sq_errors = 0
    for t in range(lo, hi):
        errors, it, _ = prep.trial(t)
        bit_errors += errors
        sq_errors += errors * errors
        frame_errors += errors > 0
        iterations += it
    return BerResult(hi - lo, prep.n, bit_errors, frame_errors, iterations, sq_errors)


def run_ber(code: ParityCheckCode, dspec: DecoderSpec, cfg: TrialConfig, trials: int, jobs: int = 1, G=None) -> BerResult:
    """Simulate ``trials`` independent frames; trial ``t`` uses stream ``(seed, t)``."""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    prep = _Prepared(code, dspec, cfg, G)
    if jobs <= 1:
        return _run_chunk((prep, 0, trials))
    bounds = np.linspace(0, trials, min(jobs, trials) + 1).astype(int)
    chunks = [(prep, int(a), int(b)) for a, b in zip(bounds[:-1], bounds[1:])]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        parts = list(pool.map(_run_chunk, chunks))
    total = parts[0]
    for p in parts[1:]:
        total = total + p
    return total


@dataclass(frozen=True)
class BerRow:
    decoder: str
    cfg: TrialConfig
    result: BerResult


def ber_sweep(code: ParityCheckCode, dspecs, template: TrialConfig, alphas, trials: int, jobs: int = 1) -> list[BerRow]:
    """One :class:`BerResult` per (decoder, alpha) cell, decoders outermost."""
    G = None
    if template.codeword_mode is CodewordMode.RANDOM_CODEWORD:
        G = generator_matrix(code.H)
    rows = []
    for dspec in dspecs:
        for a in alphas:
            cfg = template.with_(alpha=float(a))
            rows.append(BerRow(dspec.name, cfg, run_ber(code, dspec, cfg, trials, jobs, G)))
    return rows


BER_COLUMNS = ["decoder", "model", "p_v", "p_c", "p_a", "alpha", "trials", "bit_errors", "frame_errors", "ber", "fer", "stderr"]


def ber_csv(rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(BER_COLUMNS)
    for r in rows:
        nz, res = r.cfg.noise, r.result
        w.writerow(
            [
                r.decoder, nz.model_kind.value, repr(nz.p_v), repr(nz.p_c), repr(nz.p_a), repr(r.cfg.alpha),
                res.trials, res.bit_errors, res.frame_errors, repr(res.ber), repr(res.fer), repr(res.stderr_ber),
            ]
        )
    return buf.getvalue()
