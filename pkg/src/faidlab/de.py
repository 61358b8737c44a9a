"""Noisy density evolution for regular LDPC ensembles over the BSC.

Messages are tracked as PMFs over the finite alphabet under the all-zero
codeword.  One iteration runs CNU -> Pi_c -> VNU -> Pi_v; the error
probability of iteration l is read off the noisy APP PMF built from the same
check-to-variable PMF that feeds the VNU.
"""

from __future__ import annotations

import csv
import io
from collections import deque
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .alphabet import (
    PMF_TOL,
    EnsembleSpec,
    MessagePmf,
    NoiseModel,
    NoiseParams,
    channel_pmf,
)
from .decoder import DecoderSpec, Lut, cnu
from .faults import decoder_matrices

DEFAULT_TOL = 1e-10
DEFAULT_MAX_ITER = 2000
CONVERGENCE_RUN = 10
TAIL = 200


class DensityEvolutionError(RuntimeError):
    """Numerical failure (invalid PMF), as opposed to a limit that does not exist."""


@dataclass
class DeState:
    iteration: int
    q_noisy: MessagePmf
    r_noisy: MessagePmf
    pe: float


@dataclass
class DeResult:
    converged: bool
    pe_infinity: float | None
    iterations_used: int
    trajectory: list[float] = field(default_factory=list)
    # largest error probability over the last TAIL iterations; summarises a
    # trajectory whose limit does not exist
    pe_tail_max: float | None = None

    @property
    def defined(self) -> bool:
        return self.converged

    def trajectory_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["iteration", "pe"])
        for i, pe in enumerate(self.trajectory, start=1):
            w.writerow([i, repr(pe)])
        return buf.getvalue()


# --- array-level kernels ----------------------------------------------------

@lru_cache(maxsize=None)
def _cnu_index_table(s: int) -> np.ndarray:
    levels = range(-s, s + 1)
    return np.array([[cnu((a, b)) + s for b in levels] for a in levels], dtype=np.intp)


def _pmf_of(table: np.ndarray, *pmfs: np.ndarray, size: int) -> np.ndarray:
    joint = pmfs[0]
    for p in pmfs[1:]:
        joint = np.multiply.outer(joint, p)
    return np.bincount(table.ravel(), weights=joint.ravel(), minlength=size)


def cnu_pmf(q: np.ndarray, d_c: int) -> np.ndarray:
    """Outgoing CNU PMF given i.i.d. incoming PMF ``q`` (pairwise min-sum fold)."""
    s = (q.size - 1) // 2
    table = _cnu_index_table(s)
    r = q
    for _ in range(d_c - 2):
        r = _pmf_of(table, r, q, size=q.size)
    return r


def vnu_pmf(r: np.ndarray, chan: np.ndarray, lut: Lut) -> np.ndarray:
    """Outgoing VNU PMF: channel-weighted sum over all LUT inputs."""
    minus, plus = lut.index_tables()
    s, B = lut.alphabet.s, lut.alphabet.B
    incoming = (r,) * lut.arity
    out = chan[s - B] * _pmf_of(minus, *incoming, size=r.size)
    out += chan[s + B] * _pmf_of(plus, *incoming, size=r.size)
    return out


def app_pmf(r: np.ndarray, chan: np.ndarray, d_v: int, B: int, s_prime: int) -> np.ndarray:
    """PMF of ``sum of d_v messages + y`` on ``{-s', ..., s'}``."""
    s = (r.size - 1) // 2
    total = r
    for _ in range(d_v - 1):
        total = np.convolve(total, r)
    # total is indexed from -d_v*s; place it at offsets +-B inside the APP alphabet
    out = np.zeros(2 * s_prime + 1)
    lo = s_prime - d_v * s
    out[lo - B : lo - B + total.size] += chan[s - B] * total
    out[lo + B : lo + B + total.size] += chan[s + B] * total
    return out


def error_probability(q_app_noisy: np.ndarray) -> float:
    """``P_e = q_app(0)/2 + sum_{k<0} q_app(k)``."""
    center = (q_app_noisy.size - 1) // 2
    return float(0.5 * q_app_noisy[center] + q_app_noisy[:center].sum())


def _checked(p: np.ndarray, what: str) -> np.ndarray:
    total = p.sum()
    if not np.isfinite(total) or abs(total - 1.0) > PMF_TOL or p.min() < 0.0:
        raise DensityEvolutionError(f"{what} PMF invalid: sum={total!r}, min={p.min()!r}")
    return p / total


# --- public operations --------------------------------------------------------

def _require_same(a, b):
    if a.size != b.size:
        raise ValueError("PMF alphabets do not match")


def de_cnu_step(q_noisy: MessagePmf, ensemble: EnsembleSpec) -> MessagePmf:
    return MessagePmf(q_noisy.alphabet, cnu_pmf(q_noisy.mass, ensemble.d_c))


def de_vnu_step(r_noisy: MessagePmf, channel: MessagePmf, lut: Lut, ensemble: EnsembleSpec) -> MessagePmf:
    _require_same(r_noisy.alphabet, channel.alphabet)
    if lut.d_v != ensemble.d_v:
        raise ValueError("LUT arity does not match the ensemble")
    return MessagePmf(r_noisy.alphabet, vnu_pmf(r_noisy.mass, channel.mass, lut))


def de_app_step(r_noisy: MessagePmf, channel: MessagePmf, dspec: DecoderSpec) -> MessagePmf:
    _require_same(r_noisy.alphabet, channel.alphabet)
    s_prime = dspec.app_alphabet.s_prime
    mass = app_pmf(r_noisy.mass, channel.mass, dspec.ensemble.d_v, dspec.alphabet.B, s_prime)
    return MessagePmf(dspec.app_alphabet, mass)


def prop1_lower_bound(noise: NoiseParams, s_prime: int) -> float:
    """Per-iteration lower bound on the error probability forced by APP noise."""
    if noise.model_kind is NoiseModel.SP:
        return noise.p_a / (2 * s_prime)
    if noise.model_kind is NoiseModel.FD:
        return noise.p_a / 2 + noise.p_a / (4 * s_prime)
    return 0.0


def de_states(alpha: float, dspec: DecoderSpec, noise: NoiseParams):
    """Yield a :class:`DeState` per iteration, forever."""
    alphabet = dspec.alphabet
    for ell, st in enumerate(_fast_states(alpha, dspec, noise), start=1):
        yield DeState(ell, MessagePmf(alphabet, st.q), MessagePmf(alphabet, st.r), st.pe)


def de_trajectory(alpha: float, dspec: DecoderSpec, noise: NoiseParams, iterations: int) -> list[float]:
    """Error probability at iterations ``1..iterations`` (no convergence test)."""
    return [st.pe for _, st in zip(range(iterations), _fast_states(alpha, dspec, noise))]


def _fast_states(alpha, dspec, noise):
    # the initial messages are the channel values leaving the VN units
    alphabet = dspec.alphabet
    s, s_prime = alphabet.s, dspec.app_alphabet.s_prime
    pi_v, pi_c, pi_a = (m.entries for m in decoder_matrices(noise, s, s_prime))
    chan = channel_pmf(alpha, alphabet).mass
    d_v, d_c, B = dspec.ensemble.d_v, dspec.ensemble.d_c, alphabet.B
    q = _checked(chan @ pi_v, "initial")
    while True:
        r = _checked(cnu_pmf(q, d_c) @ pi_c, "check")
        q_app = _checked(app_pmf(r, chan, d_v, B, s_prime) @ pi_a, "APP")
        q = _checked(vnu_pmf(r, chan, dspec.lut) @ pi_v, "variable")
        yield _Light(error_probability(q_app), q, r)


@dataclass
class _Light:
    pe: float
    q: np.ndarray
    r: np.ndarray


def de_iterate(
    alpha: float,
    dspec: DecoderSpec,
    noise: NoiseParams,
    max_iter: int = DEFAULT_MAX_ITER,
    tol: float = DEFAULT_TOL,
    keep_trajectory: bool = False,
) -> DeResult:
    """Run noisy DE until ``|pe_l - pe_{l-1}| < tol`` holds 10 times in a row.

    Returns ``converged=False`` (limit undefined) when ``max_iter`` is reached.
    Raises :class:`DensityEvolutionError` on numerical failure.
    """
    if not 0.0 <= alpha <= 0.5:
        raise ValueError(f"alpha={alpha} outside [0, 0.5]")
    if max_iter < 1:
        raise ValueError("max_iter must be >= 1")
    trajectory: list[float] = []
    tail: deque[float] = deque(maxlen=TAIL)
    prev = None
    run = 0
    for ell, st in enumerate(_fast_states(alpha, dspec, noise), start=1):
        pe = st.pe
        tail.append(pe)
        if keep_trajectory:
            trajectory.append(pe)
        if prev is not None and abs(pe - prev) < tol:
            run += 1
            if run >= CONVERGENCE_RUN:
                return DeResult(True, pe, ell, trajectory, max(tail))
        else:
            run = 0
        prev = pe
        if ell >= max_iter:
            return DeResult(False, None, ell, trajectory, max(tail))
