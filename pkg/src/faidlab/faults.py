"""Transient-fault models for the decoder's message-update units.

Noise attaches to the output of a noiseless function through a row-stochastic
transition matrix ``Pi[k, m] = Pr(noisy = m | clean = k)``, rows and columns
indexed by ``value + s``.  General (not necessarily decomposable) faulty units
are dense conditional tables, see :class:`FaultyFunction`.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from enum import Enum
from typing import Callable

import numpy as np

from .alphabet import PMF_TOL, MessagePmf, NoiseModel, NoiseParams


@dataclass(frozen=True, eq=False)
class TransitionMatrix:
    entries: np.ndarray

    def __post_init__(self):
        pi = np.array(self.entries, dtype=float)
        n = pi.shape[0]
        if pi.ndim != 2 or pi.shape != (n, n) or n % 2 == 0:
            raise ValueError(f"transition matrix must be square with odd size, got {pi.shape}")
        if np.any(pi < 0.0) or np.any(pi > 1.0 + PMF_TOL):
            raise ValueError("transition probabilities outside [0, 1]")
        rows = pi.sum(axis=1)
        if np.max(np.abs(rows - 1.0)) > PMF_TOL:
            raise ValueError(f"rows are not stochastic: sums {rows}")
        pi.setflags(write=False)
        object.__setattr__(self, "entries", pi)

    @property
    def s(self) -> int:
        return (self.entries.shape[0] - 1) // 2

    @property
    def size(self) -> int:
        return self.entries.shape[0]

    def __getitem__(self, km) -> float:
        k, m = km
        return float(self.entries[k + self.s, m + self.s])

    def is_identity(self) -> bool:
        return bool(np.array_equal(self.entries, np.eye(self.size)))

    def cdf(self) -> np.ndarray:
        """Row-wise cumulative sums with the last column pinned to 1."""
        c = np.cumsum(self.entries, axis=1)
        c[:, -1] = 1.0
        return c

    def to_csv(self) -> str:
        levels = range(-self.s, self.s + 1)
        lines = ["in\\out," + ",".join(str(v) for v in levels)]
        for k, row in zip(levels, self.entries):
            lines.append(f"{k}," + ",".join(repr(float(x)) for x in row))
        return "\n".join(lines) + "\n"


def identity_matrix(s: int) -> TransitionMatrix:
    return TransitionMatrix(np.eye(2 * s + 1))


def _check_p(p: float, s: int) -> None:
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p={p} outside [0, 1]")
    if s < 1:
        raise ValueError(f"s must be >= 1, got {s}")


def sp_matrix(p: float, s: int) -> TransitionMatrix:
    """Sign-preserving model: a nonzero message may change magnitude or drop
    to 0, but never change sign; 0 may move to any nonzero level."""
    _check_p(p, s)
    n = 2 * s + 1
    pi = np.zeros((n, n))
    levels = np.arange(-s, s + 1)
    for i, k in enumerate(levels):
        if k == 0:
            pi[i, :] = p / (2 * s)
        else:
            same_sign = np.sign(levels) == np.sign(k)
            pi[i, same_sign] = p / s
            pi[i, s] = p / s
        pi[i, i] = 1.0 - p
    return TransitionMatrix(pi)


def fd_matrix(p: float, s: int) -> TransitionMatrix:
    """Full-depth model: (2s+1)-ary symmetric channel, off-diagonal ``p/(2s)``."""
    _check_p(p, s)
    n = 2 * s + 1
    pi = np.full((n, n), p / (2 * s))
    np.fill_diagonal(pi, 1.0 - p)
    return TransitionMatrix(pi)


def model_matrix(model: NoiseModel, p: float, s: int) -> TransitionMatrix:
    model = NoiseModel(model)
    if model is NoiseModel.SP:
        return sp_matrix(p, s)
    if model is NoiseModel.FD:
        return fd_matrix(p, s)
    if p:
        raise ValueError("noise level must be 0 for model NONE")
    return identity_matrix(s)


def decoder_matrices(noise: NoiseParams, s: int, s_prime: int):
    """``(Pi_v, Pi_c, Pi_a)`` for the given noise levels."""
    return (
        model_matrix(noise.model_kind, noise.p_v, s),
        model_matrix(noise.model_kind, noise.p_c, s),
        model_matrix(noise.model_kind, noise.p_a, s_prime),
    )


def apply_noise(pmf: MessagePmf, pi: TransitionMatrix) -> MessagePmf:
    if pmf.alphabet.size != pi.size:
        raise ValueError(f"PMF over {pmf.alphabet.size} levels, matrix is {pi.size}x{pi.size}")
    return MessagePmf(pmf.alphabet, pmf.mass @ pi.entries)


def sample_noise(value: int, pi: TransitionMatrix, rng: np.random.Generator) -> int:
    row = pi.cdf()[value + pi.s]
    return int(np.searchsorted(row, rng.random(), side="right")) - pi.s


def make_rng(seed: int, stream: int = 0) -> np.random.Generator:
    """Counter-based Philox stream keyed by ``(seed, stream)``."""
    return np.random.Generator(np.random.Philox(np.random.SeedSequence([int(seed), int(stream)])))


# --- general faulty functions ----------------------------------------------

class UnitKind(str, Enum):
    VNU = "VNU"
    CNU = "CNU"
    APP = "APP"


@dataclass(frozen=True, eq=False)
class FaultyFunction:
    """Dense conditional PMF of a faulty unit.

    ``table`` has one axis per input message (indexed by ``value + s``), then a
    channel axis of length 2 (``-B``, ``+B``) for VNU/APP units, then the
    output axis (indexed by ``value + s_out``).
    """

    kind: UnitKind
    arity: int
    s: int
    s_out: int
    table: np.ndarray
    B: int = 1

    def __post_init__(self):
        object.__setattr__(self, "kind", UnitKind(self.kind))
        table = np.array(self.table, dtype=float)
        shape = (2 * self.s + 1,) * self.arity
        if self.kind is not UnitKind.CNU:
            shape += (2,)
        shape += (2 * self.s_out + 1,)
        if table.shape != shape:
            raise ValueError(f"conditional table has shape {table.shape}, expected {shape}")
        if np.any(table < 0.0) or np.max(np.abs(table.sum(axis=-1) - 1.0)) > PMF_TOL:
            raise ValueError("conditional table rows are not PMFs")
        table.setflags(write=False)
        object.__setattr__(self, "table", table)

    @property
    def has_channel(self) -> bool:
        return self.kind is not UnitKind.CNU

    def inputs(self):
        """Iterate over all input configurations as value tuples (``y`` last when present)."""
        levels = range(-self.s, self.s + 1)
        if self.has_channel:
            for eta in itertools.product(levels, repeat=self.arity):
                for y in (-self.B, self.B):
                    yield eta + (y,)
        else:
            yield from itertools.product(levels, repeat=self.arity)

    def _key(self, config) -> tuple:
        if self.has_channel:
            *eta, y = config
            return tuple(v + self.s for v in eta) + (0 if y < 0 else 1,)
        return tuple(v + self.s for v in config)

    def distribution(self, config) -> np.ndarray:
        return self.table[self._key(config)]

    def prob(self, out: int, config) -> float:
        return float(self.distribution(config)[out + self.s_out])


def lift(
    phi: Callable,
    kind: UnitKind,
    arity: int,
    s: int,
    s_out: int | None = None,
    pi: TransitionMatrix | None = None,
    B: int = 1,
) -> FaultyFunction:
    """Faulty unit made of a deterministic ``phi`` followed by output noise ``pi``.

    ``phi`` receives the input tuple (and ``y`` for VNU/APP units) and returns a
    value of the output alphabet.
    """
    kind = UnitKind(kind)
    s_out = s if s_out is None else s_out
    pi = identity_matrix(s_out) if pi is None else pi
    if pi.s != s_out:
        raise ValueError("noise matrix does not match the output alphabet")
    n = 2 * s + 1
    shape = (n,) * arity + ((2,) if kind is not UnitKind.CNU else ()) + (2 * s_out + 1,)
    table = np.zeros(shape)
    levels = range(-s, s + 1)
    for eta in itertools.product(levels, repeat=arity):
        idx = tuple(v + s for v in eta)
        if kind is UnitKind.CNU:
            table[idx] = pi.entries[phi(eta) + s_out]
        else:
            for c, y in enumerate((-B, B)):
                table[idx + (c,)] = pi.entries[phi(eta, y) + s_out]
    return FaultyFunction(kind, arity, s, s_out, table, B)


def check_symmetry(f: FaultyFunction, tol: float = 1e-12) -> bool:
    """Symmetry of a faulty unit in the conditional-PMF sense.

    VNU/APP: ``P(out | eta, y) == P(-out | -eta, -y)``.
    CNU: ``P(out | a*mu) == P(prod(a) * out | mu)`` for every sign vector ``a``.
    """
    t = f.table
    if f.has_channel:
        # negating every input and the channel reverses each input axis and the channel axis
        mirrored = t[(slice(None, None, -1),) * (f.arity + 2)]
        return bool(np.allclose(t, mirrored, rtol=0.0, atol=tol))
    for signs in itertools.product((1, -1), repeat=f.arity):
        flip_out = np.prod(signs) < 0
        for mu in itertools.product(range(-f.s, f.s + 1), repeat=f.arity):
            lhs = f.distribution(tuple(a * m for a, m in zip(signs, mu)))
            rhs = f.distribution(mu)
            if flip_out:
                rhs = rhs[::-1]
            if not np.allclose(lhs, rhs, rtol=0.0, atol=tol):
                return False
    return True


def check_decomposable(f: FaultyFunction, phi: Callable, tol: float = 1e-12) -> bool:
    """True iff the unit's output law depends on its inputs only through ``phi``."""
    seen: dict = {}
    for config in f.inputs():
        if f.has_channel:
            *eta, y = config
            key = phi(tuple(eta), y)
        else:
            key = phi(config)
        dist = f.distribution(config)
        if key in seen:
            if not np.allclose(seen[key], dist, rtol=0.0, atol=tol):
                return False
        else:
            seen[key] = dist
    return True


def faulty_min_fixture(p: float, s: int = 3) -> FaultyFunction:
    """Two-input unit returning ``min`` with probability ``1-p`` and ``max`` with ``p``."""
    if not 0.0 < p < 1.0:
        raise ValueError("p must lie in (0, 1)")
    n = 2 * s + 1
    table = np.zeros((n, n, n))
    for i in range(n):
        for j in range(n):
            table[i, j, min(i, j)] += 1.0 - p
            table[i, j, max(i, j)] += p
    return FaultyFunction(UnitKind.CNU, 2, s, s, table)
