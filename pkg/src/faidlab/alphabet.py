"""Message alphabets, PMFs over them, and the small parameter records shared
by the decoder, density-evolution and simulation modules.

Levels use the canonical integer spacing ``L_i = i``, so a message value
``v`` lives at array index ``v + s``.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

PMF_TOL = 1e-12


@dataclass(frozen=True)
class MessageAlphabet:
    """Symmetric level set ``{-s, ..., 0, ..., s}`` plus the channel magnitude B."""

    s: int
    B: int = 1

    def __post_init__(self):
        if self.s < 1:
            raise ValueError(f"alphabet half-width must be >= 1, got s={self.s}")
        if self.B < 1:
            raise ValueError(f"channel magnitude must be >= 1, got B={self.B}")
        if self.B > self.s:
            # initial messages are the channel values, so +-B must be levels
            raise ValueError(f"B={self.B} is not a level of a {2 * self.s + 1}-level alphabet")

    @property
    def size(self) -> int:
        return 2 * self.s + 1

    @property
    def levels(self) -> np.ndarray:
        return np.arange(-self.s, self.s + 1)

    def index(self, value: int) -> int:
        if abs(value) > self.s:
            raise ValueError(f"{value} is not in the alphabet (s={self.s})")
        return int(value) + self.s

    def __contains__(self, value) -> bool:
        return isinstance(value, (int, np.integer)) and abs(int(value)) <= self.s


@dataclass(frozen=True)
class AppAlphabet:
    """Wider alphabet ``{-s', ..., s'}`` used for the a-posteriori sums."""

    s_prime: int

    def __post_init__(self):
        if self.s_prime < 1:
            raise ValueError("s_prime must be positive")

    @property
    def size(self) -> int:
        return 2 * self.s_prime + 1

    @property
    def levels(self) -> np.ndarray:
        return np.arange(-self.s_prime, self.s_prime + 1)

    def index(self, value: int) -> int:
        if abs(value) > self.s_prime:
            raise ValueError(f"{value} is outside the APP alphabet (s'={self.s_prime})")
        return int(value) + self.s_prime


def _half_width(alphabet) -> int:
    return alphabet.s if isinstance(alphabet, MessageAlphabet) else alphabet.s_prime


@dataclass(frozen=True, eq=False)
class MessagePmf:
    """Probability mass function over an alphabet, indexed by ``value + half_width``."""

    alphabet: MessageAlphabet | AppAlphabet
    mass: np.ndarray

    def __post_init__(self):
        mass = np.array(self.mass, dtype=float)
        mass.setflags(write=False)
        object.__setattr__(self, "mass", mass)
        if mass.shape != (self.alphabet.size,):
            raise ValueError(f"mass has shape {mass.shape}, alphabet needs ({self.alphabet.size},)")
        check_pmf(mass)

    def __getitem__(self, value: int) -> float:
        return float(self.mass[self.alphabet.index(value)])

    @classmethod
    def point(cls, alphabet, value: int) -> MessagePmf:
        mass = np.zeros(alphabet.size)
        mass[alphabet.index(value)] = 1.0
        return cls(alphabet, mass)

    @classmethod
    def uniform(cls, alphabet) -> MessagePmf:
        return cls(alphabet, np.full(alphabet.size, 1.0 / alphabet.size))


def check_pmf(mass: np.ndarray, tol: float = PMF_TOL) -> None:
    """Raise ValueError unless ``mass`` is a valid PMF within ``tol``."""
    if not np.all(np.isfinite(mass)):
        raise ValueError("PMF contains non-finite entries")
    if np.any(mass < 0.0) or np.any(mass > 1.0 + tol):
        raise ValueError(f"PMF entries outside [0, 1]: min={mass.min()}, max={mass.max()}")
    total = mass.sum()
    if abs(total - 1.0) > tol:
        raise ValueError(f"PMF sums to {total!r}, not 1 (tol {tol})")


@dataclass(frozen=True)
class EnsembleSpec:
    """Regular (d_v, d_c) LDPC ensemble."""

    d_v: int = 3
    d_c: int = 5

    def __post_init__(self):
        if self.d_v < 2 or self.d_c < 2:
            raise ValueError(f"degrees must be >= 2, got ({self.d_v}, {self.d_c})")


class NoiseModel(str, Enum):
    SP = "SP"
    FD = "FD"
    NONE = "NONE"


@dataclass(frozen=True)
class NoiseParams:
    """Hardware noise levels at the VNU, CNU and APP outputs."""

    p_v: float = 0.0
    p_c: float = 0.0
    p_a: float = 0.0
    model_kind: NoiseModel = NoiseModel.NONE

    def __post_init__(self):
        object.__setattr__(self, "model_kind", NoiseModel(self.model_kind))
        for name in ("p_v", "p_c", "p_a"):
            p = getattr(self, name)
            if not 0.0 <= p <= 1.0:
                raise ValueError(f"{name}={p} outside [0, 1]")
        if self.model_kind is NoiseModel.NONE and (self.p_v or self.p_c or self.p_a):
            raise ValueError("model NONE requires p_v = p_c = p_a = 0")

    @classmethod
    def noiseless(cls) -> NoiseParams:
        return cls()

    @classmethod
    def sp(cls, p_v: float, p_c: float | None = None, p_a: float | None = None) -> NoiseParams:
        return cls(p_v, p_v if p_c is None else p_c, p_v if p_a is None else p_a, NoiseModel.SP)

    @classmethod
    def fd(cls, p_v: float, p_c: float | None = None, p_a: float | None = None) -> NoiseParams:
        return cls(p_v, p_v if p_c is None else p_c, p_v if p_a is None else p_a, NoiseModel.FD)

    def replace(self, **changes) -> NoiseParams:
        fields = dict(p_v=self.p_v, p_c=self.p_c, p_a=self.p_a, model_kind=self.model_kind)
        fields.update(changes)
        return NoiseParams(**fields)


def make_alphabet(s: int, B: int = 1) -> MessageAlphabet:
    return MessageAlphabet(s, B)


def make_app_alphabet(alphabet: MessageAlphabet, d_v: int) -> AppAlphabet:
    """APP alphabet wide enough that ``sum(d_v messages) + y`` never saturates."""
    if d_v < 2:
        raise ValueError(f"d_v must be >= 2, got {d_v}")
    return AppAlphabet(d_v * alphabet.s + alphabet.B)


def channel_pmf(alpha: float, alphabet: MessageAlphabet) -> MessagePmf:
    """PMF of the channel value under the all-zero codeword (bit 0 is sent as +B)."""
    if not 0.0 <= alpha <= 0.5:
        raise ValueError(f"alpha={alpha} outside [0, 0.5]")
    mass = np.zeros(alphabet.size)
    mass[alphabet.index(alphabet.B)] = 1.0 - alpha
    mass[alphabet.index(-alphabet.B)] = alpha
    return MessagePmf(alphabet, mass)
