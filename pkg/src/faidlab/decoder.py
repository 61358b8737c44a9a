"""Noiseless FAID kernels: min-sum CNU, LUT-based VNU, APP sum and hard decision.

A :class:`Lut` stores the VNU rule for channel value ``-B`` only; the ``+B``
half follows from odd symmetry, ``vnu(eta, +B) = -vnu(-eta, -B)``.
"""

from __future__ import annotations

import itertools
import os
from dataclasses import dataclass

import numpy as np

from .alphabet import AppAlphabet, EnsembleSpec, MessageAlphabet, make_alphabet, make_app_alphabet


class LutFormatError(ValueError):
    """A LUT file could not be parsed; ``line`` is 1-based."""

    def __init__(self, path, line: int | None, message: str):
        self.path = path
        self.line = line
        where = f"{path}:{line}" if line is not None else str(path)
        super().__init__(f"{where}: {message}")


@dataclass(frozen=True, eq=False)
class Lut:
    """VNU lookup table for channel value -B.

    ``table`` has one axis per incoming message (``d_v - 1`` axes) indexed by
    ``value + s`` and holds output *values*.
    """

    alphabet: MessageAlphabet
    d_v: int
    table: np.ndarray
    name: str = ""

    def __post_init__(self):
        table = np.array(self.table, dtype=np.int64)
        shape = (self.alphabet.size,) * (self.d_v - 1)
        if self.d_v < 2:
            raise ValueError("d_v must be >= 2")
        if table.shape != shape:
            raise ValueError(f"table shape {table.shape} does not match {shape}")
        if np.any(np.abs(table) > self.alphabet.s):
            raise ValueError("table holds values outside the message alphabet")
        table.setflags(write=False)
        object.__setattr__(self, "table", table)

    @property
    def arity(self) -> int:
        return self.d_v - 1

    def __eq__(self, other):
        return (
            isinstance(other, Lut)
            and self.alphabet == other.alphabet
            and self.d_v == other.d_v
            and np.array_equal(self.table, other.table)
        )

    def __hash__(self):
        return hash((self.alphabet, self.d_v, self.table.tobytes()))

    def plus_table(self) -> np.ndarray:
        """Output values for channel value +B, derived by odd symmetry."""
        flipped = self.table[(slice(None, None, -1),) * self.arity]
        return -flipped

    def index_tables(self) -> tuple[np.ndarray, np.ndarray]:
        """Output *indices* for y = -B and y = +B."""
        s = self.alphabet.s
        return self.table + s, self.plus_table() + s

    def with_entry(self, inputs, value: int) -> Lut:
        """Copy of this LUT with one entry (and its permutations) replaced."""
        table = self.table.copy()
        for perm in set(itertools.permutations(inputs)):
            table[tuple(v + self.alphabet.s for v in perm)] = value
        return Lut(self.alphabet, self.d_v, table, self.name)

    @classmethod
    def from_rows(cls, rows, s: int = 3, B: int = 1, name: str = "") -> Lut:
        """Two-input LUT from a (2s+1) x (2s+1) nested list of output values."""
        return cls(make_alphabet(s, B), 3, np.asarray(rows), name)


@dataclass(frozen=True)
class DecoderSpec:
    """A FAID: LUT rule plus ensemble degrees and APP alphabet."""

    lut: Lut
    ensemble: EnsembleSpec
    app_alphabet: AppAlphabet
    name: str = ""

    def __post_init__(self):
        if self.lut.d_v != self.ensemble.d_v:
            raise ValueError(f"LUT built for d_v={self.lut.d_v}, ensemble has d_v={self.ensemble.d_v}")

    @property
    def alphabet(self) -> MessageAlphabet:
        return self.lut.alphabet


def make_decoder(lut: Lut, d_c: int = 5, name: str | None = None) -> DecoderSpec:
    ensemble = EnsembleSpec(lut.d_v, d_c)
    return DecoderSpec(lut, ensemble, make_app_alphabet(lut.alphabet, lut.d_v), name or lut.name)


# --- kernels ---------------------------------------------------------------

def cnu(incoming) -> int:
    """Min-sum check update; any zero input gives 0."""
    magnitude = min(abs(int(m)) for m in incoming)
    if magnitude == 0:
        return 0
    negatives = sum(1 for m in incoming if m < 0)
    return -magnitude if negatives % 2 else magnitude


def cnu2(a: int, b: int) -> int:
    return cnu((a, b))


def vnu(lut: Lut, incoming, y: int) -> int:
    if len(incoming) != lut.arity:
        raise ValueError(f"expected {lut.arity} incoming messages, got {len(incoming)}")
    s = lut.alphabet.s
    B = lut.alphabet.B
    if y == -B:
        return int(lut.table[tuple(int(m) + s for m in incoming)])
    if y == B:
        return -int(lut.table[tuple(-int(m) + s for m in incoming)])
    raise ValueError(f"channel value must be +-{B}, got {y}")


def app(dspec: DecoderSpec, incoming, y: int) -> int:
    """APP value: exact sum of all d_v incoming messages plus the channel value."""
    if len(incoming) != dspec.ensemble.d_v:
        raise ValueError(f"expected {dspec.ensemble.d_v} incoming messages, got {len(incoming)}")
    gamma = int(sum(int(m) for m in incoming)) + int(y)
    # cannot trigger with s' = d_v * s + B, kept as a guard for hand-built dspecs
    if abs(gamma) > dspec.app_alphabet.s_prime:
        raise OverflowError(f"APP value {gamma} saturates s'={dspec.app_alphabet.s_prime}")
    return gamma


def hard_decision(gamma: int, rng_draw: float) -> int:
    if gamma > 0:
        return 0
    if gamma < 0:
        return 1
    return 0 if rng_draw < 0.5 else 1


# --- validity ---------------------------------------------------------------

@dataclass(frozen=True)
class LutViolation:
    kind: str  # "totality" | "permutation" | "odd-symmetry" | "monotonicity"
    where: tuple
    detail: str

    def __str__(self):
        return f"{self.kind} at {self.where}: {self.detail}"


def validate_lut(lut: Lut) -> list[LutViolation]:
    """Check totality, permutation symmetry, odd symmetry and monotonicity.

    Returns an empty list for a valid FAID rule.
    """
    out: list[LutViolation] = []
    s = lut.alphabet.s
    levels = range(-s, s + 1)
    table = lut.table

    if table.shape != (lut.alphabet.size,) * lut.arity:
        out.append(LutViolation("totality", (), f"shape {table.shape}"))
        return out
    bad = np.argwhere(np.abs(table) > s)
    for idx in bad:
        out.append(LutViolation("totality", tuple(int(i) - s for i in idx), "value outside alphabet"))

    for eta in itertools.product(levels, repeat=lut.arity):
        here = vnu(lut, eta, -lut.alphabet.B)
        key = tuple(sorted(eta))
        if eta != key:
            other = vnu(lut, key, -lut.alphabet.B)
            if other != here:
                out.append(LutViolation("permutation", eta, f"{here} != {other} at {key}"))
        for y in (-lut.alphabet.B, lut.alphabet.B):
            a = vnu(lut, eta, y)
            b = vnu(lut, tuple(-m for m in eta), -y)
            if a != -b:
                out.append(LutViolation("odd-symmetry", eta + (y,), f"{a} != -({b})"))
        for axis in range(lut.arity):
            if eta[axis] == s:
                continue
            up = list(eta)
            up[axis] += 1
            nxt = vnu(lut, tuple(up), -lut.alphabet.B)
            if nxt < here:
                out.append(
                    LutViolation("monotonicity", eta, f"increasing input {axis} to {tuple(up)} drops {here} -> {nxt}")
                )
    return out


def lut_from_offset_min_sum(alphabet: MessageAlphabet, d_v: int = 3) -> Lut:
    """VNU of the 7-level offset min-sum decoder written as a FAID rule.

    Output is ``sign(x) * min(L_3, max(0, |x| - 1))`` with ``x = sum(eta) + 2y``.
    """
    if alphabet.s != 3 or alphabet.B != 1:
        raise ValueError("offset min-sum LUT is defined for the 7-level alphabet with B=1 only")
    if d_v != 3:
        raise ValueError("offset min-sum LUT is defined for d_v=3 only")
    levels = alphabet.levels
    x = levels[:, None] + levels[None, :] - 2 * alphabet.B
    table = np.sign(x) * np.minimum(alphabet.s, np.maximum(0, np.abs(x) - 1))
    return Lut(alphabet, d_v, table, "offset-ms")


# --- file format ------------------------------------------------------------

def format_lut(lut: Lut) -> str:
    if lut.arity != 2:
        raise ValueError("the LUT text format holds two-input rules only")
    lines = [f"{lut.alphabet.s} {lut.d_v}"]
    lines += [" ".join(str(int(v)) for v in row) for row in lut.table]
    return "\n".join(lines) + "\n"


def write_lut(lut: Lut, path) -> None:
    with open(path, "w") as fh:
        fh.write(format_lut(lut))


def parse_lut(text: str, path="<string>", name: str | None = None, B: int = 1) -> Lut:
    """Parse the LUT text format. Blank lines and ``#`` comments are skipped."""
    rows = [
        (lineno, line.split())
        for lineno, line in enumerate(text.splitlines(), start=1)
        if line.strip() and not line.lstrip().startswith("#")
    ]
    if not rows:
        raise LutFormatError(path, None, "empty LUT file")
    lineno, header = rows[0]
    if len(header) != 2:
        raise LutFormatError(path, lineno, f"header must be 's d_v', got {' '.join(header)!r}")
    try:
        s, d_v = (int(tok) for tok in header)
    except ValueError:
        raise LutFormatError(path, lineno, f"non-integer header {' '.join(header)!r}") from None
    if s < 1:
        raise LutFormatError(path, lineno, f"s must be >= 1, got {s}")
    if d_v != 3:
        raise LutFormatError(path, lineno, f"only d_v=3 rules are supported, got {d_v}")
    size = 2 * s + 1
    body = rows[1:]
    if len(body) != size:
        last = body[-1][0] if body else lineno
        raise LutFormatError(path, last, f"expected {size} table rows, found {len(body)}")
    table = np.zeros((size, size), dtype=np.int64)
    for r, (lineno, toks) in enumerate(body):
        if len(toks) != size:
            raise LutFormatError(path, lineno, f"expected {size} entries, found {len(toks)}")
        for c, tok in enumerate(toks):
            try:
                v = int(tok)
            except ValueError:
                raise LutFormatError(path, lineno, f"non-integer entry {tok!r}") from None
            if abs(v) > s:
                raise LutFormatError(path, lineno, f"entry {v} outside levels -{s}..{s}")
            table[r, c] = v
    if name is None:
        name = os.path.splitext(os.path.basename(str(path)))[0]
    return Lut(MessageAlphabet(s, B), d_v, table, name)


def read_lut(path, B: int = 1) -> Lut:
    with open(path) as fh:
        return parse_lut(fh.read(), path, B=B)
