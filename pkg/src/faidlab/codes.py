"""Parity-check codes: alist IO, the (155, 93) Tanner code, random regular
codes and GF(2) helpers."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from importlib import resources

import numpy as np


class AlistError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class ParityCheckCode:
    """Sparse parity-check code.

    ``check_vars[j]`` lists the variables of check ``j`` and ``var_checks[i]``
    the checks of variable ``i`` (both 0-based, sorted).
    """

    n: int
    m: int
    check_vars: tuple
    var_checks: tuple
    name: str = ""

    def __post_init__(self):
        if len(self.check_vars) != self.m or len(self.var_checks) != self.n:
            raise ValueError("adjacency lists do not match n and m")
        from_checks = {(int(v), j) for j, vs in enumerate(self.check_vars) for v in vs}
        from_vars = {(i, int(c)) for i, cs in enumerate(self.var_checks) for c in cs}
        if from_checks != from_vars:
            raise ValueError("check and variable adjacency lists disagree")
        n_edges = sum(len(vs) for vs in self.check_vars)
        if len(from_checks) != n_edges:
            raise ValueError("repeated edge in adjacency")

    @classmethod
    def from_matrix(cls, H, name: str = "") -> ParityCheckCode:
        H = np.asarray(H) % 2
        m, n = H.shape
        check_vars = tuple(tuple(int(v) for v in np.flatnonzero(row)) for row in H)
        var_checks = tuple(tuple(int(c) for c in np.flatnonzero(col)) for col in H.T)
        return cls(n, m, check_vars, var_checks, name)

    @cached_property
    def H(self) -> np.ndarray:
        H = np.zeros((self.m, self.n), dtype=np.uint8)
        for j, vs in enumerate(self.check_vars):
            H[j, list(vs)] = 1
        return H

    @property
    def var_degrees(self) -> np.ndarray:
        return np.array([len(c) for c in self.var_checks])

    @property
    def check_degrees(self) -> np.ndarray:
        return np.array([len(v) for v in self.check_vars])

    @property
    def n_edges(self) -> int:
        return int(self.var_degrees.sum())

    @cached_property
    def rank(self) -> int:
        return gf2_rank(self.H)

    @property
    def k(self) -> int:
        return self.n - self.rank

    def regular_degrees(self) -> tuple[int, int] | None:
        dv, dc = set(self.var_degrees.tolist()), set(self.check_degrees.tolist())
        if len(dv) == 1 and len(dc) == 1:
            return dv.pop(), dc.pop()
        return None

    def syndrome(self, x) -> np.ndarray:
        return (self.H.astype(np.int64) @ np.asarray(x, dtype=np.int64)) % 2

    def is_codeword(self, x) -> bool:
        return not self.syndrome(x).any()

    def edge_tables(self):
        """``(var_edges, chk_edges)``: edge ids per variable and per check.

        Edges are numbered in variable order.  Only regular codes are supported.
        """
        degs = self.regular_degrees()
        if degs is None:
            raise ValueError("edge tables need a regular code")
        d_v, d_c = degs
        var_edges = np.arange(self.n * d_v, dtype=np.int64).reshape(self.n, d_v)
        chk_edges = np.empty((self.m, d_c), dtype=np.int64)
        fill = np.zeros(self.m, dtype=np.int64)
        for i, cs in enumerate(self.var_checks):
            for slot, c in enumerate(cs):
                chk_edges[c, fill[c]] = var_edges[i, slot]
                fill[c] += 1
        return var_edges, chk_edges


# --- alist ---------------------------------------------------------------------

def format_alist(code: ParityCheckCode) -> str:
    col_w, row_w = code.var_degrees, code.check_degrees
    mc, mr = int(col_w.max()), int(row_w.max())
    lines = [f"{code.n} {code.m}", f"{mc} {mr}", " ".join(map(str, col_w)), " ".join(map(str, row_w))]
    for cs in code.var_checks:
        lines.append(" ".join(str(c + 1) for c in cs) + " 0" * (mc - len(cs)))
    for vs in code.check_vars:
        lines.append(" ".join(str(v + 1) for v in vs) + " 0" * (mr - len(vs)))
    return "\n".join(lines) + "\n"


def write_alist(code: ParityCheckCode, path) -> None:
    with open(path, "w") as fh:
        fh.write(format_alist(code))


def parse_alist(text: str, name: str = "") -> ParityCheckCode:
    """Parse alist text (1-based indices, zero padding ignored)."""
    lines = [ln.split() for ln in text.splitlines() if ln.strip()]
    pos = 0

    def take(section):
        nonlocal pos
        if pos >= len(lines):
            raise AlistError(f"file ends before the {section}")
        try:
            vals = [int(t) for t in lines[pos]]
        except ValueError:
            raise AlistError(f"non-integer token in the {section} (line {pos + 1})") from None
        pos += 1
        return vals

    header = take("header")
    if len(header) != 2 or min(header) < 1:
        raise AlistError("header must be 'n m' with positive sizes")
    n, m = header
    maxes = take("maximum-degree line")
    if len(maxes) != 2:
        raise AlistError("second line must hold the two maximum degrees")
    col_w = take("column-weight list")
    row_w = take("row-weight list")
    if len(col_w) != n or len(row_w) != m:
        raise AlistError(f"weight lists have {len(col_w)}/{len(row_w)} entries, expected {n}/{m}")
    if max(col_w) > maxes[0] or max(row_w) > maxes[1]:
        raise AlistError("a weight exceeds the declared maximum degree")

    def adjacency(count, weights, bound, section):
        out = []
        for i in range(count):
            vals = take(f"{section} {i + 1}")
            nz = [v for v in vals if v != 0]
            if len(nz) != weights[i]:
                raise AlistError(f"{section} {i + 1} has {len(nz)} entries, weight says {weights[i]}")
            if any(v < 1 or v > bound for v in nz):
                raise AlistError(f"{section} {i + 1} has an index outside 1..{bound}")
            out.append(tuple(sorted(v - 1 for v in nz)))
        return tuple(out)

    var_checks = adjacency(n, col_w, m, "column list")
    check_vars = adjacency(m, row_w, n, "row list")
    try:
        return ParityCheckCode(n, m, check_vars, var_checks, name)
    except ValueError as exc:
        raise AlistError(f"inconsistent adjacency: {exc}") from None


def read_alist(path) -> ParityCheckCode:
    import os

    with open(path) as fh:
        return parse_alist(fh.read(), os.path.splitext(os.path.basename(str(path)))[0])


def tanner_code() -> ParityCheckCode:
    """The (155, 93) Tanner code shipped with the package."""
    text = resources.files("faidlab.data").joinpath("tanner155.alist").read_text()
    return parse_alist(text, "tanner155")


def tanner_matrix() -> np.ndarray:
    """Quasi-cyclic construction of the Tanner code from 31x31 circulants."""
    p = 31
    exps = [[1, 2, 4, 8, 16], [5, 10, 20, 9, 18], [25, 19, 7, 14, 28]]
    H = np.zeros((3 * p, 5 * p), dtype=np.uint8)
    eye = np.eye(p, dtype=np.uint8)
    for j, row in enumerate(exps):
        for k, e in enumerate(row):
            H[j * p : (j + 1) * p, k * p : (k + 1) * p] = np.roll(eye, e, axis=1)
    return H


def random_regular_code(n: int, d_v: int = 3, d_c: int = 5, seed: int = 0, max_tries: int = 100) -> ParityCheckCode:
    """Random (d_v, d_c)-regular code from the configuration model without parallel edges.

    Parallel edges are removed by swapping check sockets with randomly chosen
    edges until none remain.
    """
    if (n * d_v) % d_c:
        raise ValueError("n * d_v must be a multiple of d_c")
    m = n * d_v // d_c
    rng = np.random.default_rng(seed)
    var_of = np.repeat(np.arange(n), d_v)
    chk_of = np.repeat(np.arange(m), d_c)
    rng.shuffle(chk_of)
    for _ in range(max_tries):
        key = var_of * m + chk_of
        order = np.argsort(key, kind="stable")
        dup = order[1:][key[order[1:]] == key[order[:-1]]]
        if dup.size == 0:
            break
        # one swap at a time keeps chk_of a permutation of the check sockets
        for i, j in zip(dup.tolist(), rng.integers(0, chk_of.size, dup.size).tolist()):
            chk_of[i], chk_of[j] = chk_of[j], chk_of[i]
    else:
        raise RuntimeError("could not remove parallel edges")
    var_checks = [[] for _ in range(n)]
    check_vars = [[] for _ in range(m)]
    for v, c in zip(var_of.tolist(), chk_of.tolist()):
        var_checks[v].append(c)
        check_vars[c].append(v)
    return ParityCheckCode(
        n, m, tuple(tuple(sorted(c)) for c in check_vars), tuple(tuple(sorted(v)) for v in var_checks),
        f"random-({d_v},{d_c})-{n}",
    )


# --- GF(2) ---------------------------------------------------------------------

def _rref(A: np.ndarray):
    A = (np.asarray(A) % 2).astype(np.uint8)
    rows, cols = A.shape
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        hit = np.flatnonzero(A[r:, c])
        if hit.size == 0:
            continue
        p = r + hit[0]
        if p != r:
            A[[r, p]] = A[[p, r]]
        others = np.flatnonzero(A[:, c])
        others = others[others != r]
        A[others] ^= A[r]
        pivots.append(c)
        r += 1
    return A[:r], pivots


def gf2_rank(A) -> int:
    return len(_rref(A)[1])


def generator_matrix(H) -> np.ndarray:
    """Basis of the null space of ``H`` over GF(2), one codeword per row."""
    R, pivots = _rref(H)
    n = R.shape[1]
    free = [c for c in range(n) if c not in set(pivots)]
    G = np.zeros((len(free), n), dtype=np.uint8)
    for i, f in enumerate(free):
        G[i, f] = 1
        # pivot variable of row r equals the sum of its free entries
        G[i, pivots] = R[:, f]
    return G
