"""Candidate FAID rules and their robustness ranking.

Candidates either come from exhaustive enumeration (small alphabets only) or
from a directory of LUT files.  Each rule gets a noiseless DE threshold and a
functional threshold per fault model; the gap between the two measures how
much the decoder loses on faulty hardware.
"""

from __future__ import annotations

import csv
import io
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .alphabet import EnsembleSpec, MessageAlphabet, NoiseModel, NoiseParams
from .de import de_iterate
from .decoder import Lut, LutFormatError, make_decoder, read_lut, validate_lut
from .threshold import ThresholdConfig, TransitionKind, functional_threshold

MAX_ENUM_S = 2
BISECTION_TOL = 1e-5
SUCCESS_PE = 1e-9


class Provenance(str, Enum):
    ENUMERATED = "ENUMERATED"
    FILE = "FILE"


class CandidateError(ValueError):
    """One or more candidate rules failed to parse or validate."""

    def __init__(self, problems: list[tuple[str, str]]):
        self.problems = problems
        super().__init__("\n".join(f"{where}: {msg}" for where, msg in problems))


@dataclass
class CandidateSet:
    rules: list[tuple[str, Lut]]
    provenance: Provenance
    # files skipped by a non-strict ingest, with their diagnostics
    rejected: list[tuple[str, str]] = field(default_factory=list)

    def __post_init__(self):
        self.provenance = Provenance(self.provenance)
        if self.provenance is Provenance.ENUMERATED:
            return  # valid by construction
        problems = [(name, str(v)) for name, lut in self.rules for v in validate_lut(lut)]
        if problems:
            raise CandidateError(problems)

    def __len__(self):
        return len(self.rules)

    def __iter__(self):
        return iter(self.rules)

    def names(self) -> list[str]:
        return [name for name, _ in self.rules]

    @classmethod
    def of(cls, luts, provenance=Provenance.FILE) -> CandidateSet:
        return cls([(lut.name, lut) for lut in luts], provenance)


# --- enumeration ---------------------------------------------------------------

def _monotone_symmetric_tables(size: int, s: int):
    """Yield every symmetric table over ``-s..s`` that is non-decreasing along rows and columns.

    Cells of the upper triangle are filled row by row; a cell only has to
    dominate its left and upper neighbours, which are already fixed.
    """
    cells = [(i, j) for i in range(size) for j in range(i, size)]
    table = np.zeros((size, size), dtype=np.int64)

    def fill(k):
        if k == len(cells):
            yield table.copy()
            return
        i, j = cells[k]
        lo = -s
        if j > 0:
            lo = max(lo, table[i, j - 1])
        if i > 0:
            lo = max(lo, table[i - 1, j])
        for v in range(lo, s + 1):
            table[i, j] = table[j, i] = v
            yield from fill(k + 1)

    yield from fill(0)


def enumerate_valid_luts(alphabet: MessageAlphabet, d_v: int = 3) -> CandidateSet:
    """All valid two-input rules over a small alphabet.

    Odd symmetry holds by construction because only the ``-B`` half is stored.
    """
    if d_v != 3:
        raise ValueError("enumeration is implemented for d_v = 3 only")
    if alphabet.s > MAX_ENUM_S:
        raise ValueError(
            f"enumeration over {alphabet.size} levels is intractable; "
            "use ingest_luts() with a directory of candidate LUT files instead"
        )
    rules = []
    for k, table in enumerate(_monotone_symmetric_tables(alphabet.size, alphabet.s)):
        name = f"s{alphabet.s}-{k:06d}"
        rules.append((name, Lut(alphabet, d_v, table, name)))
    return CandidateSet(rules, Provenance.ENUMERATED)


def ingest_luts(path, strict: bool = True, B: int = 1) -> CandidateSet:
    """Read every ``*.lut`` file in a directory (or a list of files).

    With ``strict`` any unreadable or invalid file raises
    :class:`CandidateError`; otherwise such files are listed in ``rejected``.
    """
    if isinstance(path, (str, os.PathLike)) and os.path.isdir(path):
        files = sorted(
            os.path.join(path, f) for f in os.listdir(path) if f.endswith(".lut")
        )
    elif isinstance(path, (str, os.PathLike)):
        files = [os.fspath(path)]
    else:
        files = [os.fspath(p) for p in path]
    rules, problems = [], []
    for f in files:
        try:
            lut = read_lut(f, B=B)
        except (LutFormatError, OSError) as exc:
            problems.append((f, str(exc)))
            continue
        bad = validate_lut(lut)
        if bad:
            problems.extend((f, str(v)) for v in bad)
            continue
        rules.append((lut.name, lut))
    if problems and strict:
        raise CandidateError(problems)
    return CandidateSet(rules, Provenance.FILE, problems)


# --- thresholds and ranking --------------------------------------------------------

def noiseless_threshold(dspec, tol: float = BISECTION_TOL, max_iter: int = 2000) -> float:
    """Classical DE threshold by bisection on ``[0, 0.5]``.

    Success at alpha means DE converges to an error probability below 1e-9.
    """
    noise = NoiseParams.noiseless()

    def ok(alpha):
        res = de_iterate(alpha, dspec, noise, max_iter=max_iter)
        return res.converged and res.pe_infinity < SUCCESS_PE

    if not ok(0.0):
        return 0.0
    lo, hi = 0.0, 0.5
    if ok(hi):
        return hi
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if ok(mid):
            lo = mid
        else:
            hi = mid
    return lo


@dataclass
class RobustnessRecord:
    name: str
    noiseless_threshold: float
    functional_threshold_sp: float
    functional_threshold_fd: float
    kind_sp: TransitionKind = TransitionKind.DISCONTINUITY
    kind_fd: TransitionKind = TransitionKind.DISCONTINUITY

    @property
    def discrepancy_sp(self) -> float:
        return self.noiseless_threshold - self.functional_threshold_sp

    @property
    def discrepancy_fd(self) -> float:
        return self.noiseless_threshold - self.functional_threshold_fd

    def discrepancy(self, model) -> float:
        return self.discrepancy_sp if NoiseModel(model) is NoiseModel.SP else self.discrepancy_fd

    def kind(self, model) -> TransitionKind:
        return self.kind_sp if NoiseModel(model) is NoiseModel.SP else self.kind_fd


def _record(args) -> RobustnessRecord:
    name, lut, d_c, noise_sp, noise_fd, config = args
    dspec = make_decoder(lut, d_c, name)
    noiseless = noiseless_threshold(dspec)
    out = {}
    for key, noise in (("sp", noise_sp), ("fd", noise_fd)):
        if noise is None:
            out[key] = (math.nan, TransitionKind.UNDEFINED)
        else:
            rep = functional_threshold(dspec, noise, config)
            out[key] = (rep.alpha_bar, rep.kind)
    return RobustnessRecord(name, noiseless, out["sp"][0], out["fd"][0], out["sp"][1], out["fd"][1])


def evaluate_candidates(
    cands: CandidateSet,
    ensemble: EnsembleSpec,
    noise_sp: NoiseParams | None,
    noise_fd: NoiseParams | None,
    config: ThresholdConfig | None = None,
    jobs: int = 1,
) -> list[RobustnessRecord]:
    """Thresholds of every candidate, in candidate order."""
    config = config or ThresholdConfig()
    for lut_name, lut in cands:
        if lut.d_v != ensemble.d_v:
            raise ValueError(f"{lut_name}: rule is for d_v={lut.d_v}, ensemble has {ensemble.d_v}")
    tasks = [(name, lut, ensemble.d_c, noise_sp, noise_fd, config) for name, lut in cands]
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(_record, tasks))
    return [_record(t) for t in tasks]


def sort_records(records, model) -> list[RobustnessRecord]:
    model = NoiseModel(model)

    def key(r):
        undefined = r.kind(model) is TransitionKind.UNDEFINED
        return (undefined, r.discrepancy(model), -r.noiseless_threshold, r.name)

    return sorted(records, key=key)


def rank_candidates(
    cands: CandidateSet,
    ensemble: EnsembleSpec,
    noise_sp: NoiseParams | None,
    noise_fd: NoiseParams | None,
    model=NoiseModel.SP,
    config: ThresholdConfig | None = None,
    jobs: int = 1,
) -> list[RobustnessRecord]:
    """Records sorted by ascending discrepancy for ``model``.

    Ties go to the higher noiseless threshold, then to the name.  Rules whose
    functional threshold is UNDEFINED come last.
    """
    if len(cands) == 0:
        raise ValueError("candidate set is empty")
    records = evaluate_candidates(cands, ensemble, noise_sp, noise_fd, config, jobs)
    return sort_records(records, model)


def select_extremes(records, model) -> tuple[str, str]:
    """Names of the most and the least robust rule for ``model``."""
    if len(records) < 2:
        raise ValueError("need at least two records")
    ranked = sort_records(records, model)
    return ranked[0].name, ranked[-1].name


def spearman(a, b) -> float:
    """Spearman rank correlation of two equally long score lists (average ranks for ties)."""
    from scipy.stats import spearmanr

    return float(spearmanr(a, b).statistic)


def ranked_csv(records) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(
        ["name", "noiseless", "alpha_bar_SP", "alpha_bar_FD", "discrepancy_SP", "discrepancy_FD", "kind_SP", "kind_FD"]
    )
    for r in records:
        w.writerow(
            [
                r.name,
                repr(r.noiseless_threshold),
                repr(r.functional_threshold_sp),
                repr(r.functional_threshold_fd),
                repr(r.discrepancy_sp),
                repr(r.discrepancy_fd),
                r.kind_sp.value,
                r.kind_fd.value,
            ]
        )
    return buf.getvalue()
