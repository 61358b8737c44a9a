"""Functional thresholds of noisy decoders.

The asymptotic error probability ``alpha -> pe(alpha)`` is sampled with
density evolution.  The functional region is the prefix of the alpha axis on
which the limit exists and the local Lipschitz constant keeps growing; its
right end ``alpha_star`` is then classified by refining the grid: if the
largest local slope keeps doubling as the step halves the transition is a
discontinuity and ``alpha_bar = alpha_star``, otherwise it is an inflection
point and ``alpha_bar = 0``.
"""

from __future__ import annotations

import csv
import io
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .alphabet import NoiseParams
from .de import DEFAULT_MAX_ITER, DEFAULT_TOL, de_iterate
from .decoder import DecoderSpec


class TransitionKind(str, Enum):
    DISCONTINUITY = "DISCONTINUITY"
    INFLECTION = "INFLECTION"
    UNDEFINED = "UNDEFINED"


@dataclass(frozen=True)
class ThresholdConfig:
    alpha_lo: float = 0.0
    alpha_hi: float = 0.5
    step: float = 1e-3
    refine_factor: int = 2
    # a jump of height J gives slopes J/h, so the ratio approaches the refine
    # factor from below; smooth transitions give ratios near 1
    divergence_ratio: float = 1.5
    refinements: int = 3
    slope_slack: float = 1e-9
    max_iter: int = DEFAULT_MAX_ITER
    tol: float = DEFAULT_TOL
    jobs: int = 1
    chunk: int = 16

    def effective_slack(self, step: float) -> float:
        # pe values carry DE truncation error of order tol; slopes inherit tol/step
        return max(self.slope_slack, 10.0 * self.tol / step)


@dataclass
class PeCurve:
    grid: np.ndarray
    pe: np.ndarray  # nan where the limit is undefined
    grid_step: float
    # tail maxima of every trajectory, used as the level of undefined points
    pe_upper: np.ndarray | None = None

    @property
    def defined(self) -> np.ndarray:
        return ~np.isnan(self.pe)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["alpha", "pe", "defined"])
        for a, pe in zip(self.grid, self.pe):
            ok = not math.isnan(pe)
            w.writerow([_fmt(a), repr(float(pe)) if ok else "", int(ok)])
        return buf.getvalue()


@dataclass
class ThresholdReport:
    alpha_star: float
    kind: TransitionKind
    alpha_bar: float
    lipschitz_estimates: list[float] = field(default_factory=list)
    # step of the final refinement, i.e. the resolution of alpha_star
    resolution: float = 0.0
    undefined_at: float | None = None

    def __post_init__(self):
        self.kind = TransitionKind(self.kind)
        if self.kind is not TransitionKind.DISCONTINUITY and self.alpha_bar != 0.0:
            raise ValueError("alpha_bar must be 0 unless the transition is a discontinuity")
        if self.kind is TransitionKind.DISCONTINUITY and self.alpha_bar != self.alpha_star:
            raise ValueError("alpha_bar must equal alpha_star at a discontinuity")

    def to_text(self) -> str:
        lines = [
            f"alpha_star = {self.alpha_star!r}",
            f"kind = {self.kind.value}",
            f"alpha_bar = {self.alpha_bar!r}",
            f"resolution = {self.resolution!r}",
            "lipschitz_estimates = " + ",".join(repr(x) for x in self.lipschitz_estimates),
        ]
        if self.undefined_at is not None:
            lines.append(f"undefined_at = {self.undefined_at!r}")
        return "\n".join(lines) + "\n"


def _fmt(a: float) -> str:
    return f"{a:.10g}"


def make_grid(lo: float, hi: float, step: float) -> np.ndarray:
    if not 0.0 <= lo < hi <= 0.5:
        raise ValueError(f"need 0 <= alpha_lo < alpha_hi <= 0.5, got [{lo}, {hi}]")
    if step <= 0.0:
        raise ValueError("step must be positive")
    n = int(math.floor((hi - lo) / step + 1e-9))
    return np.round(lo + step * np.arange(n + 1), 12)


# --- sampling -----------------------------------------------------------------

def _pe_point(args):
    alpha, dspec, noise, max_iter, tol = args
    res = de_iterate(float(alpha), dspec, noise, max_iter=max_iter, tol=tol)
    return (res.pe_infinity if res.converged else math.nan), res.pe_tail_max


def _evaluate(alphas, dspec, noise, max_iter, tol, jobs=1):
    tasks = [(a, dspec, noise, max_iter, tol) for a in alphas]
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            out = list(pool.map(_pe_point, tasks))
    else:
        out = [_pe_point(t) for t in tasks]
    pe = np.array([o[0] for o in out], dtype=float)
    upper = np.array([o[1] for o in out], dtype=float)
    return pe, upper


def sample_pe_curve(
    dspec: DecoderSpec,
    noise: NoiseParams,
    alpha_lo: float,
    alpha_hi: float,
    step: float,
    max_iter: int = DEFAULT_MAX_ITER,
    tol: float = DEFAULT_TOL,
    jobs: int = 1,
) -> PeCurve:
    grid = make_grid(alpha_lo, alpha_hi, step)
    pe, upper = _evaluate(grid, dspec, noise, max_iter, tol, jobs)
    return PeCurve(grid, pe, step, upper)


def lipschitz_profile(curve: PeCurve) -> list[tuple[float, float]]:
    """Local slope at every defined grid point.

    Interior points use symmetric differences, segment ends one-sided ones;
    undefined points split the curve into independent segments and an isolated
    defined point gets a nan slope.
    """
    pe, grid, h = curve.pe, curve.grid, curve.grid_step
    if int(np.sum(curve.defined)) < 3:
        raise ValueError("need at least 3 defined points")
    out = []
    for lo, hi in _segments(curve.defined):
        seg = pe[lo:hi]
        n = hi - lo
        for k in range(n):
            if n == 1:
                slope = math.nan
            elif k == 0:
                slope = abs(seg[1] - seg[0]) / h
            elif k == n - 1:
                slope = abs(seg[k] - seg[k - 1]) / h
            else:
                slope = abs(seg[k + 1] - seg[k - 1]) / (2 * h)
            out.append((float(grid[lo + k]), float(slope)))
    return out


def _segments(mask):
    """``(start, stop)`` index ranges of consecutive True entries."""
    runs, start = [], None
    for i, ok in enumerate(mask):
        if ok and start is None:
            start = i
        elif not ok and start is not None:
            runs.append((start, i))
            start = None
    if start is not None:
        runs.append((start, len(mask)))
    return runs


# --- functional threshold -----------------------------------------------------

def _levels(pe, upper):
    # undefined points take the top of their oscillation as their level
    return np.where(np.isnan(pe), upper, pe)


def _find_candidate(dspec, noise, config: ThresholdConfig):
    """Scan the coarse grid left to right until the functional prefix ends.

    Returns ``(grid, pe, upper, bracket_index, capped_by_undefined)``, where the
    transition lies between ``grid[i]`` and ``grid[i + 1]``.
    """
    grid = make_grid(config.alpha_lo, config.alpha_hi, config.step)
    h = config.step
    slack = config.effective_slack(h)
    pe = np.full(grid.size, np.nan)
    upper = np.full(grid.size, np.nan)
    done = 0
    while done < grid.size:
        stop = min(grid.size, done + config.chunk)
        pe[done:stop], upper[done:stop] = _evaluate(
            grid[done:stop], dspec, noise, config.max_iter, config.tol, config.jobs
        )
        done = stop
        for i in range(done):
            if np.isnan(pe[i]):
                return grid, pe, upper, i - 1, True
            if i + 2 < done and not np.isnan(pe[i + 1]) and not np.isnan(pe[i + 2]):
                s0 = abs(pe[i + 1] - pe[i]) / h
                s1 = abs(pe[i + 2] - pe[i + 1]) / h
                if s1 < s0 - slack:
                    return grid, pe, upper, i, False
    # slope kept growing over the whole range
    return grid, pe, upper, grid.size - 2, False


def functional_threshold(
    dspec: DecoderSpec, noise: NoiseParams, config: ThresholdConfig | None = None
) -> ThresholdReport:
    config = config or ThresholdConfig()
    grid, pe, upper, i, capped = _find_candidate(dspec, noise, config)
    h = config.step

    if i < 0:
        # no defined point at the start of the range
        return ThresholdReport(float(grid[0]), TransitionKind.UNDEFINED, 0.0, [], h, float(grid[0]))

    levels = _levels(pe, upper)
    left = float(grid[i])
    slope = abs(levels[i + 1] - levels[i]) / h
    estimates = [float(slope)]
    ratios = []
    step = h
    undefined_at = float(grid[i + 1]) if capped else None
    for _ in range(config.refinements):
        step /= config.refine_factor
        k = config.refine_factor
        # window covering the bracket plus two fine steps on each side
        local = np.round(left + step * np.arange(-2, k + 3), 12)
        local = local[(local >= config.alpha_lo) & (local <= config.alpha_hi)]
        lpe, lup = _evaluate(local, dspec, noise, config.max_iter, config.tol, config.jobs)
        lv = _levels(lpe, lup)
        slopes = np.abs(np.diff(lv)) / step
        # the functional side must stay defined up to the bracket
        first_undef = np.flatnonzero(np.isnan(lpe))
        cap = first_undef[0] if first_undef.size else lpe.size
        valid = np.arange(slopes.size) < cap
        if not np.any(valid):
            break
        j = int(np.flatnonzero(valid)[np.argmax(slopes[valid])])
        new_slope = float(slopes[j])
        ratios.append(new_slope / slope if slope > 0 else math.inf)
        estimates.append(new_slope)
        slope = new_slope
        left = float(local[j])
        if np.isnan(lpe[j + 1]):
            undefined_at = float(local[j + 1])

    jump = len(ratios) == config.refinements and all(r >= config.divergence_ratio for r in ratios)
    if jump:
        return ThresholdReport(left, TransitionKind.DISCONTINUITY, left, estimates, step, undefined_at)
    return ThresholdReport(left, TransitionKind.INFLECTION, 0.0, estimates, step, undefined_at)


# --- other threshold notions ----------------------------------------------------

def _curve_on(dspec, noise, grid, max_iter=DEFAULT_MAX_ITER, tol=DEFAULT_TOL):
    grid = np.asarray(grid, dtype=float)
    pe, upper = _evaluate(grid, dspec, noise, max_iter, tol)
    step = float(grid[1] - grid[0]) if grid.size > 1 else 0.0
    return PeCurve(grid, pe, step, upper)


def useful_region_bound(dspec: DecoderSpec, noise: NoiseParams, grid) -> float | None:
    """Largest grid alpha whose asymptotic error probability is below alpha itself."""
    curve = grid if isinstance(grid, PeCurve) else _curve_on(dspec, noise, grid)
    ok = curve.defined & (np.nan_to_num(curve.pe, nan=np.inf) < curve.grid)
    return float(curve.grid[ok].max()) if ok.any() else None


def target_ber_threshold(dspec: DecoderSpec, noise: NoiseParams, lam: float, grid) -> float:
    """Largest grid alpha with ``pe <= lam``; ``-inf`` when none qualifies."""
    if not 0.0 < lam <= 1.0:
        raise ValueError("lambda must lie in (0, 1]")
    curve = grid if isinstance(grid, PeCurve) else _curve_on(dspec, noise, grid)
    ok = curve.defined & (np.nan_to_num(curve.pe, nan=np.inf) <= lam)
    return float(curve.grid[ok].max()) if ok.any() else -math.inf


# --- sweeps ---------------------------------------------------------------------

@dataclass
class SweepRow:
    axis: str
    value: float
    alpha_bar: float
    kind: TransitionKind
    alpha_star: float


AXES = ("p_v", "p_c", "p_a")


def threshold_sweep(
    dspec: DecoderSpec,
    axis: str,
    fixed: NoiseParams,
    values,
    config: ThresholdConfig | None = None,
) -> list[SweepRow]:
    if axis not in AXES:
        raise ValueError(f"axis must be one of {AXES}, got {axis!r}")
    rows = []
    for v in values:
        noise = fixed.replace(**{axis: float(v)})
        rep = functional_threshold(dspec, noise, config)
        rows.append(SweepRow(axis, float(v), rep.alpha_bar, rep.kind, rep.alpha_star))
    return rows


def sweep_csv(rows: list[SweepRow]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["axis", "value", "alpha_bar", "kind"])
    for r in rows:
        w.writerow([r.axis, repr(r.value), repr(r.alpha_bar), r.kind.value])
    return buf.getvalue()
