"""``faidlab`` command line.

Every command writes CSV (or a key = value report) preceded by ``#`` comment
lines that record the package version, the seed and the full configuration.
Exit codes: 0 success, 1 usage or input error, 2 a requested answer is
UNDEFINED.
"""

from __future__ import annotations

import argparse
import os
import sys

from .alphabet import NoiseParams, make_alphabet
from .codes import read_alist, tanner_code
from .de import DEFAULT_MAX_ITER, DEFAULT_TOL
from .decoder import LutFormatError, format_lut, make_decoder, read_lut, validate_lut
from .designer import CandidateError, CandidateSet, enumerate_valid_luts, ingest_luts, rank_candidates, ranked_csv
from .sim import BerRow, CodewordMode, TrialConfig, ber_csv, run_ber
from .tables import ALIASES, NAMES, published_lut
from .threshold import (
    ThresholdConfig,
    TransitionKind,
    functional_threshold,
    sample_pe_curve,
    sweep_csv,
    threshold_sweep,
)

EXIT_OK, EXIT_USAGE, EXIT_UNDEFINED = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def version() -> str:
    from importlib.metadata import PackageNotFoundError
    from importlib.metadata import version as _v

    try:
        return _v("artifact")
    except PackageNotFoundError:
        return "unknown"


# --- argument helpers -------------------------------------------------------------

def _floats(text: str) -> list[float]:
    """``0.01,0.02`` or ``start:stop:step`` (stop included)."""
    try:
        if ":" in text:
            a, b, h = (float(t) for t in text.split(":"))
            if h <= 0 or b < a:
                raise ValueError
            n = int(round((b - a) / h))
            return [round(a + i * h, 12) for i in range(n + 1)]
        return [float(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a list or start:stop:step range: {text!r}") from None


def _seed_default() -> int:
    raw = os.environ.get("FAIDLAB_SEED")
    if raw is None:
        return 0
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"FAIDLAB_SEED must be an integer, got {raw!r}") from None


def load_lut(ref: str):
    """A published rule name or numeral, or a path to a LUT file."""
    if ref in NAMES or ref in ALIASES:
        return published_lut(ref)
    if os.path.exists(ref):
        return read_lut(ref)
    raise UsageError(f"{ref!r} is neither a published table ({', '.join(NAMES)}) nor a file")


def _noise(args, p_default=None) -> NoiseParams:
    model = args.model.upper()
    base = args.p if args.p is not None else p_default
    pv, pc, pa = (base if x is None else x for x in (args.pv, args.pc, args.pa))
    if model == "NONE":
        if any(x for x in (pv, pc, pa)):
            raise UsageError("--model none takes no noise levels")
        return NoiseParams.noiseless()
    if None in (pv, pc, pa):
        raise UsageError("give --p or all of --pv, --pc, --pa")
    return NoiseParams(pv, pc, pa, model)


def _threshold_config(args) -> ThresholdConfig:
    return ThresholdConfig(
        alpha_lo=args.alpha_lo,
        alpha_hi=args.alpha_hi,
        step=args.step,
        divergence_ratio=args.divergence_ratio,
        refinements=args.refinements,
        max_iter=args.max_iter,
        tol=args.tol,
        jobs=args.jobs,
    )


def _check_alpha_range(args):
    if not 0.0 <= args.alpha_lo < args.alpha_hi <= 0.5:
        raise UsageError(f"need 0 <= alpha-lo < alpha-hi <= 0.5, got {args.alpha_lo} and {args.alpha_hi}")


def _header(args, extra=()) -> str:
    # the worker count is left out so that output does not depend on it
    skip = {"func", "out", "jobs"}
    lines = [f"# faidlab {version()}", f"# command = {args.command}", f"# seed = {args.seed}"]
    for key in sorted(vars(args)):
        if key in skip or key in ("command", "seed"):
            continue
        lines.append(f"# {key} = {_show(getattr(args, key))}")
    lines += [f"# {k} = {v}" for k, v in extra]
    return "\n".join(lines) + "\n"


def _show(v) -> str:
    if isinstance(v, (list, tuple)):
        return ",".join(_show(x) for x in v)
    if isinstance(v, float):
        return repr(v)
    return str(v)


def _emit(args, body: str, extra=()):
    text = _header(args, extra) + body
    if args.out in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(args.out, "w") as fh:
            fh.write(text)


# --- commands ----------------------------------------------------------------

def cmd_de_curve(args) -> int:
    _check_alpha_range(args)
    dspec = make_decoder(load_lut(args.lut), args.dc)
    _dv_matches(dspec, args)
    curve = sample_pe_curve(dspec, _noise(args), args.alpha_lo, args.alpha_hi, args.step, args.max_iter, args.tol, args.jobs)
    _emit(args, curve.to_csv())
    return EXIT_OK


def cmd_threshold(args) -> int:
    _check_alpha_range(args)
    dspec = make_decoder(load_lut(args.lut), args.dc)
    _dv_matches(dspec, args)
    rep = functional_threshold(dspec, _noise(args), _threshold_config(args))
    _emit(args, rep.to_text())
    return EXIT_UNDEFINED if rep.kind is TransitionKind.UNDEFINED else EXIT_OK


def cmd_sweep(args) -> int:
    _check_alpha_range(args)
    dspec = make_decoder(load_lut(args.lut), args.dc)
    _dv_matches(dspec, args)
    axis = {"pv": "p_v", "pc": "p_c", "pa": "p_a"}[args.axis]
    fixed = _noise(args, p_default=0.0)
    if fixed.model_kind.value == "NONE":
        raise UsageError("a sweep needs --model sp or fd")
    rows = threshold_sweep(dspec, axis, fixed, args.values, _threshold_config(args))
    _emit(args, sweep_csv(rows))
    return EXIT_OK


def _candidates(args) -> CandidateSet:
    if args.enumerate is not None:
        return enumerate_valid_luts(make_alphabet(args.enumerate))
    if not args.luts:
        raise UsageError("give --luts or --enumerate")
    files, named = [], []
    for ref in args.luts:
        if ref in NAMES or ref in ALIASES:
            named.append(published_lut(ref))
        elif os.path.exists(ref):
            files.append(ref)
        else:
            raise UsageError(f"{ref!r} is neither a published table nor a file or directory")
    rules = [(lut.name, lut) for lut in named]
    for f in files:
        rules += ingest_luts(f, strict=True).rules
    return CandidateSet(rules, "FILE")


def cmd_rank(args) -> int:
    cands = _candidates(args)
    if len(cands) == 0:
        raise UsageError("no candidate rules found")
    model = args.model.upper()
    if model not in ("SP", "FD"):
        raise UsageError("rank needs --model sp or fd")
    noise = _noise(args)
    sp = noise if model == "SP" else None
    fd = noise if model == "FD" else None
    if args.p_other is not None:
        other = NoiseParams(args.p_other, args.p_other, args.p_other, "FD" if model == "SP" else "SP")
        sp, fd = (sp, other) if model == "SP" else (other, fd)
    records = rank_candidates(cands, make_decoder(cands.rules[0][1], args.dc).ensemble, sp, fd, model, _threshold_config(args), args.jobs)
    _emit(args, ranked_csv(records), [("candidates", len(cands))])
    return EXIT_OK


def cmd_simulate(args) -> int:
    code = tanner_code() if args.code == "tanner155" else read_alist(args.code)
    noise = _noise(args, p_default=0.0 if args.model.upper() == "NONE" else None)
    template = TrialConfig(
        alpha=0.0,
        noise=noise,
        max_iterations=args.iterations,
        seed=args.seed,
        codeword_mode=CodewordMode(args.codeword_mode.upper()),
        early_stop=not args.no_early_stop,
    )
    rows = []
    for ref in args.luts:
        dspec = make_decoder(load_lut(ref), args.dc)
        for a in args.alphas:
            cfg = template.with_(alpha=a)
            rows.append(BerRow(dspec.name, cfg, run_ber(code, dspec, cfg, args.trials, args.jobs)))
    _emit(args, ber_csv(rows), [("code", f"{code.name} n={code.n} m={code.m}")])
    return EXIT_OK


def cmd_validate_lut(args) -> int:
    bad = 0
    for path in args.paths:
        try:
            lut = load_lut(path)
        except LutFormatError as exc:
            print(f"{path}: FORMAT {exc}")
            bad += 1
            continue
        problems = validate_lut(lut)
        if problems:
            bad += 1
            for v in problems:
                print(f"{path}: {v}")
        else:
            print(f"{path}: ok")
    return EXIT_USAGE if bad else EXIT_OK


def cmd_enumerate(args) -> int:
    if args.published:
        luts = [published_lut(n) for n in NAMES]
        rules = [(lut.name, lut) for lut in luts]
    else:
        rules = enumerate_valid_luts(make_alphabet(args.s)).rules
    if args.out_dir:
        os.makedirs(args.out_dir, exist_ok=True)
        for name, lut in rules:
            with open(os.path.join(args.out_dir, f"{name}.lut"), "w") as fh:
                fh.write(format_lut(lut))
        print(f"wrote {len(rules)} rules to {args.out_dir}")
    else:
        print(len(rules))
    return EXIT_OK


def _dv_matches(dspec, args):
    if dspec.ensemble.d_v != args.dv:
        raise UsageError(f"rule is for d_v={dspec.ensemble.d_v}, --dv is {args.dv}")


# --- parser ------------------------------------------------------------------

def _add_common(p, seed):
    p.add_argument("--jobs", type=int, default=1, help="worker processes (default: %(default)s)")
    p.add_argument("--seed", type=int, default=seed, help="RNG seed; falls back to FAIDLAB_SEED (default: %(default)s)")
    p.add_argument("--out", "-o", default=None, help="output file (default: standard output)")


def _add_decoder(p, lut=True):
    if lut:
        p.add_argument("--lut", default="offset-ms", help="published table name or LUT file (default: %(default)s)")
    p.add_argument("--dv", type=int, default=3, help="variable degree (default: %(default)s)")
    p.add_argument("--dc", type=int, default=5, help="check degree (default: %(default)s)")


def _add_noise(p):
    p.add_argument("--model", choices=["none", "sp", "fd", "NONE", "SP", "FD"], default="none",
                   help="hardware noise model (default: %(default)s)")
    p.add_argument("--p", type=float, default=None, help="noise level for all three units (default: unset)")
    for unit in ("pv", "pc", "pa"):
        p.add_argument(f"--{unit}", type=float, default=None, help=f"override for {unit} (default: --p)")


def _add_alpha(p):
    p.add_argument("--alpha-lo", type=float, default=0.0, help="(default: %(default)s)")
    p.add_argument("--alpha-hi", type=float, default=0.5, help="(default: %(default)s)")
    p.add_argument("--step", type=float, default=1e-3, help="alpha grid step (default: %(default)s)")
    p.add_argument("--max-iter", type=int, default=DEFAULT_MAX_ITER, help="DE iteration cap (default: %(default)s)")
    p.add_argument("--tol", type=float, default=DEFAULT_TOL, help="DE convergence tolerance (default: %(default)s)")


def _add_threshold(p):
    p.add_argument("--divergence-ratio", type=float, default=ThresholdConfig.divergence_ratio,
                   help="slope ratio per refinement that signals a jump (default: %(default)s)")
    p.add_argument("--refinements", type=int, default=ThresholdConfig.refinements, help="(default: %(default)s)")


def build_parser(seed: int = 0) -> argparse.ArgumentParser:
    parser = _Parser(prog="faidlab", description="Noisy finite-alphabet iterative decoders: DE, thresholds, design, simulation.")
    parser.add_argument("--version", action="version", version=f"faidlab {version()}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("de-curve", help="asymptotic error probability against alpha")
    _add_common(p, seed)
    _add_decoder(p)
    _add_noise(p)
    _add_alpha(p)
    p.set_defaults(func=cmd_de_curve)

    p = sub.add_parser("threshold", help="functional threshold of one decoder")
    _add_common(p, seed)
    _add_decoder(p)
    _add_noise(p)
    _add_alpha(p)
    _add_threshold(p)
    p.set_defaults(func=cmd_threshold)

    p = sub.add_parser("sweep", help="functional threshold along one noise axis")
    _add_common(p, seed)
    _add_decoder(p)
    _add_noise(p)
    _add_alpha(p)
    _add_threshold(p)
    p.add_argument("--axis", choices=["pv", "pc", "pa"], required=True)
    p.add_argument("--values", type=_floats, required=True, help="comma list or start:stop:step")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("rank", help="rank candidate rules by robustness")
    _add_common(p, seed)
    _add_decoder(p, lut=False)
    _add_noise(p)
    _add_alpha(p)
    _add_threshold(p)
    p.add_argument("--luts", nargs="*", default=[], help="LUT files, directories or published names")
    p.add_argument("--enumerate", type=int, default=None, metavar="S", help="rank every valid rule with 2S+1 levels")
    p.add_argument("--p-other", type=float, default=None, help="also evaluate the other model at this level")
    p.set_defaults(func=cmd_rank)

    p = sub.add_parser("simulate", help="Monte Carlo BER on a finite code")
    _add_common(p, seed)
    _add_decoder(p, lut=False)
    _add_noise(p)
    p.add_argument("--code", default="tanner155", help="alist file or 'tanner155' (default: %(default)s)")
    p.add_argument("--luts", nargs="+", required=True, help="LUT files or published names")
    p.add_argument("--alphas", type=_floats, default=[0.01, 0.02, 0.03, 0.04, 0.05], help="(default: 0.01:0.05:0.01)")
    p.add_argument("--trials", type=int, default=10000, help="frames per point (default: %(default)s)")
    p.add_argument("--iterations", type=int, default=100, help="decoder iterations (default: %(default)s)")
    p.add_argument("--codeword-mode", choices=["all_zero", "random_codeword"], default="all_zero",
                   help="(default: %(default)s)")
    p.add_argument("--no-early-stop", action="store_true", help="always run every iteration")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("validate-lut", help="check LUT files for symmetry and monotonicity")
    p.add_argument("paths", nargs="+")
    p.set_defaults(func=cmd_validate_lut, seed=seed)

    p = sub.add_parser("enumerate", help="count or write every valid rule over a small alphabet")
    p.add_argument("--s", type=int, default=1, help="alphabet half-width (default: %(default)s)")
    p.add_argument("--out-dir", default=None, help="write one .lut file per rule here")
    p.add_argument("--published", action="store_true", help="write the six published tables instead")
    p.set_defaults(func=cmd_enumerate, seed=seed)
    return parser


def main(argv=None) -> int:
    try:
        seed = _seed_default()
        args = build_parser(seed).parse_args(argv)
        return args.func(args)
    except UsageError as exc:
        print(f"faidlab: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (CandidateError, LutFormatError, ValueError, KeyError, OSError) as exc:
        print(f"faidlab: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
