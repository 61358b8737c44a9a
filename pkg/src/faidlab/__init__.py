"""Finite-alphabet iterative decoders on faulty hardware.

Density evolution with noisy message-passing units, functional thresholds,
robust rule selection and Monte Carlo simulation on finite LDPC codes.
"""

from .alphabet import (
    AppAlphabet,
    EnsembleSpec,
    MessageAlphabet,
    MessagePmf,
    NoiseModel,
    NoiseParams,
    channel_pmf,
    make_alphabet,
    make_app_alphabet,
)
from .codes import ParityCheckCode, generator_matrix, random_regular_code, read_alist, tanner_code, write_alist
from .de import DeResult, de_app_step, de_cnu_step, de_iterate, de_trajectory, de_vnu_step, prop1_lower_bound
from .decoder import DecoderSpec, Lut, make_decoder, read_lut, validate_lut, write_lut
from .designer import (
    CandidateSet,
    RobustnessRecord,
    enumerate_valid_luts,
    ingest_luts,
    noiseless_threshold,
    rank_candidates,
)
from .faults import TransitionMatrix, apply_noise, fd_matrix, make_rng, sample_noise, sp_matrix
from .sim import BerResult, CodewordMode, TrialConfig, ber_sweep, noisy_decode, run_ber
from .tables import all_published, published_lut
from .threshold import (
    PeCurve,
    ThresholdConfig,
    ThresholdReport,
    TransitionKind,
    functional_threshold,
    sample_pe_curve,
    target_ber_threshold,
    threshold_sweep,
    useful_region_bound,
)

__all__ = [
    "AppAlphabet",
    "BerResult",
    "CandidateSet",
    "CodewordMode",
    "DeResult",
    "DecoderSpec",
    "EnsembleSpec",
    "Lut",
    "MessageAlphabet",
    "MessagePmf",
    "NoiseModel",
    "NoiseParams",
    "ParityCheckCode",
    "PeCurve",
    "RobustnessRecord",
    "ThresholdConfig",
    "ThresholdReport",
    "TransitionKind",
    "TransitionMatrix",
    "TrialConfig",
    "all_published",
    "apply_noise",
    "ber_sweep",
    "channel_pmf",
    "de_app_step",
    "de_cnu_step",
    "de_iterate",
    "de_trajectory",
    "de_vnu_step",
    "enumerate_valid_luts",
    "fd_matrix",
    "functional_threshold",
    "generator_matrix",
    "ingest_luts",
    "make_alphabet",
    "make_app_alphabet",
    "make_decoder",
    "make_rng",
    "noiseless_threshold",
    "noisy_decode",
    "prop1_lower_bound",
    "published_lut",
    "random_regular_code",
    "rank_candidates",
    "read_alist",
    "read_lut",
    "run_ber",
    "sample_noise",
    "sample_pe_curve",
    "sp_matrix",
    "tanner_code",
    "target_ber_threshold",
    "threshold_sweep",
    "useful_region_bound",
    "validate_lut",
    "write_alist",
    "write_lut",
]
