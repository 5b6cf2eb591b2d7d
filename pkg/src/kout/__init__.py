"""Uniform random k-out digraphs: sampling, exact decomposition, and Monte
Carlo verification of their limit laws against exactly solved constants."""

from .constants import ModelConstants, derive_constants, f_func, g_func, h_func, solve_tau
from .decompose import Decomposition, condense, decompose, giant, layers, one_in_core, scc
from .digraph import (
    KOutDigraph,
    RngSpec,
    count_multi_pairs,
    count_self_loops,
    deserialize,
    generate,
    generate_simple,
    is_simple,
    serialize,
)
from .distance import DistanceSample, PhasePoint, is_strongly_connected, phase_sweep, typical_distance
from .harness import ExperimentConfig, ReplicateRecord, SummaryReport, run_experiment, run_replicate, summarize
from .outside import OutsideReport, OutsideView, outside_report, outside_view
from .surjection import SurjectionSample, sample_surjection

__all__ = [
    "ModelConstants",
    "derive_constants",
    "solve_tau",
    "f_func",
    "g_func",
    "h_func",
    "KOutDigraph",
    "RngSpec",
    "generate",
    "generate_simple",
    "count_self_loops",
    "count_multi_pairs",
    "is_simple",
    "serialize",
    "deserialize",
    "Decomposition",
    "scc",
    "condense",
    "giant",
    "one_in_core",
    "layers",
    "decompose",
    "OutsideView",
    "OutsideReport",
    "outside_view",
    "outside_report",
    "DistanceSample",
    "PhasePoint",
    "typical_distance",
    "is_strongly_connected",
    "phase_sweep",
    "SurjectionSample",
    "sample_surjection",
    "ExperimentConfig",
    "ReplicateRecord",
    "SummaryReport",
    "run_replicate",
    "run_experiment",
    "summarize",
]

__version__ = "0.1.0"
