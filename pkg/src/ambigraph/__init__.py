"""Ambiguity-aware transmit beamforming for multi-target radar tracking."""

from .assoc import Assigned, AssociationOutcome, ErrorMultiple, ErrorNone, associate
from .beamform import (
    BeamformOptions,
    BeamformResult,
    friedlander_solution,
    identifiability,
    solve,
    two_coloring_solution,
)
from .gating import ConfusionTable, aa_gate_mask, confusion_prob, confusion_table, in_aa_gate
from .graph import AmbiguityGraph, enumerate_graphs, from_gates, standard_graph, threshold_graph
from .scene import AntennaArray, Scene, Target, uniform_scene
from .tradeoff import TradeoffOptions, TradeoffPoint, bound_C, estimate_C, exhaustive, pareto_filter, sweep
from .waveform import condbt_check, detect, generate, matched_filter_sim, verify_theorem1

__version__ = "0.1.0"

__all__ = [
    "AmbiguityGraph",
    "AntennaArray",
    "Assigned",
    "AssociationOutcome",
    "BeamformOptions",
    "BeamformResult",
    "ConfusionTable",
    "ErrorMultiple",
    "ErrorNone",
    "Scene",
    "Target",
    "TradeoffOptions",
    "TradeoffPoint",
    "aa_gate_mask",
    "associate",
    "bound_C",
    "condbt_check",
    "confusion_prob",
    "confusion_table",
    "detect",
    "enumerate_graphs",
    "estimate_C",
    "exhaustive",
    "friedlander_solution",
    "from_gates",
    "generate",
    "identifiability",
    "in_aa_gate",
    "matched_filter_sim",
    "pareto_filter",
    "solve",
    "standard_graph",
    "sweep",
    "threshold_graph",
    "two_coloring_solution",
    "uniform_scene",
    "verify_theorem1",
]
