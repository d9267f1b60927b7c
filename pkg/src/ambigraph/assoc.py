"""Ambiguity-aware nearest-neighbor association of detections to tracks.

Track k considers only detections from the matched filter steered at its
azimuth, with magnitude strictly above the threshold and inside its gate.
A unique such detection is assigned; none or several is an association
error for that track.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .gating import aa_gate_mask
from .graph import AmbiguityGraph
from .scene import Scene
from .waveform import Detection

__all__ = [
    "Assigned",
    "AssociationOutcome",
    "ErrorMultiple",
    "ErrorNone",
    "associate",
    "candidates",
]


@dataclass(frozen=True)
class Assigned:
    detection: Detection


@dataclass(frozen=True)
class ErrorNone:
    pass


@dataclass(frozen=True)
class ErrorMultiple:
    candidates: tuple[Detection, ...]


@dataclass(frozen=True)
class AssociationOutcome:
    """One result per track, in target order."""

    tracks: tuple

    @property
    def all_assigned(self) -> bool:
        return all(isinstance(r, Assigned) for r in self.tracks)

    def summary(self) -> list[str]:
        return [type(r).__name__ for r in self.tracks]

    def __getitem__(self, k):
        return self.tracks[k]

    def __len__(self):
        return len(self.tracks)


def candidates(
    detections: Sequence[Detection], k: int, scene: Scene, graph: AmbiguityGraph, threshold: float
) -> list[Detection]:
    """Detections eligible for track k, in input order."""
    own = [d for d in detections if d.filter_index == k and d.magnitude > threshold]
    if not own:
        return []
    points = np.array([[d.tau, d.omega] for d in own])
    mask = aa_gate_mask(points, k, graph, scene)
    return [d for d, keep in zip(own, mask) if keep]


def associate(
    detections: Sequence[Detection], scene: Scene, graph: AmbiguityGraph, threshold: float = 0.0
) -> AssociationOutcome:
    """Assign each track its unique in-gate detection or report an error.

    Work is O(K * D * K) for D detections: each gate test compares one
    density against up to K - 1 competitors.
    """
    if threshold < 0:
        raise ValueError("threshold must be non-negative")
    K = scene.n_targets
    if graph.n_vertices != K:
        raise ValueError("graph and scene disagree on the number of targets")
    for d in detections:
        if not 0 <= d.filter_index < K:
            raise ValueError(f"detection filter index {d.filter_index} out of range")
    results = []
    for k in range(K):
        cand = candidates(detections, k, scene, graph, threshold)
        if not cand:
            results.append(ErrorNone())
        elif len(cand) == 1:
            results.append(Assigned(cand[0]))
        else:
            results.append(ErrorMultiple(tuple(cand)))
    return AssociationOutcome(tuple(results))
