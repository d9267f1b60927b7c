"""Gates over the (delay, Doppler) plane and pairwise confusion probabilities."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import ndtr

from .graph import AmbiguityGraph
from .scene import Scene, Target

__all__ = [
    "ClosedFormUnavailable",
    "ConfusionTable",
    "RectGate",
    "aa_gate_mask",
    "confusion_prob",
    "confusion_table",
    "in_aa_gate",
    "in_pairwise_set",
    "rect_gate",
]

DEFAULT_MC_SAMPLES = 100_000
MC_CHUNK = 1 << 16


class ClosedFormUnavailable(ValueError):
    """The analytic confusion probability needs both priors to share a covariance."""


@dataclass(frozen=True)
class RectGate:
    tau_lo: float
    tau_hi: float
    omega_lo: float
    omega_hi: float

    def __post_init__(self):
        if self.tau_lo > self.tau_hi or self.omega_lo > self.omega_hi:
            raise ValueError("gate bounds must satisfy lo <= hi")

    def contains(self, point) -> bool:
        tau, omega = point
        return self.tau_lo <= tau <= self.tau_hi and self.omega_lo <= omega <= self.omega_hi


def rect_gate(target: Target, n_sigma: float = 3.0) -> RectGate:
    """Rectangle spanning the prior mean +- ``n_sigma`` standard deviations."""
    if n_sigma < 0:
        raise ValueError("n_sigma must be non-negative")
    dt, dw = n_sigma * target.tau_std, n_sigma * target.omega_std
    return RectGate(target.tau_mean - dt, target.tau_mean + dt, target.omega_mean - dw, target.omega_mean + dw)


def in_pairwise_set(point, k: int, kprime: int, scene: Scene) -> bool:
    """True iff target k's prior density strictly exceeds k''s at ``point``."""
    if k == kprime:
        raise ValueError("k and kprime must differ")
    logf = scene.log_densities(point)
    return bool(logf[k] > logf[kprime])


def aa_gate_mask(points, k: int, graph: AmbiguityGraph, scene: Scene) -> np.ndarray:
    """Vectorized ambiguity-aware gate test for ``points`` of shape (..., 2).

    A point is in gate k when f_k beats every target that is neither k nor a
    neighbor of k. With no such competitor the gate is the whole plane.
    """
    if graph.n_vertices != scene.n_targets:
        raise ValueError("graph and scene disagree on the number of targets")
    logf = scene.log_densities(points)
    rivals = graph.non_neighbors(k)
    if not rivals:
        return np.ones(logf.shape[:-1], dtype=bool)
    return logf[..., k] > logf[..., rivals].max(axis=-1)


def in_aa_gate(point, k: int, graph: AmbiguityGraph, scene: Scene) -> bool:
    return bool(aa_gate_mask(np.asarray(point, dtype=float), k, graph, scene))


def _shared_covariance(a: Target, b: Target) -> bool:
    return np.allclose(a.std, b.std, rtol=1e-12, atol=0.0)


def confusion_prob(
    k: int,
    kprime: int,
    scene: Scene,
    method: str = "analytic",
    n_samples: int = DEFAULT_MC_SAMPLES,
    seed: int = 0,
) -> tuple[float, float]:
    """Probability that target k's parameters land where f_k > f_k'.

    Returns ``(probability, stderr)``. The analytic route gives Phi(d/2), d the
    Mahalanobis distance between the means, and requires a shared covariance;
    its stderr is 0. The Monte-Carlo route draws from target k's prior with a
    stream keyed on (seed, k, kprime).
    """
    if k == kprime:
        raise ValueError("k and kprime must differ")
    tk, tj = scene.targets[k], scene.targets[kprime]
    if method == "analytic":
        if not _shared_covariance(tk, tj):
            raise ClosedFormUnavailable(
                f"targets {k} and {kprime} have different prior covariances; use method='monte-carlo'"
            )
        d = np.linalg.norm((tk.mean - tj.mean) / tk.std)
        return float(ndtr(d / 2)), 0.0
    if method != "monte-carlo":
        raise ValueError(f"unknown method {method!r}")
    if n_samples < 1:
        raise ValueError("n_samples must be positive")

    n_chunks = -(-n_samples // MC_CHUNK)
    streams = np.random.SeedSequence([seed, k, kprime]).spawn(n_chunks)
    hits = 0
    for i, ss in enumerate(streams):
        m = min(MC_CHUNK, n_samples - i * MC_CHUNK)
        x = tk.sample(np.random.default_rng(ss), m)
        hits += int(np.count_nonzero(tk.log_density(x) > tj.log_density(x)))
    p = hits / n_samples
    return p, float(np.sqrt(p * (1 - p) / n_samples))


@dataclass(frozen=True)
class ConfusionTable:
    """K x K pairwise probabilities; the diagonal is NaN."""

    p: np.ndarray
    stderr: np.ndarray
    method: str

    @property
    def n_targets(self) -> int:
        return self.p.shape[0]

    def __getitem__(self, idx):
        return self.p[idx]


def confusion_table(
    scene: Scene,
    method: str = "auto",
    n_samples: int = DEFAULT_MC_SAMPLES,
    seed: int = 0,
) -> ConfusionTable:
    """Evaluate :func:`confusion_prob` for every ordered pair.

    ``method="auto"`` uses the closed form where the two priors share a
    covariance and Monte-Carlo otherwise.
    """
    K = scene.n_targets
    p = np.full((K, K), np.nan)
    se = np.full((K, K), np.nan)
    used = set()
    for i in range(K):
        for j in range(K):
            if i == j:
                continue
            m = method
            if m == "auto":
                shared = _shared_covariance(scene.targets[i], scene.targets[j])
                m = "analytic" if shared else "monte-carlo"
            p[i, j], se[i, j] = confusion_prob(i, j, scene, m, n_samples, seed)
            used.add(m)
    label = used.pop() if len(used) == 1 else ("mixed" if used else method)
    return ConfusionTable(p, se, label)
