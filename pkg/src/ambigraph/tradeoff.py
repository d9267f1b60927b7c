"""Detection-association trade-off over ambiguity graphs.

Every graph G yields a point (P(G), C(G)): the optimal worst-case transmit
power gain and the probability that all targets fall inside their own
ambiguity-aware gates. Adding edges lowers P and raises C. The threshold
sweep picks a handful of graphs; exhaustive enumeration provides the full
cloud to compare against.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .beamform import INFEASIBLE, BeamformOptions, solve, to_db
from .gating import DEFAULT_MC_SAMPLES, MC_CHUNK, confusion_table
from .graph import AmbiguityGraph, enumerate_graphs, gamma_breakpoints, standard_graph, threshold_graph
from .scene import Scene

__all__ = [
    "MIN_SAMPLES",
    "TradeoffOptions",
    "TradeoffPoint",
    "bound_C",
    "concave_envelope",
    "dominates",
    "endpoint_graphs",
    "estimate_C",
    "evaluate",
    "exhaustive",
    "pareto_filter",
    "sweep",
]

MIN_SAMPLES = 1000
MAX_DEFAULT_K = 5
MAX_LONG_RUN_K = 6


@dataclass(frozen=True)
class TradeoffPoint:
    graph: AmbiguityGraph
    power_gain: float  # 0.0 when the beamforming problem is infeasible
    assoc_prob: float
    stderr: float
    status: str
    gamma: float | None = None

    @property
    def power_gain_db(self) -> float:
        return float(to_db(self.power_gain)) if self.power_gain > 0 else float("-inf")

    @property
    def infeasible(self) -> bool:
        return self.status == INFEASIBLE


@dataclass
class TradeoffOptions:
    n_samples: int = DEFAULT_MC_SAMPLES
    seed: int = 0
    beamform: BeamformOptions = field(default_factory=BeamformOptions)
    table_method: str = "auto"
    n_jobs: int = 1


def estimate_C(scene: Scene, graph: AmbiguityGraph, n_samples: int = DEFAULT_MC_SAMPLES, seed: int = 0):
    """Monte-Carlo probability that every target lies in its own gate.

    Returns ``(C, stderr)``. The draws depend only on ``scene`` and ``seed``,
    so estimates for different graphs share random numbers and compare
    without extra noise.
    """
    if n_samples < MIN_SAMPLES:
        raise ValueError(f"n_samples must be >= {MIN_SAMPLES}")
    if graph.n_vertices != scene.n_targets:
        raise ValueError("graph and scene disagree on the number of targets")
    K = scene.n_targets
    means, stds = scene.means, scene.stds
    rivals = [graph.non_neighbors(k) for k in range(K)]
    n_chunks = -(-n_samples // MC_CHUNK)
    hits = 0
    for i, ss in enumerate(np.random.SeedSequence(seed).spawn(n_chunks)):
        m = min(MC_CHUNK, n_samples - i * MC_CHUNK)
        pts = means + stds * np.random.default_rng(ss).standard_normal((m, K, 2))
        ok = np.ones(m, dtype=bool)
        for k in range(K):
            if not rivals[k]:
                continue
            logf = scene.log_densities(pts[:, k, :])
            ok &= logf[:, k] > logf[:, rivals[k]].max(axis=1)
        hits += int(np.count_nonzero(ok))
    c = hits / n_samples
    return c, float(np.sqrt(c * (1 - c) / n_samples))


def bound_C(scene: Scene, graph: AmbiguityGraph, table) -> float:
    """Union lower bound 1 - K^2 max_{non-edges} P(not in S_{k,k'}), clipped below at 1 - K^2."""
    K = scene.n_targets
    p = np.asarray(getattr(table, "p", table), dtype=float)
    miss = [1 - p[i, j] for i in range(K) for j in range(K) if i != j and not graph.adjacency[i, j]]
    worst = max(miss, default=0.0)
    return float(np.clip(1 - K * K * worst, 1 - K * K, 1.0))


def evaluate(scene: Scene, graph: AmbiguityGraph, options: TradeoffOptions | None = None, gamma=None):
    opts = options or TradeoffOptions()
    res = solve(scene, graph, opts.beamform)
    c, se = estimate_C(scene, graph, opts.n_samples, opts.seed)
    power = res.objective if res.status != INFEASIBLE else 0.0
    return TradeoffPoint(graph, float(power), c, se, res.status, gamma)


def _evaluate_args(args):
    return evaluate(*args)


def _evaluate_many(scene, graphs, gammas, opts):
    jobs = [(scene, g, opts, gm) for g, gm in zip(graphs, gammas)]
    if opts.n_jobs == 1 or len(jobs) < 2:
        return [_evaluate_args(j) for j in jobs]
    with ProcessPoolExecutor(max_workers=opts.n_jobs) as pool:
        return list(pool.map(_evaluate_args, jobs))


def sweep(scene: Scene, options: TradeoffOptions | None = None) -> list[TradeoffPoint]:
    """Threshold-graph heuristic: one point per distinct graph as gamma runs from 0 to 1.

    Each point records the smallest gamma that produced its graph.
    """
    opts = options or TradeoffOptions()
    table = confusion_table(scene, opts.table_method, max(opts.n_samples, MIN_SAMPLES), opts.seed)
    gammas = sorted({0.0, *gamma_breakpoints(table), 1.0})
    graphs, first_gamma = [], []
    for g in gammas:
        graph = threshold_graph(table, g)
        if graph not in graphs:
            graphs.append(graph)
            first_gamma.append(g)
    return _evaluate_many(scene, graphs, first_gamma, opts)


def exhaustive(scene: Scene, options: TradeoffOptions | None = None, long_run: bool = False) -> list[TradeoffPoint]:
    """One point for every labeled graph on the scene's targets."""
    opts = options or TradeoffOptions()
    K = scene.n_targets
    limit = MAX_LONG_RUN_K if long_run else MAX_DEFAULT_K
    if K > limit:
        hint = "" if long_run else "; pass long_run=True to allow K = 6"
        raise ValueError(f"exhaustive enumeration supports K <= {limit}{hint}")
    graphs = list(enumerate_graphs(K))
    return _evaluate_many(scene, graphs, [None] * len(graphs), opts)


def dominates(a: TradeoffPoint, b: TradeoffPoint) -> bool:
    """a is at least as good as b in both P and C, and strictly better in one."""
    return (
        a.power_gain >= b.power_gain
        and a.assoc_prob >= b.assoc_prob
        and (a.power_gain > b.power_gain or a.assoc_prob > b.assoc_prob)
    )


def pareto_filter(points) -> list[TradeoffPoint]:
    """Points not dominated by any other, in input order; exact ties are all kept."""
    points = list(points)
    return [p for p in points if not any(dominates(q, p) for q in points)]


def concave_envelope(points) -> list[TradeoffPoint]:
    """Vertices of the upper concave envelope of the (P, C) cloud, by increasing P.

    Time sharing between two beamformers reaches any point on the segment
    joining them, so this is the achievable frontier under time sharing.
    """
    pts = sorted(pareto_filter(points), key=lambda p: (p.power_gain, -p.assoc_prob))
    hull: list[TradeoffPoint] = []
    for p in pts:
        while len(hull) >= 2:
            a, b = hull[-2], hull[-1]
            cross = (b.power_gain - a.power_gain) * (p.assoc_prob - a.assoc_prob) - (
                b.assoc_prob - a.assoc_prob
            ) * (p.power_gain - a.power_gain)
            if cross >= 0:
                hull.pop()
            else:
                break
        hull.append(p)
    return hull


def endpoint_graphs(n_targets: int) -> tuple[AmbiguityGraph, AmbiguityGraph]:
    """(empty, complete): the gamma = 0 and gamma = 1 ends of the sweep."""
    return standard_graph(n_targets, "empty"), standard_graph(n_targets, "complete")
