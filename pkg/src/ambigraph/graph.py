"""Ambiguity graphs: construction from gates, threshold graphs, enumeration.

A graph on K targets is stored as a bitset over the upper-triangular pairs
(0,1), (0,2), ..., (0,K-1), (1,2), ..., so graphs hash and compare by value.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Iterator

import numpy as np

__all__ = [
    "AmbiguityGraph",
    "MAX_ENUMERATION_PAIRS",
    "enumerate_graphs",
    "from_gates",
    "gamma_breakpoints",
    "standard_graph",
    "threshold_graph",
]

MAX_ENUMERATION_PAIRS = 25


def _pairs(n: int) -> list[tuple[int, int]]:
    return [(i, j) for i in range(n) for j in range(i + 1, n)]


@dataclass(frozen=True)
class AmbiguityGraph:
    """Undirected, loop-free graph on ``n_vertices`` targets.

    An edge (k, k') means the priors cannot separate the two targets, so the
    beamformer must not illuminate them simultaneously.
    """

    n_vertices: int
    code: int = 0

    def __post_init__(self):
        if self.n_vertices < 1:
            raise ValueError("a graph needs at least one vertex")
        m = self.n_vertices * (self.n_vertices - 1) // 2
        if not 0 <= self.code < (1 << m):
            raise ValueError(f"edge code {self.code} out of range for {self.n_vertices} vertices")

    @classmethod
    def from_edges(cls, n_vertices: int, edges: Iterable[tuple[int, int]]) -> "AmbiguityGraph":
        index = {p: b for b, p in enumerate(_pairs(n_vertices))}
        code = 0
        for i, j in edges:
            if i == j:
                raise ValueError(f"self-loop at vertex {i}")
            key = (min(i, j), max(i, j))
            if key not in index:
                raise ValueError(f"edge {key} out of range for {n_vertices} vertices")
            code |= 1 << index[key]
        return cls(n_vertices, code)

    @classmethod
    def from_adjacency(cls, adjacency) -> "AmbiguityGraph":
        adj = np.asarray(adjacency, dtype=bool)
        if adj.ndim != 2 or adj.shape[0] != adj.shape[1]:
            raise ValueError("adjacency must be square")
        if np.any(adj != adj.T):
            raise ValueError("adjacency must be symmetric")
        if np.any(np.diag(adj)):
            raise ValueError("adjacency must have an empty diagonal")
        n = adj.shape[0]
        return cls.from_edges(n, [(i, j) for i, j in _pairs(n) if adj[i, j]])

    @classmethod
    def parse(cls, n_vertices: int, text: str) -> "AmbiguityGraph":
        """Inverse of :meth:`to_text`."""
        edges = []
        for item in text.replace(";", ",").split(","):
            item = item.strip()
            if item:
                i, j = item.split("-")
                edges.append((int(i), int(j)))
        return cls.from_edges(n_vertices, edges)

    @cached_property
    def edges(self) -> tuple[tuple[int, int], ...]:
        return tuple(p for b, p in enumerate(_pairs(self.n_vertices)) if self.code >> b & 1)

    @cached_property
    def adjacency(self) -> np.ndarray:
        adj = np.zeros((self.n_vertices, self.n_vertices), dtype=bool)
        for i, j in self.edges:
            adj[i, j] = adj[j, i] = True
        adj.setflags(write=False)
        return adj

    @property
    def n_edges(self) -> int:
        return bin(self.code).count("1")

    def neighbors(self, k: int) -> frozenset[int]:
        return frozenset(np.flatnonzero(self.adjacency[k]).tolist())

    def non_neighbors(self, k: int) -> list[int]:
        """Competitors of target k in its gate: every k' != k outside E_k."""
        return [j for j in range(self.n_vertices) if j != k and not self.adjacency[k, j]]

    def is_subgraph_of(self, other: "AmbiguityGraph") -> bool:
        return self.n_vertices == other.n_vertices and self.code & ~other.code == 0

    def with_edges(self, edges: Iterable[tuple[int, int]]) -> "AmbiguityGraph":
        return AmbiguityGraph(self.n_vertices, self.code | AmbiguityGraph.from_edges(self.n_vertices, edges).code)

    def to_text(self) -> str:
        """Sorted 0-based edge list, e.g. ``"0-1,1-2"``."""
        return ",".join(f"{i}-{j}" for i, j in self.edges)

    def __repr__(self):
        return f"AmbiguityGraph(n_vertices={self.n_vertices}, edges=[{self.to_text()}])"


def standard_graph(n_vertices: int, kind: str) -> AmbiguityGraph:
    """``complete``, ``empty`` or ``path`` (edges between k and k+1)."""
    if n_vertices < 1:
        raise ValueError("n_vertices must be >= 1")
    if kind == "complete":
        return AmbiguityGraph(n_vertices, (1 << n_vertices * (n_vertices - 1) // 2) - 1)
    if kind == "empty":
        return AmbiguityGraph(n_vertices, 0)
    if kind == "path":
        return AmbiguityGraph.from_edges(n_vertices, [(k, k + 1) for k in range(n_vertices - 1)])
    raise ValueError(f"unknown graph kind {kind!r}")


def from_gates(gates) -> AmbiguityGraph:
    """Edge (k, k') iff the closed rectangular gates of k and k' intersect."""
    gates = list(gates)
    n = len(gates)
    edges = [
        (i, j)
        for i, j in _pairs(n)
        if gates[i].tau_lo <= gates[j].tau_hi
        and gates[j].tau_lo <= gates[i].tau_hi
        and gates[i].omega_lo <= gates[j].omega_hi
        and gates[j].omega_lo <= gates[i].omega_hi
    ]
    return AmbiguityGraph.from_edges(n, edges)


def _probabilities(table) -> np.ndarray:
    return np.asarray(getattr(table, "p", table), dtype=float)


def threshold_graph(table, gamma: float) -> AmbiguityGraph:
    """Graph whose edges are the pairs that are hard to separate at level gamma.

    ``table[k, k']`` is the probability that target k's parameters are more
    likely under its own prior than under k''s. The per-target edge sets
    {k' : table[k, k'] <= gamma} are symmetrized by union, so an edge is
    present if either direction falls at or below ``gamma``.
    """
    p = _probabilities(table)
    n = p.shape[0]
    hit = p <= gamma
    return AmbiguityGraph.from_edges(n, [(i, j) for i, j in _pairs(n) if hit[i, j] or hit[j, i]])


def gamma_breakpoints(table) -> list[float]:
    """Sorted distinct off-diagonal entries of a confusion table.

    Sweeping gamma over these values (plus 0) visits every distinct threshold
    graph.
    """
    p = _probabilities(table)
    off = p[~np.eye(p.shape[0], dtype=bool)]
    return sorted(set(off.tolist()))


def enumerate_graphs(n_vertices: int) -> Iterator[AmbiguityGraph]:
    """All 2**(K(K-1)/2) labeled graphs on ``n_vertices`` vertices."""
    m = n_vertices * (n_vertices - 1) // 2
    if m > MAX_ENUMERATION_PAIRS:
        raise ValueError(
            f"{n_vertices} vertices give 2**{m} graphs; enumeration is limited to "
            f"{MAX_ENUMERATION_PAIRS} vertex pairs"
        )
    for code in range(1 << m):
        yield AmbiguityGraph(n_vertices, code)
