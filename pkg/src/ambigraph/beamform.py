"""Ambiguity-aware transmit beamforming.

The optimal beamformer maximizes the worst-case transmit power gain
a_k^H R a_k over the targets while zero-forcing a_k^H R a_k' for every edge
of the ambiguity graph, subject to tr(R) = 1 and R >= 0. Closed-form
constructions for complete graphs (K = N) and path graphs (two-coloring)
serve as feasible reference points.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import sdp
from .graph import AmbiguityGraph, standard_graph
from .scene import Scene, steering_matrix, uniform_scene

__all__ = [
    "BeamformOptions",
    "BeamformResult",
    "BeamformingMatrix",
    "IdentifiabilityReport",
    "SubspaceDecomposition",
    "beam_pattern",
    "complement_basis",
    "constraint_residuals",
    "factor",
    "friedlander_solution",
    "gains",
    "identifiability",
    "solve",
    "subspace_decomposition",
    "to_db",
    "two_coloring_solution",
    "zero_forcing_gap",
]

OPTIMAL = "optimal"
FEASIBLE = "feasible"
INFEASIBLE = "infeasible"
NUMERICAL_FAILURE = "numerical-failure"

# An SVD-based null space keeps directions whose singular value is below this
# fraction of the largest one.
NULL_RTOL = 1e-10


def to_db(x):
    return 10 * np.log10(x)


@dataclass(frozen=True)
class BeamformingMatrix:
    """Transmit covariance R = W W^H with unit trace, and its worst-case gain."""

    entries: np.ndarray
    power_gain: float

    @property
    def n_antennas(self) -> int:
        return self.entries.shape[0]


@dataclass
class BeamformOptions:
    """Solver options.

    ``interference_bound`` relaxes zero-forcing to |a_k^H R a_k'| <= bound.
    A result counts as a solution only if its worst-case gain exceeds
    ``feasibility_tol`` and the KKT residual is below ``kkt_tol``.
    """

    interference_bound: float = 0.0
    feasibility_tol: float = 1e-6
    kkt_tol: float = 1e-6
    backend: str = "cvxopt"
    backend_options: dict = field(default_factory=dict)


@dataclass
class BeamformResult:
    matrix: BeamformingMatrix | None
    status: str
    objective: float
    kkt_residual: float = float("nan")
    residuals: dict = field(default_factory=dict)
    backend_status: str = ""

    @property
    def objective_db(self) -> float:
        return float(to_db(self.objective)) if self.objective > 0 else float("-inf")

    @property
    def R(self) -> np.ndarray | None:
        return None if self.matrix is None else self.matrix.entries


@dataclass
class SubspaceDecomposition:
    """Per-target bases: U_k orthogonal to the neighbors' steering vectors,
    V_k orthogonal to a_k itself."""

    U: list[np.ndarray]
    V: list[np.ndarray]


@dataclass
class IdentifiabilityReport:
    """Outcome of an identifiability scan over K = 1, 2, ...

    ``k_star_feasible`` is the largest K whose zero-forcing constraints admit
    a unit-trace PSD R at all; ``k_star_positive`` is the largest K whose
    optimal worst-case gain exceeds the feasibility tolerance. ``k_star``
    follows the criterion the scan was run with.
    """

    n_antennas: int
    family: str
    criterion: str
    k_star: int
    k_star_feasible: int
    k_star_positive: int
    objectives: dict[int, float]
    statuses: dict[int, str]
    zf_gaps: dict[int, float]


def gains(R: np.ndarray, A: np.ndarray) -> np.ndarray:
    """a_k^H R a_k for every column a_k of A."""
    return np.einsum("nk,nm,mk->k", A.conj(), R, A).real


def complement_basis(vectors, n: int | None = None, rtol: float = 1e-9) -> np.ndarray:
    """Orthonormal basis of the orthogonal complement of span(vectors).

    Returns an N x (N - r) matrix, r the numerical rank of the span; the
    matrix has zero columns when the vectors span C^N.
    """
    vecs = [np.asarray(v, dtype=complex) for v in vectors]
    if n is None:
        if not vecs:
            raise ValueError("dimension n is required when no vectors are given")
        n = vecs[0].shape[0]
    if not vecs:
        return np.eye(n, dtype=complex)
    M = np.column_stack(vecs)
    U, s, _ = np.linalg.svd(M, full_matrices=True)
    r = int(np.sum(s > rtol * s[0])) if s.size and s[0] > 0 else 0
    return U[:, r:]


def subspace_decomposition(scene: Scene, graph: AmbiguityGraph) -> SubspaceDecomposition:
    A = scene.steering_matrix()
    N = scene.n_antennas
    U = [complement_basis([A[:, j] for j in sorted(graph.neighbors(k))], N) for k in range(scene.n_targets)]
    V = [complement_basis([A[:, k]], N) for k in range(scene.n_targets)]
    return SubspaceDecomposition(U, V)


def constraint_residuals(R: np.ndarray, scene: Scene, graph: AmbiguityGraph) -> dict:
    A = scene.steering_matrix()
    cross = [abs(A[:, i].conj() @ R @ A[:, j]) for i, j in graph.edges]
    return {
        "cross_max": max(cross, default=0.0),
        "trace": abs(np.trace(R).real - 1.0),
        "hermitian": float(np.max(np.abs(R - R.conj().T))),
        "min_eig": float(np.linalg.eigvalsh(0.5 * (R + R.conj().T))[0]),
    }


def _cone_program(scene: Scene, graph: AmbiguityGraph, bound: float):
    N = scene.n_antennas
    A = scene.steering_matrix()
    basis = sdp.hermitian_basis(N)
    # coefficient of x_i in a_k^H B_i a_j, shape (E, N*N)
    cross = np.array([np.einsum("n,inm,m->i", A[:, i].conj(), basis, A[:, j]) for i, j in graph.edges])
    socs = np.zeros((0, 2, N * N))
    if graph.edges and bound == 0:
        # eliminate the zero-forcing equalities: restrict R to their null space
        C = np.vstack([cross.real, cross.imag])
        _, s, vt = np.linalg.svd(C)
        r = int(np.sum(s > NULL_RTOL * s[0]))
        basis = np.tensordot(vt[r:], basis, axes=1)
    elif graph.edges:
        socs = np.stack([cross.real, cross.imag], axis=1)
    if basis.shape[0] == 0:
        return None, basis
    prog = sdp.ConeProgram(
        gains=np.einsum("nk,inm,mk->ki", A.conj(), basis, A).real,
        trace=np.einsum("inn->i", basis).real,
        lmi=sdp.real_embedding(basis),
        socs=socs,
        bound=bound,
    )
    return prog, basis


def solve(scene: Scene, graph: AmbiguityGraph, options: BeamformOptions | None = None) -> BeamformResult:
    """Optimal ambiguity-aware beamformer for ``graph``.

    Status is ``optimal`` only when the independent KKT residual is below
    ``options.kkt_tol`` and every constraint residual is within tolerance;
    ``infeasible`` when no unit-trace PSD R achieves a worst-case gain above
    ``options.feasibility_tol``.
    """
    opts = options or BeamformOptions()
    if graph.n_vertices != scene.n_targets:
        raise ValueError("graph and scene disagree on the number of targets")
    if opts.interference_bound < 0:
        raise ValueError("interference_bound must be non-negative")

    prog, basis = _cone_program(scene, graph, opts.interference_bound)
    if prog is None:
        return BeamformResult(None, INFEASIBLE, 0.0, backend_status="empty feasible subspace")
    sol = sdp.solve_cone_program(prog, opts.backend, **opts.backend_options)
    if sol.status == "infeasible":
        return BeamformResult(None, INFEASIBLE, 0.0, backend_status=sol.backend_status)
    if sol.x is None:
        return BeamformResult(None, NUMERICAL_FAILURE, float("nan"), backend_status=sol.backend_status)

    kkt = sdp.kkt_residual(prog, sol)
    R = np.tensordot(sol.x, basis, axes=1)
    R = 0.5 * (R + R.conj().T)
    A = scene.steering_matrix()
    objective = float(np.min(gains(R, A)))
    residuals = constraint_residuals(R, scene, graph)

    # the dual value bounds the optimum from above
    dual_bound = sol.nu + opts.interference_bound * (
        float(np.sum(sol.soc_duals[:, 0])) if sol.soc_duals is not None and len(sol.soc_duals) else 0.0
    )
    if kkt <= opts.kkt_tol and dual_bound <= opts.feasibility_tol:
        return BeamformResult(None, INFEASIBLE, 0.0, kkt, residuals, sol.backend_status)

    ok = (
        kkt <= opts.kkt_tol
        and residuals["cross_max"] <= opts.interference_bound + 1e-7
        and residuals["trace"] <= 1e-8
        and residuals["min_eig"] >= -1e-8
        and abs(objective - sol.t) <= 1e-6
    )
    if not ok:
        return BeamformResult(
            BeamformingMatrix(R, objective), NUMERICAL_FAILURE, objective, kkt, residuals, sol.backend_status
        )
    if objective <= opts.feasibility_tol:
        return BeamformResult(None, INFEASIBLE, 0.0, kkt, residuals, sol.backend_status)
    return BeamformResult(BeamformingMatrix(R, objective), OPTIMAL, objective, kkt, residuals, sol.backend_status)


def _constructed(R: np.ndarray, scene: Scene, graph: AmbiguityGraph) -> BeamformResult:
    objective = float(np.min(gains(R, scene.steering_matrix())))
    return BeamformResult(
        BeamformingMatrix(R, objective), FEASIBLE, objective, residuals=constraint_residuals(R, scene, graph)
    )


def friedlander_solution(scene: Scene) -> BeamformResult:
    """Complete-graph construction for K = N with equal weights.

    R = (1/K) sum_k u_k u_k^H, where u_k is the unit vector orthogonal to every
    other target's steering vector.
    """
    N, K = scene.n_antennas, scene.n_targets
    if K != N:
        raise ValueError(f"construction needs K == N, got K={K}, N={N}")
    A = scene.steering_matrix()
    if np.linalg.matrix_rank(A) < N:
        raise ValueError("steering matrix is rank deficient")
    R = np.zeros((N, N), dtype=complex)
    for k in range(K):
        u = complement_basis([A[:, j] for j in range(K) if j != k], N)
        R += u @ u.conj().T
    return _constructed(R / K, scene, standard_graph(K, "complete"))


def two_coloring_solution(scene: Scene) -> BeamformResult:
    """Path-graph construction for even K <= 2N - 2.

    Even- and odd-indexed targets form the two color classes; each class gets
    the projector onto the complement of its own steering vectors, and the two
    projectors are mixed with weight 1/(2N - K).
    """
    N, K = scene.n_antennas, scene.n_targets
    if K % 2:
        raise ValueError(f"two-coloring construction needs an even number of targets, got {K}")
    if N - K // 2 < 1:
        raise ValueError(f"two-coloring construction needs K <= 2N - 2, got K={K}, N={N}")
    A = scene.steering_matrix()
    U1 = complement_basis([A[:, k] for k in range(0, K, 2)], N)
    U2 = complement_basis([A[:, k] for k in range(1, K, 2)], N)
    R = (U1 @ U1.conj().T + U2 @ U2.conj().T) / (2 * N - K)
    return _constructed(R, scene, standard_graph(K, "path"))


def factor(R) -> np.ndarray:
    """W with W W^H = R, from an eigendecomposition with negative eigenvalues clipped."""
    entries = getattr(R, "entries", R)
    w, V = np.linalg.eigh(0.5 * (entries + entries.conj().T))
    return V * np.sqrt(np.clip(w, 0.0, None))


def beam_pattern(R, scene: Scene, k: int, grid) -> np.ndarray:
    """|a^H(theta_k) R a(theta)| over the azimuths in ``grid``."""
    entries = getattr(R, "entries", R)
    grid = np.atleast_1d(np.asarray(grid, dtype=float))
    if grid.size == 0:
        raise ValueError("azimuth grid is empty")
    ak = scene.steering_matrix()[:, k]
    return np.abs(ak.conj() @ entries @ steering_matrix(scene.array, grid))


def zero_forcing_gap(scene: Scene, graph: AmbiguityGraph) -> float:
    """Smallest achievable max_{edges} |a_k^H R a_k'| over unit-trace PSD R.

    Zero (to solver precision) exactly when the beamforming problem has a
    feasible point, whatever the resulting gains.
    """
    if not graph.edges:
        return 0.0
    N = scene.n_antennas
    A = scene.steering_matrix()
    basis = sdp.hermitian_basis(N)
    cross = np.array([np.einsum("n,inm,m->i", A[:, i].conj(), basis, A[:, j]) for i, j in graph.edges])
    value, _ = sdp.min_cap(
        np.stack([cross.real, cross.imag], axis=1),
        np.einsum("inn->i", basis).real,
        sdp.real_embedding(basis),
    )
    return value


def identifiability(
    n_antennas: int,
    family: str,
    k_max: int,
    options: BeamformOptions | None = None,
    criterion: str = "feasible",
    zf_tol: float = 1e-6,
) -> IdentifiabilityReport:
    """Largest K <= k_max for which the uniform scene is identifiable.

    ``criterion="feasible"`` asks only that the beamforming problem have a
    solution (its constraint set is nonempty, judged by
    :func:`zero_forcing_gap` <= ``zf_tol``); ``criterion="positive-gain"``
    additionally asks for a worst-case gain above the feasibility tolerance.
    The scan stops at the first K that is not even feasible.
    """
    if k_max < 1:
        raise ValueError("k_max must be >= 1")
    if criterion not in ("feasible", "positive-gain"):
        raise ValueError(f"unknown criterion {criterion!r}")
    objectives, statuses, zf_gaps = {}, {}, {}
    k_feasible = k_positive = 0
    positive_run = True
    for K in range(1, k_max + 1):
        scene, graph = uniform_scene(n_antennas, K), standard_graph(K, family)
        res = solve(scene, graph, options)
        objectives[K], statuses[K] = res.objective, res.status
        zf_gaps[K] = zero_forcing_gap(scene, graph)
        positive_run = positive_run and res.status == OPTIMAL
        if positive_run:
            k_positive = K
        if zf_gaps[K] > zf_tol:
            break
        k_feasible = K
    k_star = k_feasible if criterion == "feasible" else k_positive
    return IdentifiabilityReport(
        n_antennas, family, criterion, k_star, k_feasible, k_positive, objectives, statuses, zf_gaps
    )
