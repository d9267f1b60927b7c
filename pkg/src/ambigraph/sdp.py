"""Real conic programs behind the beamforming solver.

The beamforming matrix R is written as R = sum_i x_i B_i over a real basis
{B_i} of (a subspace of) the N x N Hermitian matrices, and R >= 0 is imposed
through the real symmetric embedding [[Re R, -Im R], [Im R, Re R]] >= 0. The
resulting program is

    maximize    t
    subject to  gains @ x >= t                  (one row per target)
                trace @ x == 1
                sum_i x_i lmi[i] >= 0           (PSD, side 2N)
                ||socs[e] @ x|| <= bound        (optional interference caps)

Backends return primal and dual variables in one sign convention, and
:func:`kkt_residual` checks optimality independently of the backend's own
status report.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "ConeProgram",
    "ConeSolution",
    "BACKENDS",
    "hermitian_basis",
    "real_embedding",
    "solve_cone_program",
    "kkt_residual",
    "min_cap",
]


def hermitian_basis(n: int) -> np.ndarray:
    """Frobenius-orthonormal basis of the N x N Hermitian matrices, shape (N*N, N, N)."""
    basis = np.zeros((n * n, n, n), dtype=complex)
    s = 1 / np.sqrt(2)
    b = 0
    for i in range(n):
        basis[b, i, i] = 1.0
        b += 1
    for i in range(n):
        for j in range(i + 1, n):
            basis[b, i, j] = basis[b, j, i] = s
            basis[b + 1, i, j], basis[b + 1, j, i] = -1j * s, 1j * s
            b += 2
    return basis


def real_embedding(h: np.ndarray) -> np.ndarray:
    """Map complex (..., N, N) matrices to real (..., 2N, 2N) ones; preserves PSD-ness."""
    re, im = h.real, h.imag
    top = np.concatenate([re, -im], axis=-1)
    bottom = np.concatenate([im, re], axis=-1)
    return np.concatenate([top, bottom], axis=-2)


@dataclass
class ConeProgram:
    gains: np.ndarray  # (K, d)
    trace: np.ndarray  # (d,)
    lmi: np.ndarray  # (d, m, m), symmetric
    socs: np.ndarray = field(default_factory=lambda: np.zeros((0, 2, 0)))  # (E, 2, d)
    bound: float = 0.0

    @property
    def n_vars(self) -> int:
        return self.trace.shape[0]

    def lmi_value(self, x) -> np.ndarray:
        return np.tensordot(x, self.lmi, axes=1)


@dataclass
class ConeSolution:
    """Primal/dual pair; see :func:`kkt_residual` for the sign convention."""

    status: str  # "solved", "infeasible", "unknown"
    x: np.ndarray | None = None
    t: float = float("nan")
    lam: np.ndarray | None = None
    nu: float = float("nan")
    Z: np.ndarray | None = None
    soc_duals: np.ndarray | None = None  # (E, 3): (u, w_re, w_im)
    backend_status: str = ""


def kkt_residual(prog: ConeProgram, sol: ConeSolution) -> float:
    """Largest violation among primal/dual feasibility, stationarity and the gap.

    Dual convention: lam >= 0 on the gain rows, nu on the trace equality,
    Z >= 0 on the LMI, (u, w) in the second-order cone on each cap, with

        sum(lam) = 1
        gains.T @ lam + socs.T @ w + <lmi, Z> = nu * trace
        gap = nu + bound * sum(u) - t
    """
    if sol.x is None or sol.lam is None or sol.Z is None:
        return float("inf")
    x, t, lam, nu, Z = sol.x, sol.t, sol.lam, sol.nu, sol.Z
    S = prog.lmi_value(x)
    terms = [
        max(0.0, float(np.max(t - prog.gains @ x))),
        abs(float(prog.trace @ x) - 1.0),
        max(0.0, -float(np.linalg.eigvalsh(S)[0])),
        max(0.0, -float(np.min(lam))),
        max(0.0, -float(np.linalg.eigvalsh(0.5 * (Z + Z.T))[0])),
        abs(float(np.sum(lam)) - 1.0),
    ]
    stat = prog.gains.T @ lam + np.einsum("imn,mn->i", prog.lmi, Z) - nu * prog.trace
    gap = nu - t
    if len(prog.socs):
        u, w = sol.soc_duals[:, 0], sol.soc_duals[:, 1:]
        cx = np.einsum("erd,d->er", prog.socs, x)
        terms.append(max(0.0, float(np.max(np.linalg.norm(cx, axis=1) - prog.bound))))
        terms.append(max(0.0, float(np.max(np.linalg.norm(w, axis=1) - u))))
        stat = stat + np.einsum("erd,er->d", prog.socs, w)
        gap += prog.bound * float(np.sum(u))
    terms += [float(np.max(np.abs(stat))), abs(gap)]
    return max(terms)


def _solve_cvxopt(prog: ConeProgram, max_iters=200, tol=1e-9, **_) -> ConeSolution:
    from cvxopt import matrix, solvers

    K, d = prog.gains.shape
    m = prog.lmi.shape[1]
    E = len(prog.socs)
    nv = d + 1
    c = np.zeros(nv)
    c[-1] = -1.0

    g_lin = np.hstack([-prog.gains, np.ones((K, 1))])
    h_lin = np.zeros(K)
    g_soc = np.zeros((3 * E, nv))
    h_soc = np.zeros(3 * E)
    for e in range(E):
        g_soc[3 * e + 1 : 3 * e + 3, :d] = -prog.socs[e]
        h_soc[3 * e] = prog.bound
    # cvxopt stores matrix blocks column-major
    g_psd = np.zeros((m * m, nv))
    g_psd[:, :d] = -prog.lmi.transpose(0, 2, 1).reshape(d, m * m).T
    G = np.vstack([g_lin, g_soc, g_psd])
    h = np.concatenate([h_lin, h_soc, np.zeros(m * m)])
    A = np.zeros((1, nv))
    A[0, :d] = prog.trace
    dims = {"l": K, "q": [3] * E, "s": [m]}

    opts = {"show_progress": False, "maxiters": max_iters, "abstol": tol, "reltol": tol, "feastol": tol}
    res = solvers.conelp(
        matrix(c), matrix(G), matrix(h), dims, matrix(A), matrix(np.array([1.0])), options=opts
    )
    status = res["status"]
    if status == "primal infeasible":
        return ConeSolution("infeasible", backend_status=status)
    if res["x"] is None:
        return ConeSolution("unknown", backend_status=status)
    v = np.array(res["x"]).ravel()
    z = np.array(res["z"]).ravel()
    y = float(np.array(res["y"]).ravel()[0])
    Z = z[K + 3 * E :].reshape(m, m).T
    return ConeSolution(
        "solved" if status == "optimal" else "unknown",
        x=v[:d],
        t=float(v[d]),
        lam=z[:K],
        nu=y,
        Z=Z,
        soc_duals=z[K : K + 3 * E].reshape(E, 3),
        backend_status=status,
    )


def _solve_cvxpy(prog: ConeProgram, solver=None, **kwargs) -> ConeSolution:
    import cvxpy as cp

    K, d = prog.gains.shape
    m = prog.lmi.shape[1]
    x = cp.Variable(d)
    t = cp.Variable()
    S = cp.reshape(x @ prog.lmi.reshape(d, m * m), (m, m), order="C")
    psd = (S + S.T) / 2 >> 0
    gain = prog.gains @ x - t >= 0
    tr = prog.trace @ x == 1
    caps = [cp.SOC(cp.Constant(prog.bound), prog.socs[e] @ x) for e in range(len(prog.socs))]
    problem = cp.Problem(cp.Minimize(-t), [gain, tr, psd, *caps])
    if solver is None and not kwargs:
        # the default tolerances are too loose for the KKT check
        solver, kwargs = "CLARABEL", {"tol_gap_abs": 1e-10, "tol_gap_rel": 1e-10, "tol_feas": 1e-10}
    try:
        problem.solve(solver=solver, **kwargs)
    except cp.error.SolverError as exc:
        return ConeSolution("unknown", backend_status=str(exc))
    status = problem.status
    if status in (cp.INFEASIBLE, cp.INFEASIBLE_INACCURATE):
        return ConeSolution("infeasible", backend_status=status)
    if x.value is None:
        return ConeSolution("unknown", backend_status=status)
    soc_duals = np.zeros((len(caps), 3))
    for e, cap in enumerate(caps):
        u, w = cap.dual_value
        soc_duals[e] = np.concatenate([np.ravel(u), np.ravel(w)])
    return ConeSolution(
        "solved" if status == cp.OPTIMAL else "unknown",
        x=np.asarray(x.value, dtype=float),
        t=float(t.value),
        lam=np.asarray(gain.dual_value, dtype=float),
        nu=float(tr.dual_value),
        Z=np.asarray(psd.dual_value, dtype=float),
        soc_duals=soc_duals,
        backend_status=status,
    )


BACKENDS = {"cvxopt": _solve_cvxopt, "cvxpy": _solve_cvxpy}


def min_cap(socs: np.ndarray, trace: np.ndarray, lmi: np.ndarray, max_iters=200, tol=1e-10):
    """Smallest s with ||socs[e] @ x|| <= s for all e, trace @ x = 1, LMI >= 0.

    Returns ``(s, x)``, or ``(inf, None)`` when even the trace and PSD
    constraints cannot be met. Used as a feasibility probe: s = 0 exactly
    when the zero-forcing constraint set is nonempty.
    """
    from cvxopt import matrix, solvers

    E, _, d = socs.shape
    m = lmi.shape[1]
    nv = d + 1
    c = np.zeros(nv)
    c[-1] = 1.0
    g_soc = np.zeros((3 * E, nv))
    for e in range(E):
        g_soc[3 * e, -1] = -1.0
        g_soc[3 * e + 1 : 3 * e + 3, :d] = -socs[e]
    g_psd = np.zeros((m * m, nv))
    g_psd[:, :d] = -lmi.transpose(0, 2, 1).reshape(d, m * m).T
    A = np.zeros((1, nv))
    A[0, :d] = trace
    args = (
        matrix(c),
        matrix(np.vstack([g_soc, g_psd])),
        matrix(np.zeros(3 * E + m * m)),
        {"l": 0, "q": [3] * E, "s": [m]},
        matrix(A),
        matrix(np.array([1.0])),
    )
    # the optimum sits on the PSD boundary; cvxopt's line search can break
    # down at tight tolerances, so relax until it completes
    for tol_ in (tol, 1e-9, 1e-8):
        opts = {"show_progress": False, "maxiters": max_iters, "abstol": tol_, "reltol": tol_, "feastol": tol_}
        try:
            res = solvers.conelp(*args, options=opts)
            break
        except (ValueError, ArithmeticError):
            continue
    else:
        return float("nan"), None
    if res["status"] == "primal infeasible" or res["x"] is None:
        return float("inf"), None
    v = np.array(res["x"]).ravel()
    x = v[:d]
    # report the attained cap rather than the solver's epigraph variable
    return float(np.max(np.linalg.norm(np.einsum("erd,d->er", socs, x), axis=1))), x


def solve_cone_program(prog: ConeProgram, backend: str = "cvxopt", **options) -> ConeSolution:
    try:
        fn = BACKENDS[backend]
    except KeyError:
        raise ValueError(f"unknown SDP backend {backend!r}; choose from {sorted(BACKENDS)}") from None
    return fn(prog, **options)
