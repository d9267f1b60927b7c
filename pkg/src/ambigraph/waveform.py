"""Polyphase waveforms, their exact ambiguity function, and matched filtering.

Each waveform is piecewise constant over chips of length 1/B,

    s_n(t) = T^{-1/2} sum_l c[n, l] 1[0, 1/B)(t - l/B),   l = 0..BT-1,

with unit-modulus chips. The cross-ambiguity

    chi_{n,n'}(dtau, dw) = int s_n(t) conj(s_n'(t - dtau)) exp(-j dw t) dt

is then a finite sum of chip products times closed-form integrals of
exp(-j dw t) over sub-chip intervals, so no quadrature is needed.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.signal import CZT

from .beamform import factor
from .scene import Scene

__all__ = [
    "AmbiguityReport",
    "Detection",
    "DelayDopplerGrid",
    "FilterOutputs",
    "GridTooLarge",
    "PolyphaseWaveformSet",
    "ambiguity",
    "ambiguity_matrix",
    "condbt_check",
    "detect",
    "generate",
    "matched_filter_sim",
    "verify_theorem1",
]

DEFAULT_MAX_GRID_POINTS = 10**8
# support boundary on the sidelobe-free Doppler band of the autoambiguity
DOPPLER_GUARD = 26.0


class GridTooLarge(ValueError):
    """The verification grid exceeds the configured point budget."""


@dataclass(frozen=True)
class PolyphaseWaveformSet:
    chips: np.ndarray  # (N, BT), unit modulus
    bandwidth: float
    duration: float
    seed: int | None = None

    def __post_init__(self):
        c = np.asarray(self.chips, dtype=complex)
        if c.ndim != 2:
            raise ValueError("chips must be an N x BT matrix")
        if c.shape[1] != _chip_count(self.bandwidth, self.duration):
            raise ValueError("chip count must equal B*T")
        if np.max(np.abs(np.abs(c) - 1.0)) > 1e-12:
            raise ValueError("chips must have unit modulus")
        c.setflags(write=False)
        object.__setattr__(self, "chips", c)

    @property
    def n_waveforms(self) -> int:
        return self.chips.shape[0]

    @property
    def n_chips(self) -> int:
        return self.chips.shape[1]

    def signal(self, t) -> np.ndarray:
        """Sample s(t) at times ``t``; returns shape (N, *t.shape)."""
        t = np.asarray(t, dtype=float)
        idx = np.floor(t * self.bandwidth).astype(int)
        inside = (t >= 0) & (idx >= 0) & (idx < self.n_chips)
        out = np.where(inside, self.chips[:, np.clip(idx, 0, self.n_chips - 1)], 0.0)
        return out / np.sqrt(self.duration)


def _chip_count(bandwidth: float, duration: float) -> int:
    if not (bandwidth > 0 and duration > 0):
        raise ValueError("bandwidth and duration must be positive")
    bt = bandwidth * duration
    n = int(round(bt))
    if n < 1 or abs(bt - n) > 1e-9 * max(1.0, bt):
        raise ValueError(f"B*T must be a positive integer, got {bt}")
    return n


def generate(n: int, bandwidth: float, duration: float, seed: int = 0) -> PolyphaseWaveformSet:
    """N waveforms with chips i.i.d. uniform on the complex unit circle."""
    if n < 1:
        raise ValueError("n must be >= 1")
    bt = _chip_count(bandwidth, duration)
    phases = np.random.default_rng(seed).random((n, bt))
    return PolyphaseWaveformSet(np.exp(2j * np.pi * phases), bandwidth, duration, seed)


def _segment(w, lo, hi):
    """int_lo^hi exp(-j w t) dt, stable as w -> 0."""
    w = np.asarray(w, dtype=float)
    return np.exp(-0.5j * w * (lo + hi)) * (hi - lo) * np.sinc(w * (hi - lo) / (2 * np.pi))


def _chip_products(c_n, c_m, L):
    """x[l] = c_n[l] conj(c_m[l-L]) and y[l] = c_n[l] conj(c_m[l-L-1]) for l = L..BT-1."""
    bt = c_n.shape[-1]
    x = c_n[L:] * np.conj(c_m[: bt - L])
    y = np.zeros_like(x)
    y[1:] = c_n[L + 1 :] * np.conj(c_m[: bt - L - 1])
    return x, y


def _chi_nonneg(ws, n, m, delta_tau, delta_omega):
    B, T = ws.bandwidth, ws.duration
    if delta_tau >= T:
        return 0j
    L = int(np.floor(delta_tau * B))
    if L >= ws.n_chips:
        return 0j
    eps = delta_tau * B - L
    x, y = _chip_products(ws.chips[n], ws.chips[m], L)
    ell = np.arange(L, ws.n_chips)
    phase = np.exp(-1j * delta_omega * ell / B)
    a = _segment(delta_omega, eps / B, 1 / B)
    b = _segment(delta_omega, 0.0, eps / B)
    return complex((a * (x @ phase) + b * (y @ phase)) / T)


def ambiguity(ws: PolyphaseWaveformSet, n: int, nprime: int, delta_tau: float, delta_omega: float) -> complex:
    """Exact chi_{n,n'}(delta_tau, delta_omega) for the piecewise-constant waveforms."""
    delta_tau, delta_omega = float(delta_tau), float(delta_omega)
    if delta_tau >= 0:
        return _chi_nonneg(ws, n, nprime, delta_tau, delta_omega)
    # chi_{n,n'}(-t, w) = exp(j w t) conj(chi_{n',n}(t, -w))
    t = -delta_tau
    return complex(np.exp(1j * delta_omega * t) * np.conj(_chi_nonneg(ws, nprime, n, t, -delta_omega)))


def ambiguity_matrix(ws: PolyphaseWaveformSet, delta_tau: float, delta_omega: float) -> np.ndarray:
    N = ws.n_waveforms
    return np.array([[ambiguity(ws, i, j, delta_tau, delta_omega) for j in range(N)] for i in range(N)])


def condbt_check(delta: float, bandwidth: float, duration: float, n: int) -> bool:
    """Sufficient condition on B*T for sidelobe level ``delta`` with N waveforms."""
    if min(delta, bandwidth, duration, n) <= 0:
        raise ValueError("all arguments must be positive")
    bt = bandwidth * duration
    return bool(2.0**-8 * delta**2 * bt - 2 * np.log(bt) > np.log(2.0**9 * n**2 / delta**3))


@dataclass
class AmbiguityReport:
    """Maxima of |chi| over the verification grid, per property.

    The grid samples delta_tau = J*delta/(8B) for 0 <= delta_tau < T and
    delta_omega = M*delta/T for |delta_omega| <= pi*B; negative delays are
    covered through the symmetry of chi by scanning every ordered pair
    (n, n'). ``tau_stride`` and ``omega_stride`` thin the J and M indices.
    """

    delta: float
    bandwidth: float
    duration: float
    tau_step: float
    omega_step: float
    tau_stride: int
    omega_stride: int
    n_points: int
    peak_error: float  # max_n |chi_nn(0,0) - 1|
    auto_max: float  # property-2 region
    cross_max: float  # property-3 region, all n != n'
    pair_max: dict = field(default_factory=dict)

    @property
    def property1(self) -> bool:
        return self.peak_error <= 1e-12

    @property
    def property2(self) -> bool:
        return self.auto_max <= self.delta

    @property
    def property3(self) -> bool:
        return self.cross_max <= self.delta

    @property
    def passed(self) -> bool:
        return self.property1 and self.property2 and self.property3

    @staticmethod
    def amplitude_db(x: float) -> float:
        return float(20 * np.log10(x)) if x > 0 else float("-inf")

    @staticmethod
    def power_db(x: float) -> float:
        """10*log10 applied to |chi| itself, the convention used for delta."""
        return float(10 * np.log10(x)) if x > 0 else float("-inf")


def verify_theorem1(
    ws: PolyphaseWaveformSet,
    delta: float,
    tau_stride: int = 1,
    omega_stride: int = 1,
    max_points: int = DEFAULT_MAX_GRID_POINTS,
    chunk: int = 64,
) -> AmbiguityReport:
    """Evaluate |chi| on the sample grid and compare against ``delta``.

    ``max_points`` bounds the number of (J, M) points per waveform pair after
    striding. Each delay row is a zoomed DFT of chip products, so the cost
    is dominated by the number of grid points rather than by B*T.
    """
    inv = 1 / delta
    if not (delta > 0 and abs(inv - round(inv)) < 1e-9):
        raise ValueError("1/delta must be a positive integer")
    if tau_stride < 1 or omega_stride < 1:
        raise ValueError("strides must be >= 1")
    B, T, bt = ws.bandwidth, ws.duration, ws.n_chips
    q = 8 * int(round(inv))  # delay samples per chip
    J = np.arange(0, q * bt, tau_stride)
    m_max = int(np.floor(np.pi * B * T / delta))
    M = np.arange(-m_max, m_max + 1, omega_stride)
    n_points = J.size * M.size
    if n_points > max_points:
        raise GridTooLarge(
            f"grid has {n_points} points per pair (limit {max_points}); "
            "use a larger delta, a smaller B*T, or coarser tau_stride/omega_stride"
        )
    w = M * delta / T
    # zoomed DFT: sum_l v[l] exp(-j w_m l / B) over the M grid
    czt = CZT(bt, M.size, w=np.exp(-1j * omega_stride * delta / bt), a=np.exp(1j * M[0] * delta / bt))
    auto_band = (np.abs(w) >= DOPPLER_GUARD / (delta * T)) & (np.abs(w) <= np.pi * B)

    L_all, r_all = J // q, J % q
    residues = np.unique(r_all)
    seg_a = {r: _segment(w, r / q / B, 1 / B) / T for r in residues}
    seg_b = {r: _segment(w, 0.0, r / q / B) / T for r in residues}
    Ls = np.unique(L_all)

    N = ws.n_waveforms
    pair_max = {}
    for n in range(N):
        for m in range(N):
            best = 0.0
            for start in range(0, Ls.size, chunk):
                block = Ls[start : start + chunk]
                x = np.zeros((block.size, bt), dtype=complex)
                y = np.zeros((block.size, bt), dtype=complex)
                for i, L in enumerate(block):
                    x[i, L:], y[i, L:] = _chip_products(ws.chips[n], ws.chips[m], L)
                X, Y = czt(x, axis=-1), czt(y, axis=-1)
                for i, L in enumerate(block):
                    for r in r_all[L_all == L]:
                        mag = np.abs(X[i] * seg_a[r] + Y[i] * seg_b[r])
                        if n == m and L == 0:
                            # below one chip of delay only the Doppler band counts
                            mag = np.where(auto_band, mag, 0.0)
                        best = max(best, float(mag.max()))
            pair_max[(n, m)] = best

    peak_error = max(abs(ambiguity(ws, n, n, 0.0, 0.0) - 1.0) for n in range(N))
    auto = [v for (n, m), v in pair_max.items() if n == m]
    cross = [v for (n, m), v in pair_max.items() if n != m]
    return AmbiguityReport(
        delta=delta,
        bandwidth=B,
        duration=T,
        tau_step=delta / (8 * B),
        omega_step=delta / T,
        tau_stride=tau_stride,
        omega_stride=omega_stride,
        n_points=n_points * N * N,
        peak_error=float(peak_error),
        auto_max=max(auto),
        cross_max=max(cross, default=0.0),
        pair_max=pair_max,
    )


# matched filtering -----------------------------------------------------------


@dataclass(frozen=True)
class DelayDopplerGrid:
    """Rectangular lattice of matched-filter hypotheses."""

    taus: np.ndarray
    omegas: np.ndarray

    @classmethod
    def uniform(cls, tau_range, omega_range, tau_step, omega_step) -> "DelayDopplerGrid":
        taus = np.arange(tau_range[0], tau_range[1] + 0.5 * tau_step, tau_step)
        omegas = np.arange(omega_range[0], omega_range[1] + 0.5 * omega_step, omega_step)
        return cls(taus, omegas)

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.taus), len(self.omegas)

    def snap(self, tau: float, omega: float) -> tuple[int, int] | None:
        """Index of the lattice cell containing (tau, omega), or None if off-grid."""
        i = _nearest(self.taus, tau)
        j = _nearest(self.omegas, omega)
        return None if i is None or j is None else (i, j)


def _nearest(axis: np.ndarray, v: float) -> int | None:
    i = int(np.argmin(np.abs(axis - v)))
    half = 0.5 * (np.min(np.diff(axis)) if axis.size > 1 else np.inf)
    return i if abs(axis[i] - v) <= half else None


@dataclass
class FilterOutputs:
    """Matched-filter responses r(tau_i, omega_j, theta_k), shape (n_tau, n_omega, K)."""

    grid: DelayDopplerGrid
    response: np.ndarray

    @property
    def magnitude(self) -> np.ndarray:
        return np.abs(self.response)


@dataclass(frozen=True)
class Detection:
    tau: float
    omega: float
    filter_index: int
    magnitude: float

    def __post_init__(self):
        if not self.magnitude >= 0:
            raise ValueError("magnitude must be non-negative")


def matched_filter_sim(
    scene: Scene,
    R: np.ndarray,
    waveforms: PolyphaseWaveformSet | None,
    noise_std: float,
    grid: DelayDopplerGrid,
    ideal: bool = True,
    truth=None,
    seed: int = 0,
) -> FilterOutputs:
    """Matched-filter bank outputs for filters steered at each target azimuth.

    ``truth`` holds the targets' actual (tau, omega), shape (K, 2); it
    defaults to the prior means. The ideal model places each target's
    response at the lattice cell containing it. The non-ideal model uses
    ``factor(R)`` and the exact ambiguity of ``waveforms``. Noise is circular
    complex Gaussian with standard deviation ``noise_std`` per quadrature.
    """
    if noise_std < 0:
        raise ValueError("noise_std must be non-negative")
    truth = scene.means if truth is None else np.asarray(truth, dtype=float)
    if truth.shape != (scene.n_targets, 2):
        raise ValueError("truth must have shape (K, 2)")
    A = scene.steering_matrix()
    K, N = scene.n_targets, scene.n_antennas
    h = np.array([t.rcs for t in scene.targets])
    # spatial coupling b^H(theta_j) b(theta_k) a^H(theta_k) ... a(theta_j), b = a
    rx = A.conj().T @ A  # [j, k] = b_j^H b_k
    taus, omegas = grid.taus, grid.omegas
    out = np.zeros(grid.shape + (K,), dtype=complex)

    if ideal:
        tx = A.conj().T @ R @ A  # [k, j] = a_k^H R a_j
        for k in range(K):
            cell = grid.snap(*truth[k])
            if cell is None:
                continue
            i, j = cell
            phase = np.exp(-1j * (omegas[j] - truth[k, 1]) * truth[k, 0])
            out[i, j, :] += h[k] * phase * rx[:, k] * tx[k, :]
    else:
        if waveforms is None or waveforms.n_waveforms != N:
            raise ValueError("non-ideal simulation needs N waveforms")
        W = factor(R)
        left = A.conj().T @ W  # [k, n] = a_k^H W
        right = W.conj().T @ A  # [n, j] = W^H a_j
        for k in range(K):
            for i, tau in enumerate(taus):
                for j, om in enumerate(omegas):
                    chi = ambiguity_matrix(waveforms, tau - truth[k, 0], om - truth[k, 1])
                    phase = np.exp(-1j * (om - truth[k, 1]) * truth[k, 0])
                    out[i, j, :] += h[k] * phase * rx[:, k] * (left[k] @ chi @ right)

    if noise_std > 0:
        rng = np.random.default_rng(seed)
        out += noise_std * (rng.standard_normal(out.shape) + 1j * rng.standard_normal(out.shape))
    return FilterOutputs(grid, out)


def detect(outputs: FilterOutputs, threshold: float) -> list[Detection]:
    """Every (grid point, filter) whose magnitude is strictly above ``threshold``."""
    if not threshold >= 0:
        raise ValueError("threshold must be non-negative")
    mag = outputs.magnitude
    idx = np.argwhere(mag > threshold)
    g = outputs.grid
    return [Detection(float(g.taus[i]), float(g.omegas[j]), int(k), float(mag[i, j, k])) for i, j, k in idx]
