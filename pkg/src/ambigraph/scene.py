"""Antenna arrays, steering vectors and target scenes with Gaussian priors.

Angles are radians throughout. A target's prior on (delay, Doppler) is an
axis-aligned Gaussian; its azimuth is known exactly.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

__all__ = [
    "AntennaArray",
    "Target",
    "Scene",
    "steering",
    "steering_matrix",
    "steering_matrix_rank",
    "uniform_azimuths",
    "uniform_scene",
]

RANK_RTOL = 1e-9


@dataclass(frozen=True)
class AntennaArray:
    """Uniform linear array with half-wavelength element spacing."""

    n_antennas: int
    geometry: str = "ula-half-wavelength"

    def __post_init__(self):
        if int(self.n_antennas) != self.n_antennas or self.n_antennas < 1:
            raise ValueError(f"n_antennas must be a positive integer, got {self.n_antennas}")
        if self.geometry != "ula-half-wavelength":
            raise ValueError(f"unsupported array geometry {self.geometry!r}")
        object.__setattr__(self, "n_antennas", int(self.n_antennas))


@dataclass(frozen=True)
class Target:
    """A target with known azimuth and a Gaussian prior on (tau, omega).

    ``rcs`` is the complex reflection coefficient, path loss included.
    """

    azimuth: float
    tau_mean: float = 0.0
    omega_mean: float = 0.0
    tau_std: float = 1.0
    omega_std: float = 1.0
    rcs: complex = 1.0

    def __post_init__(self):
        if not -np.pi / 2 < self.azimuth < np.pi / 2:
            raise ValueError(f"azimuth must lie in (-pi/2, pi/2), got {self.azimuth}")
        if not (self.tau_std > 0 and self.omega_std > 0):
            raise ValueError("prior standard deviations must be positive")
        object.__setattr__(self, "rcs", complex(self.rcs))

    @property
    def mean(self) -> np.ndarray:
        return np.array([self.tau_mean, self.omega_mean])

    @property
    def std(self) -> np.ndarray:
        return np.array([self.tau_std, self.omega_std])

    def log_density(self, points) -> np.ndarray:
        """Log prior density at ``points`` of shape (..., 2)."""
        z = (np.asarray(points, dtype=float) - self.mean) / self.std
        return -0.5 * np.sum(z * z, axis=-1) - np.log(2 * np.pi * self.tau_std * self.omega_std)

    def sample(self, rng: np.random.Generator, size) -> np.ndarray:
        size = (size,) if np.isscalar(size) else tuple(size)
        return self.mean + self.std * rng.standard_normal(size + (2,))


@dataclass(frozen=True)
class Scene:
    array: AntennaArray
    targets: tuple[Target, ...] = field(default_factory=tuple)

    def __post_init__(self):
        targets = tuple(self.targets)
        if not targets:
            raise ValueError("a scene needs at least one target")
        az = np.array([t.azimuth for t in targets])
        if len(np.unique(az)) != len(az):
            raise ValueError("target azimuths must be pairwise distinct")
        object.__setattr__(self, "targets", targets)

    @property
    def n_antennas(self) -> int:
        return self.array.n_antennas

    @property
    def n_targets(self) -> int:
        return len(self.targets)

    @property
    def azimuths(self) -> np.ndarray:
        return np.array([t.azimuth for t in self.targets])

    @property
    def means(self) -> np.ndarray:
        return np.array([t.mean for t in self.targets])

    @property
    def stds(self) -> np.ndarray:
        return np.array([t.std for t in self.targets])

    def log_densities(self, points) -> np.ndarray:
        """Log prior densities of every target, shape (..., K)."""
        pts = np.asarray(points, dtype=float)[..., None, :]
        z = (pts - self.means) / self.stds
        norm = np.log(2 * np.pi * np.prod(self.stds, axis=1))
        return -0.5 * np.sum(z * z, axis=-1) - norm

    def steering_matrix(self) -> np.ndarray:
        return steering_matrix(self.array, self.azimuths)


def steering(array: AntennaArray, azimuth: float) -> np.ndarray:
    """ULA response ``a_n = exp(j (n-1) pi sin(azimuth))``, n = 1..N."""
    n = np.arange(array.n_antennas)
    return np.exp(1j * n * np.pi * np.sin(azimuth))


def steering_matrix(array: AntennaArray, azimuths: Sequence[float]) -> np.ndarray:
    """N x K matrix whose columns are steering vectors."""
    n = np.arange(array.n_antennas)[:, None]
    return np.exp(1j * n * np.pi * np.sin(np.asarray(azimuths, dtype=float))[None, :])


def steering_matrix_rank(scene: Scene, rtol: float = RANK_RTOL) -> int:
    s = np.linalg.svd(scene.steering_matrix(), compute_uv=False)
    return int(np.sum(s > rtol * s[0]))


def uniform_azimuths(n_targets: int) -> np.ndarray:
    """Azimuths ((2k-1)/K - 1) * 90 degrees, k = 1..K, in radians."""
    k = np.arange(1, n_targets + 1)
    return np.deg2rad(((2 * k - 1) / n_targets - 1) * 90.0)


def uniform_scene(
    n_antennas: int,
    n_targets: int,
    tau_mean=0.0,
    omega_mean=0.0,
    tau_std=1.0,
    omega_std=1.0,
    rcs=1.0,
) -> Scene:
    """Scene with targets uniformly spread in azimuth.

    Prior parameters may be scalars (shared by all targets) or sequences of
    length ``n_targets``.
    """
    if n_targets < 1:
        raise ValueError("n_targets must be >= 1")
    params = [
        np.broadcast_to(np.asarray(p), (n_targets,))
        for p in (tau_mean, omega_mean, tau_std, omega_std, rcs)
    ]
    targets = tuple(
        Target(float(az), float(tm), float(om), float(ts), float(os_), complex(h))
        for az, tm, om, ts, os_, h in zip(uniform_azimuths(n_targets), *params)
    )
    return Scene(AntennaArray(n_antennas), targets)
