"""JSON scenario configuration.

Angles are degrees in the file and radians everywhere else. Unknown keys are
rejected so that typos surface as errors instead of silently using defaults.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path

import numpy as np

from .beamform import BeamformOptions
from .graph import AmbiguityGraph, standard_graph, threshold_graph
from .gating import confusion_table
from .scene import AntennaArray, Scene, Target

__all__ = [
    "ArraySpec",
    "ConfigError",
    "GraphSpec",
    "ScenarioConfig",
    "SimulationSpec",
    "SolverSpec",
    "TargetSpec",
    "WaveformSpec",
    "load_config",
    "parse_config",
]

GRAPH_MODES = ("complete", "empty", "path", "threshold", "explicit")


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class ArraySpec:
    N: int
    type: str = "ula-half-wavelength"


@dataclass(frozen=True)
class TargetSpec:
    azimuth_deg: float
    tau_mean: float = 0.0
    omega_mean: float = 0.0
    tau_std: float = 1.0
    omega_std: float = 1.0
    rcs_re: float = 1.0
    rcs_im: float = 0.0

    def target(self) -> Target:
        return Target(
            float(np.deg2rad(self.azimuth_deg)),
            self.tau_mean,
            self.omega_mean,
            self.tau_std,
            self.omega_std,
            complex(self.rcs_re, self.rcs_im),
        )


@dataclass(frozen=True)
class GraphSpec:
    mode: str = "complete"
    gamma: float | None = None
    edges: tuple = ()


@dataclass(frozen=True)
class SolverSpec:
    delta: float = 0.0
    feasibility_tol: float = 1e-6
    kkt_tol: float = 1e-6
    backend: str = "cvxopt"


@dataclass(frozen=True)
class SimulationSpec:
    noise_std: float = 0.0
    threshold: float = 0.0
    seed: int = 0
    samples: int = 100_000
    tau_step: float | None = None
    omega_step: float | None = None


@dataclass(frozen=True)
class WaveformSpec:
    n: int = 2
    bandwidth: float = 1000.0
    duration: float = 1.0
    delta: float = 0.1
    seed: int = 0
    tau_stride: int = 10
    omega_stride: int = 8


@dataclass(frozen=True)
class ScenarioConfig:
    array: ArraySpec
    targets: tuple[TargetSpec, ...]
    graph: GraphSpec = field(default_factory=GraphSpec)
    solver: SolverSpec = field(default_factory=SolverSpec)
    simulation: SimulationSpec = field(default_factory=SimulationSpec)
    waveform: WaveformSpec = field(default_factory=WaveformSpec)

    def scene(self) -> Scene:
        return Scene(AntennaArray(self.array.N, self.array.type), tuple(t.target() for t in self.targets))

    def graph_for(self, scene: Scene | None = None, gamma: float | None = None) -> AmbiguityGraph:
        scene = scene or self.scene()
        K = scene.n_targets
        g = self.graph
        if g.mode == "threshold":
            level = g.gamma if gamma is None else gamma
            table = confusion_table(scene, "auto", self.simulation.samples, self.simulation.seed)
            return threshold_graph(table, level)
        if g.mode == "explicit":
            return AmbiguityGraph.from_edges(K, [tuple(e) for e in g.edges])
        return standard_graph(K, g.mode)

    def beamform_options(self, delta: float | None = None) -> BeamformOptions:
        s = self.solver
        return BeamformOptions(
            interference_bound=s.delta if delta is None else delta,
            feasibility_tol=s.feasibility_tol,
            kkt_tol=s.kkt_tol,
            backend=s.backend,
        )

    def to_dict(self) -> dict:
        d = asdict(self)
        d["targets"] = [asdict(t) for t in self.targets]
        d["graph"]["edges"] = [list(e) for e in self.graph.edges]
        return d

    def dumps(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"


def _section(cls, data, where: str):
    if not isinstance(data, dict):
        raise ConfigError(f"{where}: expected an object")
    names = {f.name for f in fields(cls)}
    unknown = sorted(set(data) - names)
    if unknown:
        raise ConfigError(f"{where}: unknown field(s) {', '.join(unknown)}")
    try:
        return cls(**data)
    except TypeError as exc:
        raise ConfigError(f"{where}: {exc}") from None


def _targets(data) -> tuple[TargetSpec, ...]:
    if isinstance(data, dict):
        # shorthand: {"uniform": K, <shared TargetSpec fields except azimuth_deg>}
        data = dict(data)
        if "uniform" not in data:
            raise ConfigError("targets: object form needs a 'uniform' count")
        K = data.pop("uniform")
        if not isinstance(K, int) or K < 1:
            raise ConfigError("targets.uniform: expected a positive integer")
        if "azimuth_deg" in data:
            raise ConfigError("targets: azimuth_deg is implied by 'uniform'")
        k = np.arange(1, K + 1)
        az = ((2 * k - 1) / K - 1) * 90.0
        return tuple(_section(TargetSpec, {"azimuth_deg": float(a), **data}, f"targets[{i}]") for i, a in enumerate(az))
    if not isinstance(data, list) or not data:
        raise ConfigError("targets: expected a non-empty list")
    return tuple(_section(TargetSpec, t, f"targets[{i}]") for i, t in enumerate(data))


def parse_config(data: dict) -> ScenarioConfig:
    """Validate a decoded JSON object and build a :class:`ScenarioConfig`."""
    if not isinstance(data, dict):
        raise ConfigError("config: expected an object")
    unknown = sorted(set(data) - {f.name for f in fields(ScenarioConfig)})
    if unknown:
        raise ConfigError(f"config: unknown field(s) {', '.join(unknown)}")
    if "array" not in data or "targets" not in data:
        raise ConfigError("config: 'array' and 'targets' are required")
    graph = _section(GraphSpec, data.get("graph", {}), "graph")
    if graph.mode not in GRAPH_MODES:
        raise ConfigError(f"graph.mode: expected one of {', '.join(GRAPH_MODES)}")
    if graph.mode == "threshold" and graph.gamma is None:
        raise ConfigError("graph.gamma is required for mode 'threshold'")
    graph = GraphSpec(graph.mode, graph.gamma, tuple(tuple(e) for e in graph.edges))
    cfg = ScenarioConfig(
        array=_section(ArraySpec, data["array"], "array"),
        targets=_targets(data["targets"]),
        graph=graph,
        solver=_section(SolverSpec, data.get("solver", {}), "solver"),
        simulation=_section(SimulationSpec, data.get("simulation", {}), "simulation"),
        waveform=_section(WaveformSpec, data.get("waveform", {}), "waveform"),
    )
    try:
        scene = cfg.scene()
        if graph.mode == "explicit":
            cfg.graph_for(scene)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    return cfg


def load_config(path) -> ScenarioConfig:
    try:
        data = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"{path}: {exc}") from None
    return parse_config(data)
