"""Command-line front end: scenario in, CSV/SVG/JSON artifacts out.

Exit codes: 0 success, 2 configuration error, 3 solver failure,
4 infeasible where a feasible beamformer was required.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from pathlib import Path

import numpy as np

from . import beamform as bf
from . import svg
from .assoc import Assigned, ErrorMultiple, associate
from .config import ConfigError, ScenarioConfig, load_config
from .gating import confusion_table
from .graph import standard_graph, threshold_graph
from .scene import uniform_scene
from .tradeoff import TradeoffOptions, concave_envelope, evaluate, exhaustive, pareto_filter, sweep
from .waveform import DelayDopplerGrid, condbt_check, detect, generate, matched_filter_sim, verify_theorem1

EXIT_OK, EXIT_CONFIG, EXIT_SOLVER, EXIT_INFEASIBLE = 0, 2, 3, 4


class CommandError(Exception):
    def __init__(self, code: int, kind: str, message: str):
        super().__init__(message)
        self.code, self.kind = code, kind


def _fmt(x) -> str:
    if isinstance(x, (float, np.floating)):
        return repr(float(x))
    return str(x)


def _write_csv(path: Path, header, rows):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for r in rows:
            w.writerow([_fmt(v) for v in r])


def _write_json(path: Path, obj):
    path.write_text(json.dumps(obj, indent=2, sort_keys=True) + "\n")


def _out_dir(args) -> Path:
    out = Path(args.out or ".")
    out.mkdir(parents=True, exist_ok=True)
    return out


def _config(args) -> ScenarioConfig:
    cfg = load_config(args.config)
    if getattr(args, "seed", None) is not None or getattr(args, "samples", None) is not None:
        from dataclasses import replace

        sim = cfg.simulation
        sim = replace(sim, seed=args.seed if args.seed is not None else sim.seed)
        sim = replace(sim, samples=args.samples if args.samples is not None else sim.samples)
        cfg = replace(cfg, simulation=sim)
    return cfg


def _require_feasible(res: bf.BeamformResult):
    if res.status == bf.NUMERICAL_FAILURE:
        raise CommandError(EXIT_SOLVER, "solver", f"solver failed (KKT residual {res.kkt_residual:.3g})")
    if res.status == bf.INFEASIBLE:
        raise CommandError(EXIT_INFEASIBLE, "infeasible", "no beamformer meets the zero-forcing constraints")


def _complex_matrix(R):
    return {"re": np.real(R).tolist(), "im": np.imag(R).tolist()}


# commands ----------------------------------------------------------------------


def cmd_beamform(args):
    cfg = _config(args)
    scene = cfg.scene()
    graph = cfg.graph_for(scene)
    res = bf.solve(scene, graph, cfg.beamform_options(args.delta))
    report = {
        "graph_edges": graph.to_text(),
        "status": res.status,
        "objective": res.objective,
        "objective_db": res.objective_db,
        "kkt_residual": res.kkt_residual,
        "residuals": res.residuals,
        "R": None if res.R is None else _complex_matrix(res.R),
    }
    print(f"status {res.status}  P = {res.objective:.6g} ({res.objective_db:.4f} dB)  graph [{graph.to_text()}]")
    if args.out:
        _write_json(_out_dir(args) / "beamform.json", report)
    _require_feasible(res)


def cmd_pattern(args):
    cfg = _config(args)
    scene = cfg.scene()
    graph = cfg.graph_for(scene)
    res = bf.solve(scene, graph, cfg.beamform_options(args.delta))
    _require_feasible(res)
    theta = np.arange(-90, 91, 1.0)
    grid = np.deg2rad(theta)
    curves = [bf.beam_pattern(res.R, scene, k, grid) for k in range(scene.n_targets)]
    out = _out_dir(args)
    rows = [(float(t), k, float(c[i])) for k, c in enumerate(curves) for i, t in enumerate(theta)]
    _write_csv(out / "pattern.csv", ["theta_deg", "target_index", "magnitude"], rows)
    svg.write(
        out / "pattern.svg",
        [svg.Series(theta, c, f"target {k}") for k, c in enumerate(curves)],
        xlabel="azimuth (deg)",
        ylabel="|a_k^H R a(theta)|",
        markers=[float(np.rad2deg(a)) for a in scene.azimuths],
    )
    print(f"wrote {out / 'pattern.csv'} ({len(rows)} rows)")


def cmd_powergain(args):
    rows = []
    for N in range(args.n_min, args.n_max + 1):
        scene = uniform_scene(N, N)
        pc = bf.solve(scene, standard_graph(N, "complete"))
        pp = bf.solve(scene, standard_graph(N, "path"))
        for r in (pc, pp):
            if r.status != bf.OPTIMAL:
                raise CommandError(EXIT_SOLVER, "solver", f"N={N}: solver returned {r.status}")
        rows.append((N, pc.objective_db, pp.objective_db, pp.objective_db - pc.objective_db))
        print(f"N={N}: complete {pc.objective_db:.4f} dB  path {pp.objective_db:.4f} dB  ratio {rows[-1][3]:.4f} dB")
    if args.out:
        out = _out_dir(args)
        _write_csv(out / "powergain.csv", ["N", "P_complete_db", "P_path_db", "ratio_db"], rows)
        n = [r[0] for r in rows]
        svg.write(
            out / "powergain.svg",
            [svg.Series(n, [r[3] for r in rows], "path / complete")],
            xlabel="N = K",
            ylabel="power gain ratio (dB)",
        )


def cmd_identifiability(args):
    families = ["complete", "path"] if args.family == "both" else [args.family]
    n_values = [args.n] if args.n else list(range(args.n_min, args.n_max + 1))
    rows = []
    for family in families:
        for N in n_values:
            rep = bf.identifiability(N, family, 2 * N + 1, criterion=args.criterion)
            rows.append((N, family, rep.k_star))
            print(f"N={N} {family}: K* = {rep.k_star}")
    if args.out:
        out = _out_dir(args)
        _write_csv(out / "identifiability.csv", ["N", "family", "K_star"], rows)
        svg.write(
            out / "identifiability.svg",
            [svg.Series([r[0] for r in rows if r[1] == f], [r[2] for r in rows if r[1] == f], f) for f in families],
            xlabel="N",
            ylabel="K*",
        )


def _tradeoff_rows(points):
    front = {id(p) for p in pareto_filter(points)}
    return [
        (
            "" if p.gamma is None else p.gamma,
            p.graph.to_text(),
            p.power_gain,
            p.power_gain_db,
            p.assoc_prob,
            p.stderr,
            int(id(p) in front),
        )
        for p in points
    ]


def cmd_tradeoff(args):
    cfg = _config(args)
    scene = cfg.scene()
    opts = TradeoffOptions(
        n_samples=cfg.simulation.samples,
        seed=cfg.simulation.seed,
        beamform=cfg.beamform_options(args.delta),
        n_jobs=args.jobs,
    )
    if args.gamma:
        table = confusion_table(scene, "auto", opts.n_samples, opts.seed)
        points = [evaluate(scene, threshold_graph(table, g), opts, g) for g in args.gamma]
    else:
        points = sweep(scene, opts)
    if args.exhaustive or args.long_run:
        try:
            points = points + exhaustive(scene, opts, long_run=args.long_run)
        except ValueError as exc:
            raise CommandError(EXIT_CONFIG, "config", str(exc)) from None
    header = ["gamma", "graph_edges", "P_linear", "P_db", "C", "C_stderr", "pareto_flag"]
    rows = _tradeoff_rows(points)
    for r in rows:
        print(f"gamma={_fmt(r[0]) or '-':>8}  P={r[3]:9.4f} dB  C={r[4]:.5f}  [{r[1]}]")
    if args.out:
        out = _out_dir(args)
        _write_csv(out / "tradeoff.csv", header, rows)
        env = concave_envelope(points)
        _write_csv(out / "tradeoff_envelope.csv", ["P_linear", "C"], [(p.power_gain, p.assoc_prob) for p in env])
        swept = [p for p in points if p.gamma is not None]
        cloud = [p for p in points if p.gamma is None]
        series = []
        if cloud:
            series.append(svg.Series([p.power_gain for p in cloud], [p.assoc_prob for p in cloud], "all graphs", scatter=True))
        series.append(svg.Series([p.power_gain for p in swept], [p.assoc_prob for p in swept], "gamma sweep", scatter=True))
        svg.write(out / "tradeoff.svg", series, xlabel="P(G)", ylabel="C(G)")


def cmd_waveform(args):
    w = load_config(args.config).waveform if args.config else None
    n = args.n or (w.n if w else 2)
    B = args.bandwidth or (w.bandwidth if w else 1e3)
    T = args.duration or (w.duration if w else 1.0)
    delta = args.delta or (w.delta if w else 0.1)
    seed = args.seed if args.seed is not None else (w.seed if w else 0)
    tau_stride = args.tau_stride or (w.tau_stride if w else 10)
    omega_stride = args.omega_stride or (w.omega_stride if w else 8)
    try:
        ws = generate(n, B, T, seed)
        rep = verify_theorem1(ws, delta, tau_stride=tau_stride, omega_stride=omega_stride)
    except ValueError as exc:
        raise CommandError(EXIT_CONFIG, "config", str(exc)) from None
    report = {
        "n": n,
        "bandwidth": B,
        "duration": T,
        "delta": delta,
        "seed": seed,
        "condbt": condbt_check(delta, B, T, n),
        "grid": {
            "tau_step": rep.tau_step,
            "omega_step": rep.omega_step,
            "tau_stride": rep.tau_stride,
            "omega_stride": rep.omega_stride,
            "points": rep.n_points,
        },
        "peak_error": rep.peak_error,
        "auto_max": rep.auto_max,
        "cross_max": rep.cross_max,
        "auto_max_db_amplitude": rep.amplitude_db(rep.auto_max),
        "cross_max_db_amplitude": rep.amplitude_db(rep.cross_max),
        "auto_max_db_10log": rep.power_db(rep.auto_max),
        "cross_max_db_10log": rep.power_db(rep.cross_max),
        "property1": rep.property1,
        "property2": rep.property2,
        "property3": rep.property3,
    }
    print(json.dumps(report, indent=2, sort_keys=True))
    if args.out:
        _write_json(_out_dir(args) / "waveform.json", report)


def cmd_simulate(args):
    cfg = _config(args)
    scene = cfg.scene()
    graph = cfg.graph_for(scene)
    res = bf.solve(scene, graph, cfg.beamform_options(args.delta))
    _require_feasible(res)
    sim = cfg.simulation
    stds = scene.stds
    tau_step = sim.tau_step or float(stds[:, 0].min()) / 4
    omega_step = sim.omega_step or float(stds[:, 1].min()) / 4
    lo = scene.means - 4 * stds
    hi = scene.means + 4 * stds
    grid = DelayDopplerGrid.uniform(
        (lo[:, 0].min(), hi[:, 0].max()), (lo[:, 1].min(), hi[:, 1].max()), tau_step, omega_step
    )
    # true parameters drawn from the priors and placed on the lattice
    rng = np.random.default_rng(sim.seed)
    truth = scene.means + stds * rng.standard_normal(scene.means.shape)
    for k, (tau, omega) in enumerate(truth):
        cell = grid.snap(tau, omega)
        if cell is not None:
            truth[k] = grid.taus[cell[0]], grid.omegas[cell[1]]
    outputs = matched_filter_sim(scene, res.R, None, sim.noise_std, grid, ideal=True, truth=truth, seed=sim.seed)
    outcome = associate(detect(outputs, sim.threshold), scene, graph, sim.threshold)
    rows = []
    for k, r in enumerate(outcome.tracks):
        if isinstance(r, Assigned):
            d = r.detection
            rows.append((k, "assigned", d.tau, d.omega, d.magnitude))
        else:
            label = "error-multiple" if isinstance(r, ErrorMultiple) else "error-none"
            rows.append((k, label, "", "", ""))
        print(f"target {k}: {rows[-1][1]}")
    if args.out:
        _write_csv(_out_dir(args) / "simulate.csv", ["target_index", "outcome", "tau", "omega", "magnitude"], rows)


# parser -----------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="ambigraph", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, config=True):
        if config:
            sp.add_argument("config", help="scenario JSON file")
        sp.add_argument("--out", help="output directory")
        sp.add_argument("--seed", type=int, help="override the simulation seed")
        sp.add_argument("--samples", type=int, help="override the Monte-Carlo sample count")
        sp.add_argument("--delta", type=float, help="interference bound (beamforming) or sidelobe level (waveform)")

    sp = sub.add_parser("beamform", help="solve for the optimal beamformer")
    common(sp)
    sp.set_defaults(func=cmd_beamform)

    sp = sub.add_parser("pattern", help="beam patterns on a 1 degree grid")
    common(sp)
    sp.set_defaults(func=cmd_pattern)

    sp = sub.add_parser("powergain", help="path/complete power gain ratio versus N = K")
    common(sp, config=False)
    sp.add_argument("--n-min", type=int, default=3, help="smallest N")
    sp.add_argument("--n-max", type=int, default=8, help="largest N")
    sp.set_defaults(func=cmd_powergain)

    sp = sub.add_parser("identifiability", help="largest identifiable K per N")
    common(sp, config=False)
    sp.add_argument("--family", choices=["complete", "path", "both"], default="both")
    sp.add_argument("--n", type=int, help="single N (otherwise --n-min..--n-max)")
    sp.add_argument("--n-min", type=int, default=2)
    sp.add_argument("--n-max", type=int, default=6)
    sp.add_argument("--criterion", choices=["feasible", "positive-gain"], default="feasible")
    sp.set_defaults(func=cmd_identifiability)

    sp = sub.add_parser("tradeoff", help="detection-association trade-off")
    common(sp)
    sp.add_argument("--gamma", type=float, action="append", help="evaluate these thresholds instead of the full sweep")
    sp.add_argument("--exhaustive", action="store_true", help="add every graph (K <= 5)")
    sp.add_argument("--long-run", action="store_true", help="allow exhaustive enumeration at K = 6")
    sp.add_argument("--jobs", type=int, default=1, help="worker processes")
    sp.set_defaults(func=cmd_tradeoff)

    sp = sub.add_parser("waveform", help="random polyphase waveforms and their ambiguity")
    sp.add_argument("config", nargs="?", help="optional scenario JSON (uses its 'waveform' section)")
    sp.add_argument("--out", help="output directory")
    sp.add_argument("--seed", type=int, help="chip phase seed")
    sp.add_argument("--delta", type=float, help="sidelobe level")
    sp.add_argument("--n", type=int, help="number of waveforms")
    sp.add_argument("--bandwidth", type=float, help="bandwidth B")
    sp.add_argument("--duration", type=float, help="pulse duration T")
    sp.add_argument("--tau-stride", type=int, help="keep every k-th delay row")
    sp.add_argument("--omega-stride", type=int, help="keep every k-th Doppler column")
    sp.set_defaults(func=cmd_waveform)

    sp = sub.add_parser("simulate", help="matched filter, detection and association end to end")
    common(sp)
    sp.set_defaults(func=cmd_simulate)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        args.func(args)
    except CommandError as exc:
        record = {"error": exc.kind, "message": str(exc), "exit_code": exc.code}
    except ConfigError as exc:
        record = {"error": "config", "message": str(exc), "exit_code": EXIT_CONFIG}
    else:
        return EXIT_OK
    print(json.dumps(record), file=sys.stderr)
    if getattr(args, "out", None):
        _write_json(_out_dir(args) / "error.json", record)
    return record["exit_code"]


if __name__ == "__main__":
    sys.exit(main())
