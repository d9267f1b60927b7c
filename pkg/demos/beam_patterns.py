"""Beam patterns for three targets on a three-element array.

Compares the complete ambiguity graph (every pair zero-forced) with the
path graph (only neighbors zero-forced) and writes both patterns as SVG.

    python demos/beam_patterns.py [outdir]
"""

import sys
from pathlib import Path

import numpy as np

from ambigraph import solve, standard_graph, uniform_scene
from ambigraph.beamform import beam_pattern
from ambigraph.svg import Series, write


def main(outdir="demo_out"):
    out = Path(outdir)
    out.mkdir(parents=True, exist_ok=True)
    scene = uniform_scene(3, 3)
    grid = np.deg2rad(np.linspace(-90, 90, 721))
    for kind in ("complete", "path"):
        res = solve(scene, standard_graph(3, kind))
        print(f"{kind:>8}: worst-case gain {res.objective_db:+.4f} dB ({res.status})")
        series = [
            Series(np.rad2deg(grid), beam_pattern(res.R, scene, k, grid), f"target {k}")
            for k in range(scene.n_targets)
        ]
        write(out / f"pattern_{kind}.svg", series, xlabel="azimuth (deg)", ylabel="|a_k^H R a(theta)|",
              title=f"{kind} graph", markers=np.rad2deg(scene.azimuths))
    print(f"patterns written to {out}/")


if __name__ == "__main__":
    main(*sys.argv[1:])
