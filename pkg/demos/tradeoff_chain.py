"""Power gain versus association probability for four targets in a chain.

Targets are staggered in delay, so only neighbors in the chain are likely
to be confused. The threshold sweep is compared with every labeled graph.

    python demos/tradeoff_chain.py [n_samples]
"""

import sys

from ambigraph import TradeoffOptions, exhaustive, pareto_filter, sweep, uniform_scene
from ambigraph.tradeoff import concave_envelope


def main(n_samples=20_000):
    scene = uniform_scene(4, 4, tau_mean=[0.0, 2.0, 4.0, 6.0])
    opts = TradeoffOptions(n_samples=int(n_samples), seed=0)
    print("threshold sweep")
    for p in sweep(scene, opts):
        print(f"  gamma {p.gamma:.3f}  edges {p.graph.n_edges}  P {p.power_gain_db:+7.3f} dB  C {p.assoc_prob:.4f}")
    cloud = exhaustive(scene, opts)
    front = pareto_filter(cloud)
    hull = concave_envelope(cloud)
    print(f"exhaustive: {len(cloud)} graphs, {len(front)} on the Pareto front, {len(hull)} envelope vertices")
    for p in hull:
        print(f"  {p.graph.to_text() or '(no edges)':<24} P {p.power_gain_db:+7.3f} dB  C {p.assoc_prob:.4f}")


if __name__ == "__main__":
    main(*sys.argv[1:])
