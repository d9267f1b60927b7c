import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from ambigraph.gating import confusion_table
from ambigraph.graph import AmbiguityGraph, standard_graph
from ambigraph.scene import uniform_scene
from ambigraph.tradeoff import (
    TradeoffOptions,
    TradeoffPoint,
    bound_C,
    concave_envelope,
    dominates,
    estimate_C,
    evaluate,
    exhaustive,
    pareto_filter,
    sweep,
)

PHI1 = 0.8413447460685429


def pt(P, C, name=0):
    return TradeoffPoint(AmbiguityGraph(2, name), P, C, 0.0, "optimal")


def test_complete_graph_is_certain():
    s = uniform_scene(3, 3, tau_mean=[0, 0.1, 0.2])
    assert estimate_C(s, standard_graph(3, "complete"), 2000) == (1.0, 0.0)


def test_identical_priors_never_separate():
    s = uniform_scene(2, 2)
    assert estimate_C(s, standard_graph(2, "empty"), 2000)[0] == 0.0


def test_phi1_squared():
    s = uniform_scene(2, 2, tau_mean=[0.0, 2.0])
    c, se = estimate_C(s, standard_graph(2, "empty"), 1_000_000, seed=3)
    assert abs(c - PHI1**2) <= 4 * se
    assert PHI1**2 == pytest.approx(0.7079, abs=1e-4)


def test_bound_examples():
    s = uniform_scene(2, 2, tau_mean=[0.0, 2.0])
    t = confusion_table(s, "analytic")
    assert bound_C(s, standard_graph(2, "empty"), t) == pytest.approx(1 - 4 * (1 - PHI1), abs=1e-12)
    # the four-digit figure 0.3651 comes from rounding Phi(1) to 0.8413 first
    assert bound_C(s, standard_graph(2, "empty"), t) == pytest.approx(0.3651, abs=5e-4)
    assert bound_C(s, standard_graph(2, "complete"), t) == 1.0
    s = uniform_scene(3, 3)
    assert bound_C(s, standard_graph(3, "empty"), confusion_table(s, "analytic")) == 1 - 9 * 0.5
    # a table claiming certain confusion hits the lower clip
    p = np.zeros((3, 3))
    np.fill_diagonal(p, np.nan)
    assert bound_C(s, standard_graph(3, "empty"), p) == 1 - 9


@st.composite
def prior_scenes(draw):
    K = draw(st.integers(2, 4))
    tau = draw(st.lists(st.floats(-3, 3), min_size=K, max_size=K))
    om = draw(st.lists(st.floats(-3, 3), min_size=K, max_size=K))
    return uniform_scene(3, K, tau_mean=tau, omega_mean=om, tau_std=draw(st.floats(0.3, 2)))


@given(prior_scenes(), st.integers(0, 63))
def test_bound_below_estimate(scene, code):
    K = scene.n_targets
    g = AmbiguityGraph(K, code % (1 << K * (K - 1) // 2))
    c, se = estimate_C(scene, g, 5000, seed=1)
    assert bound_C(scene, g, confusion_table(scene, "analytic")) <= c + 4 * se + 1e-12


@given(prior_scenes(), st.integers(0, 63), st.integers(0, 63))
def test_estimate_monotone_in_edges(scene, c1, c2):
    K = scene.n_targets
    m = (1 << K * (K - 1) // 2) - 1
    small, big = AmbiguityGraph(K, c1 & c2 & m), AmbiguityGraph(K, (c1 | c2) & m)
    # common random numbers make this exact rather than statistical
    assert estimate_C(scene, big, 4000)[0] >= estimate_C(scene, small, 4000)[0]


def test_min_samples():
    with pytest.raises(ValueError):
        estimate_C(uniform_scene(2, 2), standard_graph(2, "empty"), 10)


def test_pareto_examples():
    a = pt(1.0, 0.5)
    assert pareto_filter([a]) == [a]
    b = pt(2.0, 0.9)
    c = pt(0.5, 0.2)
    assert pareto_filter([a, b]) == [b]
    hi_p, hi_c, mid = pt(3.0, 0.1), pt(0.5, 0.9), pt(0.4, 0.05)
    assert pareto_filter([hi_p, mid, hi_c]) == [hi_p, hi_c]
    tie = pt(3.0, 0.1, 1)
    assert pareto_filter([hi_p, tie]) == [hi_p, tie]
    assert not dominates(hi_p, tie)
    assert pareto_filter([a, c]) == [a]


@given(st.lists(st.tuples(st.floats(0, 10), st.floats(0, 1)), min_size=1, max_size=30))
def test_pareto_is_dominance_free_and_complete(raw):
    pts = [pt(P, C) for P, C in raw]
    front = pareto_filter(pts)
    for p in front:
        assert not any(dominates(q, p) for q in pts)
    for p in pts:
        if p not in front:
            assert any(dominates(q, p) for q in front)


def test_concave_envelope():
    pts = [pt(0.0, 1.0), pt(1.0, 0.5), pt(2.0, 0.1), pt(1.0, 0.9), pt(3.0, 0.0)]
    hull = concave_envelope(pts)
    coords = [(p.power_gain, p.assoc_prob) for p in hull]
    assert coords[0] == (0.0, 1.0) and coords[-1] == (3.0, 0.0)
    assert (1.0, 0.9) in coords and (1.0, 0.5) not in coords


def chain():
    return uniform_scene(4, 4, tau_mean=[0.0, 2.0, 4.0, 6.0])


def test_sweep_endpoints_and_monotonicity():
    s = chain()
    pts = sweep(s, TradeoffOptions(n_samples=20_000))
    assert pts[0].graph == standard_graph(4, "empty") and pts[0].gamma == 0.0
    assert pts[-1].graph == standard_graph(4, "complete") and pts[-1].assoc_prob == 1.0
    for a, b in zip(pts, pts[1:]):
        assert a.graph.is_subgraph_of(b.graph)
        assert b.assoc_prob >= a.assoc_prob
        assert b.power_gain <= a.power_gain + 1e-6


def test_exhaustive_counts_and_determinism():
    s = uniform_scene(3, 2, tau_mean=[0.0, 2.0])
    opts = TradeoffOptions(n_samples=5000)
    pts = exhaustive(s, opts)
    assert len(pts) == 2
    assert pts[0] == evaluate(s, standard_graph(2, "empty"), opts)
    with pytest.raises(ValueError):
        exhaustive(uniform_scene(6, 6), opts)


def test_infeasible_points_are_kept():
    s = uniform_scene(2, 3, tau_mean=[0, 2, 4])
    pts = exhaustive(s, TradeoffOptions(n_samples=2000))
    assert len(pts) == 8
    bad = [p for p in pts if p.infeasible]
    assert bad and all(p.power_gain == 0.0 for p in bad)


def test_parallel_matches_serial():
    s = uniform_scene(3, 3, tau_mean=[0.0, 2.0, 4.0])
    serial = exhaustive(s, TradeoffOptions(n_samples=2000))
    parallel = exhaustive(s, TradeoffOptions(n_samples=2000, n_jobs=2))
    assert [(p.graph, p.assoc_prob) for p in serial] == [(p.graph, p.assoc_prob) for p in parallel]
    np.testing.assert_allclose([p.power_gain for p in serial], [p.power_gain for p in parallel], rtol=1e-9)
