import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from ambigraph.assoc import Assigned, ErrorMultiple, ErrorNone, associate, candidates
from ambigraph.graph import AmbiguityGraph, standard_graph
from ambigraph.scene import uniform_scene
from ambigraph.waveform import Detection


def scene3():
    return uniform_scene(3, 3, tau_mean=[0.0, 5.0, 10.0])


def at_means(scene, mag=1.0):
    return [Detection(t.tau_mean, t.omega_mean, k, mag) for k, t in enumerate(scene.targets)]


def test_all_assigned_at_means():
    s = scene3()
    out = associate(at_means(s), s, standard_graph(3, "empty"))
    assert out.all_assigned
    assert [r.detection.filter_index for r in out.tracks] == [0, 1, 2]


def test_missing_detection_is_error_none():
    s = scene3()
    dets = at_means(s)
    dets[1] = Detection(5.0, 0.0, 1, 0.5)
    out = associate(dets, s, standard_graph(3, "empty"), threshold=0.5)
    assert isinstance(out[1], ErrorNone)
    assert isinstance(out[0], Assigned)


def test_threshold_is_strict():
    s = scene3()
    out = associate(at_means(s, 1.0), s, standard_graph(3, "empty"), threshold=1.0)
    assert out.summary() == ["ErrorNone"] * 3


def test_midpoint_in_neither_gate():
    s = uniform_scene(2, 2, tau_mean=[0.0, 2.0])
    dets = [Detection(1.0, 0.0, 0, 1.0), Detection(1.0, 0.0, 1, 1.0)]
    out = associate(dets, s, standard_graph(2, "empty"))
    assert out.summary() == ["ErrorNone", "ErrorNone"]


def test_complete_graph_ignores_position():
    s = scene3()
    rng = np.random.default_rng(0)
    dets = [Detection(*rng.normal(0, 50, 2), k, 1.0) for k in range(3)]
    assert associate(dets, s, standard_graph(3, "complete")).all_assigned


def test_two_in_gate_is_error_multiple():
    s = scene3()
    dets = at_means(s) + [Detection(0.5, 0.0, 0, 1.0)]
    out = associate(dets, s, standard_graph(3, "empty"))
    assert isinstance(out[0], ErrorMultiple) and len(out[0].candidates) == 2


def test_invalid_filter_index():
    s = scene3()
    with pytest.raises(ValueError):
        associate([Detection(0, 0, 3, 1.0)], s, standard_graph(3, "empty"))
    with pytest.raises(ValueError):
        Detection(0, 0, 0, -1.0)


@given(st.integers(0, 7), st.integers(0, 7), st.data())
def test_candidates_monotone_in_edges(c1, c2, data):
    s = scene3()
    small, big = AmbiguityGraph(3, c1 & c2), AmbiguityGraph(3, c1 | c2)
    raw = data.draw(st.lists(st.tuples(st.floats(-5, 15), st.floats(-3, 3), st.integers(0, 2)), max_size=12))
    dets = [Detection(t, w, k, 1.0) for t, w, k in raw]
    for k in range(3):
        assert set(candidates(dets, k, s, small, 0.0)) <= set(candidates(dets, k, s, big, 0.0))


def test_deterministic():
    s = scene3()
    dets = at_means(s) + [Detection(4.0, 0.0, 1, 2.0)]
    g = standard_graph(3, "path")
    assert associate(dets, s, g) == associate(list(dets), s, g)
