import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.stats import norm

from ambigraph.gating import (
    ClosedFormUnavailable,
    RectGate,
    aa_gate_mask,
    confusion_prob,
    confusion_table,
    in_aa_gate,
    in_pairwise_set,
    rect_gate,
)
from ambigraph.graph import AmbiguityGraph, standard_graph
from ambigraph.scene import uniform_scene

PHI1 = 0.8413447460685429  # Phi(1)


def two_targets(sep=2.0, **kw):
    return uniform_scene(2, 2, tau_mean=[0.0, sep], **kw)


def test_rect_gate_three_sigma():
    s = uniform_scene(2, 1, tau_mean=1.0, tau_std=0.5, omega_std=2.0)
    g = rect_gate(s.targets[0])
    assert (g.tau_lo, g.tau_hi, g.omega_lo, g.omega_hi) == (-0.5, 2.5, -6.0, 6.0)
    assert g.contains((2.5, 6.0)) and not g.contains((2.51, 0.0))
    with pytest.raises(ValueError):
        RectGate(1, 0, 0, 1)


def test_pairwise_set_strict_at_midpoint():
    s = two_targets()
    assert not in_pairwise_set((1.0, 0.0), 0, 1, s)
    assert not in_pairwise_set((1.0, 0.0), 1, 0, s)
    assert in_pairwise_set((0.99, 0.0), 0, 1, s)


def test_complete_graph_gate_is_whole_plane():
    s = uniform_scene(3, 3, tau_mean=[0, 1, 2])
    pts = np.random.default_rng(0).normal(size=(50, 2)) * 100
    assert aa_gate_mask(pts, 1, standard_graph(3, "complete"), s).all()


def test_confusion_analytic_phi1():
    p, se = confusion_prob(0, 1, two_targets(), "analytic")
    assert p == pytest.approx(PHI1, abs=1e-15) and se == 0.0


def test_confusion_mc_matches_closed_form():
    p, se = confusion_prob(0, 1, two_targets(), "monte-carlo", n_samples=1_000_000, seed=7)
    assert abs(p - PHI1) <= 4 * se


def test_confusion_anisotropic_mahalanobis():
    s = uniform_scene(2, 2, tau_mean=[0, 1], omega_mean=[0, 3], tau_std=0.5, omega_std=2.0)
    d = np.hypot(1 / 0.5, 3 / 2.0)
    assert confusion_prob(1, 0, s)[0] == pytest.approx(norm.cdf(d / 2), abs=1e-14)


def test_closed_form_needs_shared_covariance():
    s = uniform_scene(2, 2, tau_mean=[0, 1], tau_std=[1.0, 2.0])
    with pytest.raises(ClosedFormUnavailable):
        confusion_prob(0, 1, s, "analytic")
    t = confusion_table(s, "auto", n_samples=20_000)
    assert t.method == "monte-carlo"
    assert np.isnan(t[0, 0]) and 0.5 < t[0, 1] < 1


def test_mc_is_reproducible():
    s = two_targets()
    assert confusion_prob(0, 1, s, "monte-carlo", 5000, seed=3) == confusion_prob(0, 1, s, "monte-carlo", 5000, seed=3)


@given(st.integers(0, 63), st.integers(0, 63), st.data())
def test_gate_monotone_in_edges(c1, c2, data):
    """Adding edges removes rivals, so every gate can only grow."""
    s = uniform_scene(4, 4, tau_mean=[0, 1, 2.5, 4], omega_mean=[0, 1, -1, 0.5])
    small = AmbiguityGraph(4, c1 & c2)
    big = AmbiguityGraph(4, c1 | c2)
    pts = np.array(data.draw(st.lists(st.tuples(st.floats(-3, 7), st.floats(-3, 3)), min_size=1, max_size=20)))
    for k in range(4):
        assert np.all(aa_gate_mask(pts, k, big, s) >= aa_gate_mask(pts, k, small, s))


def test_in_aa_gate_scalar():
    s = two_targets()
    g = standard_graph(2, "empty")
    assert in_aa_gate((0.0, 0.0), 0, g, s) and not in_aa_gate((0.0, 0.0), 1, g, s)
