import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from ambigraph import beamform as bf
from ambigraph.graph import standard_graph
from ambigraph.scene import uniform_scene
from ambigraph.waveform import (
    DelayDopplerGrid,
    GridTooLarge,
    PolyphaseWaveformSet,
    ambiguity,
    condbt_check,
    detect,
    generate,
    matched_filter_sim,
    verify_theorem1,
)


def quadrature_chi(ws, n, m, dtau, dw, step):
    """Midpoint rule on pieces split at every chip edge of both signals."""
    T, B = ws.duration, ws.bandwidth
    lo, hi = max(dtau, 0.0), T + min(dtau, 0.0)
    if hi <= lo:
        return 0j
    edges = np.arange(ws.n_chips + 1) / B
    brk = np.unique(np.concatenate([[lo, hi], edges, edges + dtau]))
    brk = brk[(brk >= lo) & (brk <= hi)]
    total = 0j
    for a, b in zip(brk[:-1], brk[1:]):
        k = max(1, int(np.ceil((b - a) / step)))
        t = a + (np.arange(k) + 0.5) * (b - a) / k
        f = ws.signal(t)[n] * np.conj(ws.signal(t - dtau)[m]) * np.exp(-1j * dw * t)
        total += f.sum() * (b - a) / k
    return total


def test_generate_unit_modulus_and_determinism():
    ws = generate(3, 200.0, 0.5, seed=4)
    assert ws.chips.shape == (3, 100)
    np.testing.assert_allclose(np.abs(ws.chips), 1.0, atol=1e-12)
    np.testing.assert_array_equal(ws.chips, generate(3, 200.0, 0.5, seed=4).chips)
    assert not np.array_equal(ws.chips, generate(3, 200.0, 0.5, seed=5).chips)


def test_generate_rejects_fractional_bt():
    with pytest.raises(ValueError):
        generate(2, 100.5, 1.0)
    with pytest.raises(ValueError):
        PolyphaseWaveformSet(np.ones((1, 4)) * 2, 4.0, 1.0)


def test_energy_normalization():
    ws = generate(2, 50.0, 2.0, seed=1)
    t = (np.arange(ws.n_chips) + 0.5) / ws.bandwidth
    energy = np.sum(np.abs(ws.signal(t)) ** 2, axis=1) / ws.bandwidth
    np.testing.assert_allclose(energy, 1.0, atol=1e-12)


def test_peak_is_one():
    for seed in range(5):
        ws = generate(4, 1000.0, 1.0, seed=seed)
        for n in range(4):
            assert abs(ambiguity(ws, n, n, 0.0, 0.0) - 1.0) <= 1e-12


def test_support_beyond_duration():
    ws = generate(2, 100.0, 1.0)
    assert ambiguity(ws, 0, 1, 1.0, 3.0) == 0
    assert ambiguity(ws, 0, 1, -1.5, 3.0) == 0


def test_matches_quadrature_on_random_points():
    B, T = 64.0, 1.0
    ws = generate(2, B, T, seed=11)
    rng = np.random.default_rng(0)
    for _ in range(100):
        n, m = rng.integers(0, 2, size=2)
        dtau = rng.uniform(-T, T)
        dw = rng.uniform(-3 * np.pi * B, 3 * np.pi * B)
        ref = quadrature_chi(ws, n, m, dtau, dw, step=1 / B / 1000)
        assert abs(ambiguity(ws, n, m, dtau, dw) - ref) <= 1e-6


def test_matches_quadrature_at_chip_boundaries():
    ws = generate(2, 16.0, 1.0, seed=2)
    for dtau in (0.0, 1 / 16, 3 / 16, -5 / 16):
        for dw in (0.0, 7.0, -40.0):
            ref = quadrature_chi(ws, 0, 1, dtau, dw, step=1e-4)
            assert abs(ambiguity(ws, 0, 1, dtau, dw) - ref) <= 1e-6


@given(st.floats(-1.2, 1.2), st.floats(-2000, 2000), st.integers(0, 1), st.integers(0, 1))
def test_magnitude_bounded_by_one(dtau, dw, n, m):
    ws = generate(2, 100.0, 1.0, seed=9)
    assert abs(ambiguity(ws, n, m, dtau, dw)) <= 1 + 1e-12


@given(st.floats(-0.9, 0.9), st.floats(-500, 500))
def test_negative_delay_symmetry(dtau, dw):
    ws = generate(2, 100.0, 1.0, seed=9)
    lhs = ambiguity(ws, 0, 1, -dtau, dw)
    rhs = np.exp(1j * dw * dtau) * np.conj(ambiguity(ws, 1, 0, dtau, -dw))
    assert abs(lhs - rhs) <= 1e-12


def test_condbt_examples():
    assert condbt_check(10 ** (-23 / 10), 1e9, 1.0, 16)
    assert not condbt_check(10 ** (-24 / 10), 1e9, 1.0, 16)
    assert condbt_check(0.1, 1e7, 1.0, 1)
    assert not condbt_check(0.1, 1e3, 1.0, 2)
    with pytest.raises(ValueError):
        condbt_check(0.0, 1e3, 1.0, 2)


def test_verify_grid_matches_pointwise_evaluation():
    ws = generate(2, 100.0, 1.0, seed=3)
    delta = 0.5
    rep = verify_theorem1(ws, delta, tau_stride=7, omega_stride=13)
    q, m_max = 16, int(np.floor(np.pi * 100 / delta))
    best = max(
        abs(ambiguity(ws, 0, 1, J * delta / 800, M * delta))
        for J in range(0, q * 100, 7)
        for M in range(-m_max, m_max + 1, 13)
    )
    assert rep.pair_max[(0, 1)] == pytest.approx(best, rel=1e-9)
    assert rep.property1


def test_verify_report_consistency():
    ws = generate(2, 100.0, 1.0, seed=3)
    rep = verify_theorem1(ws, 0.5, tau_stride=4, omega_stride=4)
    assert rep.property2 == (rep.auto_max <= 0.5)
    assert rep.property3 == (rep.cross_max <= 0.5)
    assert rep.amplitude_db(0.1) == pytest.approx(-20.0)
    assert rep.power_db(0.1) == pytest.approx(-10.0)


def test_verify_guards():
    ws = generate(2, 1000.0, 1.0)
    with pytest.raises(GridTooLarge):
        verify_theorem1(ws, 0.1)
    with pytest.raises(ValueError):
        verify_theorem1(ws, 0.3)


@pytest.mark.slow
def test_autocorrelation_sidelobes_large_bt():
    # delay >= 1/B region, one sample per chip
    hits = 0
    for seed in range(3):
        ws = generate(1, 1e4, 1.0, seed=seed)
        rep = verify_theorem1(ws, 0.2, tau_stride=40 * 7, omega_stride=16)
        hits += rep.auto_max <= 0.2
    assert hits >= 2


# matched filtering ------------------------------------------------------------


def _grid():
    return DelayDopplerGrid.uniform((-2, 8), (-2, 2), 0.5, 0.5)


def test_ideal_single_target_response():
    s = uniform_scene(3, 1, tau_mean=2.0, omega_mean=0.5, rcs=0.7)
    res = bf.solve(s, standard_graph(1, "empty"))
    out = matched_filter_sim(s, res.R, None, 0.0, _grid())
    i, j = _grid().snap(2.0, 0.5)
    expected = 0.7 * 3 * res.objective
    assert out.magnitude[i, j, 0] == pytest.approx(expected, rel=1e-9)
    assert np.count_nonzero(out.magnitude) == 1


def test_zero_forced_partner_is_dark():
    s = uniform_scene(3, 3, tau_mean=[0, 2, 4])
    res = bf.solve(s, standard_graph(3, "path"))
    out = matched_filter_sim(s, res.R, None, 0.0, _grid())
    i, j = _grid().snap(2.0, 0.0)
    # filter steered at target 0 sees nothing of its neighbor 1
    assert out.magnitude[i, j, 0] <= 1e-7
    assert out.magnitude[i, j, 1] > 0.1


def test_noise_is_rayleigh():
    s = uniform_scene(2, 1)
    grid = DelayDopplerGrid.uniform((-50, 50), (-50, 50), 0.5, 0.5)
    sigma = 0.3
    out = matched_filter_sim(s, np.eye(2) / 2, None, sigma, grid, truth=[[1e6, 0.0]], seed=1)
    mag = out.magnitude.ravel()
    stderr = mag.std() / np.sqrt(mag.size)
    assert abs(mag.mean() - sigma * np.sqrt(np.pi / 2)) <= 3 * stderr


def test_detect_threshold():
    s = uniform_scene(3, 1, tau_mean=2.0)
    out = matched_filter_sim(s, np.eye(3) / 3, None, 0.0, _grid())
    assert detect(out, np.inf) == []
    dets = detect(out, 0.0)
    assert len(dets) == 1 and dets[0].tau == 2.0 and dets[0].filter_index == 0
    assert detect(out, dets[0].magnitude) == []  # strictly above


@pytest.mark.slow
def test_ideal_and_actual_agree_at_large_bt():
    s = uniform_scene(3, 3, tau_mean=[0.0, 0.3, 0.6], omega_mean=[0.0, 20.0, -20.0], tau_std=0.1, omega_std=10.0)
    res = bf.solve(s, standard_graph(3, "path"))
    ws = generate(3, 1e4, 1.0, seed=0)
    grid = DelayDopplerGrid(np.array([0.0, 0.3, 0.6]), np.array([-20.0, 0.0, 20.0]))
    ideal = matched_filter_sim(s, res.R, None, 0.0, grid)
    actual = matched_filter_sim(s, res.R, ws, 0.0, grid, ideal=False)
    for k, (tau, om) in enumerate(s.means):
        i, j = grid.snap(tau, om)
        assert actual.magnitude[i, j, k] == pytest.approx(ideal.magnitude[i, j, k], rel=0.10)
