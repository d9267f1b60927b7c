import numpy as np
import pytest

from ambigraph import sdp


def test_hermitian_basis_is_orthonormal():
    for n in (1, 2, 4):
        B = sdp.hermitian_basis(n)
        gram = np.einsum("inm,jnm->ij", B.conj(), B).real
        np.testing.assert_allclose(gram, np.eye(n * n), atol=1e-14)
        np.testing.assert_allclose(B, B.conj().transpose(0, 2, 1))


def test_real_embedding_preserves_spectrum():
    rng = np.random.default_rng(0)
    X = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
    H = X @ X.conj().T
    ev = np.linalg.eigvalsh(H)
    np.testing.assert_allclose(np.sort(np.linalg.eigvalsh(sdp.real_embedding(H))), np.sort(np.repeat(ev, 2)), atol=1e-12)


def _toy_program():
    # maximize min(x0, x1) over diag(x0, x1) >= 0, x0 + x1 = 1: optimum 1/2
    B = sdp.hermitian_basis(2)[:2]
    return sdp.ConeProgram(
        gains=np.eye(2), trace=np.ones(2), lmi=sdp.real_embedding(B)
    )


def test_toy_program_kkt():
    prog = _toy_program()
    sol = sdp.solve_cone_program(prog)
    assert sol.status == "solved"
    assert sol.t == pytest.approx(0.5, abs=1e-8)
    assert sdp.kkt_residual(prog, sol) < 1e-7


def test_kkt_detects_bad_duals():
    prog = _toy_program()
    sol = sdp.solve_cone_program(prog)
    sol.lam = sol.lam * 2
    assert sdp.kkt_residual(prog, sol) > 0.1


def test_unknown_backend():
    with pytest.raises(ValueError):
        sdp.solve_cone_program(_toy_program(), backend="nope")


def test_min_cap_separates_feasible_and_infeasible():
    # caps on a single off-diagonal coordinate: it can be driven to zero
    B = sdp.hermitian_basis(2)
    socs = np.zeros((1, 2, 4))
    socs[0, 0, 2] = 1.0
    s, x = sdp.min_cap(socs, np.einsum("inn->i", B).real, sdp.real_embedding(B))
    assert s < 1e-7
    # capping x0 + x1, which the trace constraint pins to 1
    socs = np.zeros((1, 2, 4))
    socs[0, 0, :2] = 1.0
    s, _ = sdp.min_cap(socs, np.einsum("inn->i", B).real, sdp.real_embedding(B))
    assert s == pytest.approx(1.0, abs=1e-6)
