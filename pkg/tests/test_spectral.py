import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import random_coupling
from oracles import juddian_coupling_first, qrm_levels
from mlrabi.errors import DimensionError, NotHermitianError, PrecisionError
from mlrabi.model import ModelSpec, build_hamiltonian, build_parity
from mlrabi.spectral import (
    converge_spectrum,
    diagonalize,
    eigendecompose,
    sector_eigh,
    svd,
)


def test_eigendecompose_matches_numpy(rng):
    a = random_coupling(rng, 30, 30)
    h = a + a.conj().T
    w, v = eigendecompose(h)
    np.testing.assert_allclose(w, np.linalg.eigvalsh(h), atol=1e-12)
    np.testing.assert_allclose(v.conj().T @ v, np.eye(30), atol=1e-12)
    assert np.all(np.diff(w) >= 0)


def test_eigendecompose_rejects_non_hermitian():
    with pytest.raises(NotHermitianError):
        eigendecompose(np.array([[0.0, 1.0], [0.5, 0.0]]))


def test_eigendecompose_residual_contract(monkeypatch):
    import scipy.linalg

    h = np.diag([1.0, 2.0])
    monkeypatch.setattr(scipy.linalg, "eigh", lambda *a, **k: (np.array([1.0, 2.5]), np.eye(2)))
    with pytest.raises(PrecisionError):
        eigendecompose(h)


@given(st.integers(0, 2**31), st.integers(1, 3), st.integers(1, 3))
def test_sector_eigh_equals_full(seed, n, m):
    rng = np.random.default_rng(seed)
    spec = ModelSpec(n, m, random_coupling(rng, n, m), fock_cutoff=5, epsilon=0.1,
                     delta_e=rng.uniform(-1, 1, n), delta_g=rng.uniform(-1, 1, m))
    h = build_hamiltonian(spec).entries
    p = build_parity(spec).diagonal
    w, v, s = sector_eigh(h, p)
    np.testing.assert_allclose(w, np.linalg.eigvalsh(h), atol=1e-11)
    np.testing.assert_allclose(np.linalg.norm(h @ v - v * w, axis=0), 0, atol=1e-10)
    # every vector is a parity eigenstate with the reported sign
    np.testing.assert_allclose((np.abs(v) ** 2 * p[:, None]).sum(axis=0), s, atol=1e-12)


def test_qrm_against_explicit_matrix():
    for lam in (0.1, 0.5, 1.0):
        res = diagonalize(ModelSpec.qrm(lam, 40), 10)
        np.testing.assert_allclose(res.eigenvalues, qrm_levels(lam, 40)[:10], atol=1e-12)


def test_qrm_weak_coupling_perturbation():
    # second order: ground level shifts by -lam^2 / (2 omega) when atom and field are resonant
    lam = 0.01
    e0 = diagonalize(ModelSpec.qrm(lam, 20), 1).eigenvalues[0]
    assert abs(e0 + lam**2 / 2) < 10 * lam**4


def test_qrm_juddian_point():
    g = juddian_coupling_first()
    res = converge_spectrum(ModelSpec.qrm(g, 16), 6, tol=1e-12)
    assert res.converged
    hits = np.abs(res.eigenvalues - (1.0 - g * g + 0.5))
    # exact crossing of opposite-parity levels at the exceptional energy
    close = np.flatnonzero(hits < 1e-10)
    assert close.size == 2
    assert set(res.parities[close]) == {1, -1}


def test_converge_spectrum_reports_cutoff():
    res = converge_spectrum(ModelSpec.qrm(1.0, 8), 4, tol=1e-10)
    assert res.converged and res.residual < 1e-10
    assert res.cutoff_used >= 16
    ref = qrm_levels(1.0, 200)[:4]
    np.testing.assert_allclose(res.eigenvalues, ref, atol=1e-9)


def test_converge_spectrum_flags_failure(caplog):
    res = converge_spectrum(ModelSpec.qrm(3.0, 4), 4, tol=1e-12, max_cutoff=16)
    assert not res.converged
    assert res.cutoff_used == 16
    assert "not converged" in caplog.text


@pytest.mark.parametrize("bad", [dict(n_levels=0), dict(n_levels=5, tol=0.0), dict(n_levels=10**6)])
def test_converge_spectrum_argument_errors(bad):
    with pytest.raises(ValueError):
        converge_spectrum(ModelSpec.qrm(0.2, 4), **bad)


# ---------------------------------------------------------------- SVD


@given(st.integers(0, 2**31), st.integers(1, 5), st.integers(1, 5))
def test_svd_reconstructs(seed, n, m):
    lam = random_coupling(np.random.default_rng(seed), n, m)
    res = svd(lam)
    np.testing.assert_allclose(res.reconstruct(), lam, atol=1e-12)
    np.testing.assert_allclose(res.u @ res.u.conj().T, np.eye(m), atol=1e-12)
    np.testing.assert_allclose(res.v @ res.v.conj().T, np.eye(n), atol=1e-12)
    np.testing.assert_allclose(res.singular_values, np.linalg.svd(lam, compute_uv=False), atol=1e-12)
    assert res.singular_values.size == min(n, m)
    assert np.all(np.diff(res.singular_values) <= 0)


@given(st.integers(0, 2**31), st.integers(1, 4), st.integers(1, 4))
def test_svd_phase_convention(seed, n, m):
    lam = random_coupling(np.random.default_rng(seed), n, m)
    res = svd(lam)
    ground = res.u.conj().T  # columns are |G_k>
    for k in range(m):
        col = ground[:, k]
        top = col[np.argmax(np.abs(col))]
        assert abs(top.imag) < 1e-12 and top.real > 0


def test_svd_is_deterministic_under_global_phase(rng):
    lam = random_coupling(rng, 3, 3)
    a, b = svd(lam), svd(lam * np.exp(0.7j))
    # a global phase only moves into the excited factor
    np.testing.assert_allclose(a.u, b.u, atol=1e-12)
    np.testing.assert_allclose(a.singular_values, b.singular_values, atol=1e-12)


def test_svd_degenerate_ordering_is_canonical():
    lam = np.eye(3)
    res = svd(lam)
    np.testing.assert_allclose(res.singular_values, 1.0)
    np.testing.assert_allclose(np.abs(res.u), np.eye(3), atol=1e-12)
    np.testing.assert_allclose(res.reconstruct(), lam, atol=1e-12)
    assert svd(lam.copy()).u.tobytes() == res.u.tobytes()


@pytest.mark.parametrize("n", [2, 3, 7, 20])
def test_svd_uniform_boost(n):
    s = svd(np.full((n, n), 0.3)).singular_values
    assert abs(s[0] - 0.3 * n) <= 1e-12 * 0.3 * n
    assert np.all(s[1:] <= 1e-12 * 0.3 * n)


def test_svd_errors():
    with pytest.raises(DimensionError):
        svd(np.ones(3))
    with pytest.raises(ValueError):
        svd(np.array([[np.inf]]))
