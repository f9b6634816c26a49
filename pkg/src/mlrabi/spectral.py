"""Dense Hermitian eigensolver, phase-fixed SVD and Fock-cutoff convergence control."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Optional, Union

import numpy as np
import scipy.linalg

from .errors import ConvergenceError, DimensionError, PrecisionError
from .model import (
    HamiltonianMatrix,
    ModelSpec,
    atomic_expectations,
    build_hamiltonian,
    build_parity,
    check_hermitian,
)

log = logging.getLogger(__name__)

DEFAULT_MAX_CUTOFF = 2**10

EIG_RESIDUAL_RTOL = 1e-9


def _as_array(matrix: Union[HamiltonianMatrix, np.ndarray]) -> np.ndarray:
    return matrix.entries if isinstance(matrix, HamiltonianMatrix) else np.asarray(matrix)


def eigendecompose(
    matrix: Union[HamiltonianMatrix, np.ndarray], check_residual: bool = True
) -> tuple[np.ndarray, np.ndarray]:
    """Full eigendecomposition of a Hermitian matrix, eigenvalues ascending.

    Raises NotHermitianError for non-Hermitian input, ConvergenceError when
    LAPACK fails, and PrecisionError if any pair violates
    ||H v - E v|| <= 1e-9 ||H||.
    """
    h = _as_array(matrix)
    check_hermitian(h)
    try:
        evals, evecs = scipy.linalg.eigh(h, check_finite=True)
    except (np.linalg.LinAlgError, scipy.linalg.LinAlgError) as exc:
        raise ConvergenceError(f"eigensolver failed: {exc}") from exc
    if check_residual and h.size:
        scale = np.linalg.norm(h, 2) if h.shape[0] <= 64 else np.linalg.norm(h, "fro")
        res = np.linalg.norm(h @ evecs - evecs * evals, axis=0)
        worst = float(res.max())
        if worst > EIG_RESIDUAL_RTOL * max(scale, 1.0):
            raise PrecisionError(f"eigenpair residual {worst:.3e} exceeds contract")
    return evals, evecs


def sector_eigh(
    h: np.ndarray, parity: np.ndarray, n_levels: Optional[int] = None, vectors: bool = True
):
    """Diagonalize separately inside the +1 and -1 blocks of a diagonal parity.

    Returns (eigenvalues, eigenvectors or None, parities), merged and sorted
    ascending; ``n_levels`` keeps only the lowest levels.  Splitting by parity
    makes every eigenvector a parity eigenstate even at exact degeneracies.
    """
    parts = []
    for sign in (1.0, -1.0):
        idx = np.flatnonzero(parity == sign)
        if idx.size == 0:
            continue
        block = h[np.ix_(idx, idx)]
        top = idx.size if n_levels is None else min(n_levels, idx.size)
        try:
            if vectors:
                w, v = scipy.linalg.eigh(block, subset_by_index=(0, top - 1))
            else:
                w = scipy.linalg.eigh(block, eigvals_only=True, subset_by_index=(0, top - 1))
                v = None
        except (np.linalg.LinAlgError, scipy.linalg.LinAlgError) as exc:
            raise ConvergenceError(f"eigensolver failed: {exc}") from exc
        parts.append((sign, idx, w, v))

    evals = np.concatenate([p[2] for p in parts])
    signs = np.concatenate([np.full(p[2].size, p[0]) for p in parts])
    order = np.argsort(evals, kind="stable")
    if n_levels is not None:
        order = order[:n_levels]
    evecs = None
    if vectors:
        cols = []
        for sign, idx, w, v in parts:
            full = np.zeros((h.shape[0], w.size), dtype=complex)
            full[idx, :] = v
            cols.append(full)
        evecs = np.concatenate(cols, axis=1)[:, order]
    return evals[order], evecs, signs[order].astype(int)


@dataclass(frozen=True, eq=False)
class SvdResult:
    """Singular value decomposition of a coupling matrix.

    With the coupling read as the ground x excited matrix M = Lambda^T
    (element M[j, i] couples g_j to e_i), ``M = u^dagger @ S @ v`` where S is the
    m x n pseudo-diagonal matrix of ``singular_values``.  Row k of ``u`` maps
    bare ground amplitudes to the amplitude of radiation state G_k, row k of
    ``v`` does the same for E_k.
    """

    u: np.ndarray
    v: np.ndarray
    singular_values: np.ndarray

    def pseudo_diagonal(self) -> np.ndarray:
        m, n = self.u.shape[0], self.v.shape[0]
        s = np.zeros((m, n))
        r = self.singular_values.size
        s[np.arange(r), np.arange(r)] = self.singular_values
        return s

    def reconstruct(self) -> np.ndarray:
        """Return Lambda (n x m) rebuilt from the factors."""
        return (self.u.conj().T @ self.pseudo_diagonal() @ self.v).T


def _phase_fix(vec: np.ndarray) -> complex:
    """Phase that makes the largest-magnitude entry real positive (lowest index on ties)."""
    mag = np.abs(vec)
    top = mag.max()
    if top == 0.0:
        return 1.0
    idx = int(np.flatnonzero(mag >= top * (1.0 - 1e-12))[0])
    return vec[idx] / mag[idx]


def _lex_key(vec: np.ndarray) -> tuple:
    return tuple(np.column_stack([vec.real, vec.imag]).ravel())


def svd(coupling: np.ndarray, degeneracy_rtol: float = 1e-12) -> SvdResult:
    """Phase-fixed SVD of an n x m coupling matrix.

    Each ground singular vector is rotated so its largest-magnitude entry is
    real and positive, with the excited partner co-rotated.  Inside clusters of
    singular values equal to ``degeneracy_rtol * max`` the pairs are ordered by
    descending lexicographic comparison of the rotated ground vectors.
    """
    lam = np.asarray(coupling, dtype=complex)
    if lam.ndim != 2:
        raise DimensionError(f"coupling must be a matrix, got shape {lam.shape}")
    if not np.all(np.isfinite(lam)):
        raise ValueError("coupling has non-finite entries")
    n, m = lam.shape
    gvec, s, wh = np.linalg.svd(lam.T)  # lam.T = gvec @ S @ wh
    gvec = gvec.copy()
    wh = wh.copy()
    r = s.size

    for k in range(m):
        ph = _phase_fix(gvec[:, k])
        gvec[:, k] = gvec[:, k] / ph
        if k < r:
            wh[k, :] = wh[k, :] * ph
    for k in range(r, n):
        ph = _phase_fix(wh[k, :].conj())
        wh[k, :] = wh[k, :] * ph

    if r:
        tol = degeneracy_rtol * s[0]
        start = 0
        while start < r:
            stop = start + 1
            while stop < r and s[start] - s[stop] <= tol:
                stop += 1
            if stop - start > 1:
                block = list(range(start, stop))
                order = sorted(block, key=lambda k: _lex_key(gvec[:, k]), reverse=True)
                gvec[:, block] = gvec[:, order]
                wh[block, :] = wh[order, :]
            start = stop

    return SvdResult(u=gvec.conj().T, v=wh, singular_values=s)


@dataclass(frozen=True, eq=False)
class SpectrumResult:
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    parities: np.ndarray
    doublet_expectations: Optional[np.ndarray]
    cutoff_used: int
    converged: bool
    residual: float


def diagonalize(
    spec: ModelSpec,
    n_levels: Optional[int] = None,
    doublet_atomic: Optional[np.ndarray] = None,
) -> SpectrumResult:
    """Lowest ``n_levels`` eigenpairs at the spec's own cutoff (no convergence check)."""
    h = build_hamiltonian(spec).entries
    parity = build_parity(spec).diagonal
    evals, evecs, signs = sector_eigh(h, parity, n_levels)
    dexp = None
    if doublet_atomic is not None:
        dexp = atomic_expectations(doublet_atomic, evecs, spec.fock_cutoff)
    return SpectrumResult(evals, evecs, signs, dexp, spec.fock_cutoff, False, float("nan"))


def converge_spectrum(
    spec: ModelSpec,
    n_levels: int,
    tol: float = 1e-8,
    max_cutoff: int = DEFAULT_MAX_CUTOFF,
    doublet_atomic: Optional[np.ndarray] = None,
) -> SpectrumResult:
    """Double the Fock cutoff until the lowest ``n_levels`` energies settle.

    Starting from ``spec.fock_cutoff``, the cutoff is doubled until the
    tracked eigenvalues move by less than ``tol * omega`` between successive
    cutoffs.  The result at the final cutoff is returned; if the next doubling
    would pass ``max_cutoff`` the last result comes back with
    ``converged=False``.
    """
    if n_levels < 1:
        raise ValueError("n_levels must be >= 1")
    if tol <= 0:
        raise ValueError("tol must be positive")
    if n_levels > spec.dim:
        raise ValueError(f"n_levels={n_levels} exceeds the dimension {spec.dim}")

    cutoff = spec.fock_cutoff
    previous = _lowest(spec.with_cutoff(cutoff), n_levels)
    residual = float("inf")
    while 2 * cutoff <= max_cutoff:
        cutoff *= 2
        current = _lowest(spec.with_cutoff(cutoff), n_levels)
        residual = float(np.max(np.abs(current - previous)))
        previous = current
        if residual < tol * spec.omega:
            res = diagonalize(spec.with_cutoff(cutoff), n_levels, doublet_atomic)
            return SpectrumResult(
                res.eigenvalues, res.eigenvectors, res.parities, res.doublet_expectations,
                cutoff, True, residual,
            )
    log.warning("spectrum not converged at cutoff %d (residual %.3e)", cutoff, residual)
    res = diagonalize(spec.with_cutoff(cutoff), n_levels, doublet_atomic)
    return SpectrumResult(
        res.eigenvalues, res.eigenvectors, res.parities, res.doublet_expectations,
        cutoff, False, residual,
    )


def _lowest(spec: ModelSpec, n_levels: int) -> np.ndarray:
    h = build_hamiltonian(spec).entries
    evals, _, _ = sector_eigh(h, build_parity(spec).diagonal, n_levels, vectors=False)
    return evals
