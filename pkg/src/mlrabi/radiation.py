"""Radiation basis: the coupling-matrix SVD turned into effective two-level Rabi models.

Radiation states are |G_k> = sum_j conj(u[k, j]) |g_j> and
|E_k> = sum_i conj(v[k, i]) |e_i>, so the interaction becomes
sum_k lambda_k (|G_k><E_k| + h.c.)(a + a^dagger).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionError
from .model import (
    DoubletBasis,
    HamiltonianMatrix,
    ModelSpec,
    assemble_product_hamiltonian,
    atomic_doublet_matrix,
)
from .spectral import SvdResult, svd


class DoubletNotExactError(ValueError):
    """The requested direct-sum reduction only holds for degenerate manifolds."""


@dataclass(frozen=True, eq=False)
class RadiationDecomposition:
    svd: SvdResult
    effective_couplings: np.ndarray
    dark_excited_count: int
    dark_ground_count: int
    detuning_excited_block: np.ndarray
    detuning_ground_block: np.ndarray

    @property
    def n_excited(self) -> int:
        return self.svd.v.shape[0]

    @property
    def n_ground(self) -> int:
        return self.svd.u.shape[0]

    def ground_states(self) -> np.ndarray:
        """Columns are |G_k> in bare ground amplitudes."""
        return self.svd.u.conj().T

    def excited_states(self) -> np.ndarray:
        """Columns are |E_k> in bare excited amplitudes."""
        return self.svd.v.conj().T

    def dark_excited_states(self) -> np.ndarray:
        r = self.effective_couplings.size
        return self.excited_states()[:, r:]


def _hermitize(a: np.ndarray) -> np.ndarray:
    return 0.5 * (a + a.conj().T)


def to_radiation_basis(spec: ModelSpec) -> RadiationDecomposition:
    res = svd(spec.coupling)
    n, m = spec.n_excited, spec.n_ground
    excited = res.v @ np.diag(spec.epsilon * spec.delta_e) @ res.v.conj().T
    ground = res.u @ np.diag(spec.epsilon * spec.delta_g) @ res.u.conj().T
    return RadiationDecomposition(
        svd=res,
        effective_couplings=res.singular_values.copy(),
        dark_excited_count=max(n - m, 0),
        dark_ground_count=max(m - n, 0),
        detuning_excited_block=_hermitize(excited),
        detuning_ground_block=_hermitize(ground),
    )


def _check(decomp: RadiationDecomposition, spec: ModelSpec) -> None:
    if decomp.n_excited != spec.n_excited or decomp.n_ground != spec.n_ground:
        raise DimensionError(
            f"decomposition is {decomp.n_excited}x{decomp.n_ground}, "
            f"model is {spec.n_excited}x{spec.n_ground}"
        )


def radiation_labels(spec: ModelSpec) -> list[str]:
    return [f"G{k + 1}" for k in range(spec.n_ground)] + [
        f"E{k + 1}" for k in range(spec.n_excited)
    ]


def assemble_radiation_hamiltonian(
    decomp: RadiationDecomposition, spec: ModelSpec
) -> HamiltonianMatrix:
    """Full Hamiltonian in the radiation basis (atomic order G_1..G_m, E_1..E_n)."""
    _check(decomp, spec)
    m, n = spec.n_ground, spec.n_excited
    energy = np.zeros((m + n, m + n), dtype=complex)
    energy[:m, :m] = decomp.detuning_ground_block
    energy[m:, m:] = spec.omega * np.eye(n) + decomp.detuning_excited_block
    coupling = np.zeros((m + n, m + n), dtype=complex)
    s = decomp.svd.pseudo_diagonal()
    coupling[:m, m:] = s
    coupling[m:, :m] = s.T
    h = assemble_product_hamiltonian(energy, coupling, spec.omega, spec.fock_cutoff)
    basis = tuple((lab, k) for lab in radiation_labels(spec) for k in range(spec.fock_cutoff + 1))
    return HamiltonianMatrix(h, basis, spec.fock_cutoff)


def doublet_atomic(decomp: RadiationDecomposition, spec: ModelSpec) -> np.ndarray:
    """Atomic radiation-basis doublet operator, expressed in the bare atomic basis."""
    _check(decomp, spec)
    return atomic_doublet_matrix(spec, DoubletBasis.RADIATION, decomp)


def effective_rabi_models(
    decomp: RadiationDecomposition, spec: ModelSpec
) -> list[tuple[float, float]]:
    """(coupling, omega) of the min(n, m) embedded two-level Rabi models.

    Exact only for degenerate manifolds; raises DoubletNotExactError when
    epsilon != 0.
    """
    _check(decomp, spec)
    if spec.epsilon != 0.0:
        raise DoubletNotExactError(
            "detunings mix doublet types; diagonalize the full model instead"
        )
    return [(float(lam), spec.omega) for lam in decomp.effective_couplings]


def dark_ladders(spec: ModelSpec) -> np.ndarray:
    """Energies of the uncoupled radiation states at epsilon = 0, same cutoff as ``spec``.

    Excited dark states sit at omega * (k + 1), ground dark states at omega * k.
    """
    ks = np.arange(spec.fock_cutoff + 1, dtype=float)
    parts = [spec.omega * (ks + 1)] * max(spec.n_excited - spec.n_ground, 0)
    parts += [spec.omega * ks] * max(spec.n_ground - spec.n_excited, 0)
    return np.concatenate(parts) if parts else np.empty(0)
