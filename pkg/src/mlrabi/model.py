"""Multilevel Rabi model: parameters, truncated-Fock Hamiltonian and symmetry operators.

Basis convention: index = atomic_index * (fock_cutoff + 1) + photon_number with
atomic order g_1..g_m, e_1..e_n.  Every operator here is built as a Kronecker
product (atom) x (photon), so the photon index runs fastest.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, replace
from typing import Optional, Sequence

import numpy as np

from .errors import DimensionError, NotHermitianError


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, copy=True)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class ModelSpec:
    """Physical description of a multilevel Rabi model.

    ``coupling`` is the complex n x m matrix with element (i, j) coupling
    ground level g_j to excited level e_i.  Energies are in the same units as
    ``omega``; detuning vectors default to zeros.
    """

    n_excited: int
    n_ground: int
    coupling: np.ndarray
    fock_cutoff: int = 32
    omega: float = 1.0
    epsilon: float = 0.0
    delta_e: Optional[np.ndarray] = None
    delta_g: Optional[np.ndarray] = None

    def __post_init__(self):
        n, m = int(self.n_excited), int(self.n_ground)
        if n < 1 or m < 1:
            raise DimensionError(f"level counts must be positive, got n={n}, m={m}")
        object.__setattr__(self, "n_excited", n)
        object.__setattr__(self, "n_ground", m)

        lam = np.asarray(self.coupling, dtype=complex)
        if lam.ndim != 2 or lam.shape != (n, m):
            raise DimensionError(f"coupling must have shape ({n}, {m}), got {lam.shape}")
        if not np.all(np.isfinite(lam)):
            raise ValueError("coupling has non-finite entries")
        object.__setattr__(self, "coupling", _frozen(lam))

        for name, size in (("delta_e", n), ("delta_g", m)):
            d = getattr(self, name)
            d = np.zeros(size) if d is None else np.asarray(d, dtype=float).reshape(-1)
            if d.shape != (size,):
                raise DimensionError(f"{name} must have length {size}, got {d.shape[0]}")
            if np.any(np.abs(d) > 1.0) or not np.all(np.isfinite(d)):
                raise ValueError(f"{name} entries must lie in [-1, 1]")
            object.__setattr__(self, name, _frozen(d))

        if int(self.fock_cutoff) < 1:
            raise DimensionError(f"fock_cutoff must be >= 1, got {self.fock_cutoff}")
        object.__setattr__(self, "fock_cutoff", int(self.fock_cutoff))
        if not (np.isfinite(self.omega) and self.omega > 0):
            raise ValueError("omega must be a positive real number")
        if not (np.isfinite(self.epsilon) and self.epsilon >= 0):
            raise ValueError("epsilon must be a non-negative real number")
        object.__setattr__(self, "omega", float(self.omega))
        object.__setattr__(self, "epsilon", float(self.epsilon))

    @classmethod
    def qrm(cls, coupling: float, fock_cutoff: int = 32, omega: float = 1.0) -> "ModelSpec":
        """Standard two-level quantum Rabi model."""
        return cls(1, 1, np.array([[coupling]]), fock_cutoff=fock_cutoff, omega=omega)

    @property
    def n_atomic(self) -> int:
        return self.n_excited + self.n_ground

    @property
    def dim(self) -> int:
        return self.n_atomic * (self.fock_cutoff + 1)

    def with_cutoff(self, fock_cutoff: int) -> "ModelSpec":
        return replace(self, fock_cutoff=fock_cutoff)

    def with_coupling(self, coupling) -> "ModelSpec":
        return replace(self, coupling=coupling)

    def atomic_labels(self) -> list[str]:
        return [f"g{j + 1}" for j in range(self.n_ground)] + [
            f"e{i + 1}" for i in range(self.n_excited)
        ]

    def __eq__(self, other):
        if not isinstance(other, ModelSpec):
            return NotImplemented
        return (
            (self.n_excited, self.n_ground, self.fock_cutoff, self.omega, self.epsilon)
            == (other.n_excited, other.n_ground, other.fock_cutoff, other.omega, other.epsilon)
            and np.array_equal(self.coupling, other.coupling)
            and np.array_equal(self.delta_e, other.delta_e)
            and np.array_equal(self.delta_g, other.delta_g)
        )

    __hash__ = None


@dataclass(frozen=True, eq=False)
class HamiltonianMatrix:
    entries: np.ndarray
    basis_map: tuple[tuple[str, int], ...]
    fock_cutoff: int

    @property
    def dim(self) -> int:
        return self.entries.shape[0]


class SymmetryKind(enum.Enum):
    PARITY = "parity"
    DOUBLET = "doublet"
    TOTAL_EXCITATION = "total_excitation"


class DoubletBasis(enum.Enum):
    BARE = "bare"
    RADIATION = "radiation"


@dataclass(frozen=True, eq=False)
class SymmetryOperator:
    """Hermitian symmetry operator in the bare product basis.

    ``diagonal`` is set whenever the operator is diagonal in that basis, and
    lets expectation values skip the dense matrix-vector product.
    """

    kind: SymmetryKind
    entries: np.ndarray
    diagonal: Optional[np.ndarray] = None


def photon_operators(fock_cutoff: int) -> tuple[np.ndarray, np.ndarray]:
    """Return (a + a^dagger, a^dagger a) truncated to photon numbers 0..fock_cutoff."""
    k = np.arange(fock_cutoff + 1, dtype=float)
    quad = np.diag(np.sqrt(k[1:]), 1)
    quad = quad + quad.T
    return quad, np.diag(k)


def _basis_map(labels: Sequence[str], fock_cutoff: int) -> tuple[tuple[str, int], ...]:
    return tuple((lab, k) for lab in labels for k in range(fock_cutoff + 1))


def assemble_product_hamiltonian(
    atomic_energy: np.ndarray,
    atomic_coupling: np.ndarray,
    omega: float,
    fock_cutoff: int,
) -> np.ndarray:
    """H = A0 (x) 1 + Aint (x) (a + a^dagger) + omega 1 (x) a^dagger a.

    Both atomic matrices must already be Hermitian; Kronecker products with
    real symmetric photon matrices keep the result exactly Hermitian.
    """
    quad, number = photon_operators(fock_cutoff)
    n_at = atomic_energy.shape[0]
    h = np.kron(atomic_energy, np.eye(fock_cutoff + 1))
    h = h + np.kron(atomic_coupling, quad)
    h = h + omega * np.kron(np.eye(n_at), number)
    return h.astype(complex)


def atomic_matrices(spec: ModelSpec) -> tuple[np.ndarray, np.ndarray]:
    """Atomic bare-energy and interaction matrices in the order g_1..g_m, e_1..e_n."""
    m, n = spec.n_ground, spec.n_excited
    energy = np.diag(
        np.concatenate([spec.epsilon * spec.delta_g, spec.omega + spec.epsilon * spec.delta_e])
    ).astype(complex)
    coupling = np.zeros((m + n, m + n), dtype=complex)
    # <g_j| A |e_i> = Lambda_ij, <e_i| A |g_j> = conj(Lambda_ij)
    coupling[:m, m:] = spec.coupling.T
    coupling[m:, :m] = spec.coupling.conj()
    return energy, coupling


def build_hamiltonian(spec: ModelSpec) -> HamiltonianMatrix:
    energy, coupling = atomic_matrices(spec)
    h = assemble_product_hamiltonian(energy, coupling, spec.omega, spec.fock_cutoff)
    return HamiltonianMatrix(h, _basis_map(spec.atomic_labels(), spec.fock_cutoff), spec.fock_cutoff)


def _excitation_diagonal(spec: ModelSpec) -> np.ndarray:
    excited = np.concatenate([np.zeros(spec.n_ground), np.ones(spec.n_excited)])
    photons = np.arange(spec.fock_cutoff + 1)
    return (excited[:, None] + photons[None, :]).ravel()


def build_total_excitation(spec: ModelSpec) -> SymmetryOperator:
    d = _excitation_diagonal(spec).astype(float)
    return SymmetryOperator(SymmetryKind.TOTAL_EXCITATION, np.diag(d), d)


def build_parity(spec: ModelSpec) -> SymmetryOperator:
    """exp(i pi N_tot), exactly +-1 on the diagonal."""
    d = np.where(_excitation_diagonal(spec) % 2 == 0, 1.0, -1.0)
    return SymmetryOperator(SymmetryKind.PARITY, np.diag(d), d)


def atomic_doublet_matrix(
    spec: ModelSpec,
    basis: DoubletBasis | str = DoubletBasis.BARE,
    decomposition=None,
) -> np.ndarray:
    """Atomic part of the doublet operator, in the bare atomic basis."""
    basis = DoubletBasis(basis)
    n, m = spec.n_excited, spec.n_ground
    if basis is DoubletBasis.BARE:
        if n != m:
            raise DimensionError(f"bare doublet operator needs n == m, got n={n}, m={m}")
        types = np.concatenate([np.arange(1, m + 1), np.arange(1, n + 1)])
        return np.diag(types.astype(float))

    if decomposition is None:
        raise ValueError("radiation-basis doublet operator needs a RadiationDecomposition")
    svd = decomposition.svd
    if svd.u.shape != (m, m) or svd.v.shape != (n, n):
        raise DimensionError("decomposition does not match the model dimensions")
    # rows of u (v) map bare to radiation amplitudes, so |G_k> is column k of u^dagger
    ground = svd.u.conj().T @ np.diag(np.arange(1, m + 1, dtype=float)) @ svd.u
    excited = svd.v.conj().T @ np.diag(np.arange(1, n + 1, dtype=float)) @ svd.v
    atomic = np.zeros((m + n, m + n), dtype=complex)
    atomic[:m, :m] = 0.5 * (ground + ground.conj().T)
    atomic[m:, m:] = 0.5 * (excited + excited.conj().T)
    return atomic


def build_doublet(
    spec: ModelSpec,
    basis: DoubletBasis | str = DoubletBasis.BARE,
    decomposition=None,
) -> SymmetryOperator:
    """Doublet-type operator D = sum_k k (|E_k><E_k| + |G_k><G_k|) (x) 1.

    In the bare basis the pairs are (g_k, e_k) and n == m is required.  In the
    radiation basis the pairs are the singular-vector states of
    ``decomposition`` (anything with an ``svd`` attribute holding ``u`` and
    ``v``); the returned matrix is expressed back in the bare basis.  Radiation
    states beyond min(n, m) are dark and keep their own index k.
    """
    basis = DoubletBasis(basis)
    atomic = atomic_doublet_matrix(spec, basis, decomposition)
    entries = np.kron(atomic, np.eye(spec.fock_cutoff + 1))
    if basis is DoubletBasis.BARE:
        entries = entries.real
        return SymmetryOperator(SymmetryKind.DOUBLET, entries, np.diag(entries).copy())
    return SymmetryOperator(SymmetryKind.DOUBLET, entries)


def expectation(op: SymmetryOperator, state: np.ndarray, norm_tol: float = 1e-10) -> float:
    state = np.asarray(state)
    if state.ndim != 1 or state.shape[0] != op.entries.shape[0]:
        raise DimensionError(
            f"state of shape {state.shape} does not match operator of dimension {op.entries.shape[0]}"
        )
    norm = np.vdot(state, state).real
    if abs(norm - 1.0) > norm_tol:
        raise ValueError(f"state is not normalised (norm^2 = {norm!r})")
    if op.diagonal is not None:
        return float(np.dot(np.abs(state) ** 2, op.diagonal))
    return float(np.vdot(state, op.entries @ state).real)


def expectations(op: SymmetryOperator, states: np.ndarray) -> np.ndarray:
    """Column-wise expectation values for a matrix of normalised states."""
    if op.diagonal is not None:
        return (np.abs(states) ** 2).T @ op.diagonal
    return np.einsum("ik,ij,jk->k", states.conj(), op.entries, states).real


def atomic_expectations(atomic_op: np.ndarray, states: np.ndarray, fock_cutoff: int) -> np.ndarray:
    """Expectations of (atomic_op (x) 1) for each column of ``states``."""
    n_at = atomic_op.shape[0]
    psi = states.reshape(n_at, fock_cutoff + 1, -1)
    return np.einsum("akc,ab,bkc->c", psi.conj(), atomic_op, psi).real


def commutator_norm(a: np.ndarray, b: np.ndarray) -> float:
    """max |[A, B]_ij|."""
    return float(np.max(np.abs(a @ b - b @ a)))


def check_hermitian(h: np.ndarray, rtol: float = 1e-12) -> None:
    scale = max(float(np.max(np.abs(h))), 1.0) if h.size else 1.0
    if h.ndim != 2 or h.shape[0] != h.shape[1]:
        raise DimensionError(f"expected a square matrix, got shape {h.shape}")
    dev = float(np.max(np.abs(h - h.conj().T))) if h.size else 0.0
    if dev > rtol * scale:
        raise NotHermitianError(f"matrix deviates from Hermiticity by {dev:.3e}")
