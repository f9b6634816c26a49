"""Multilevel quantum Rabi models: exact diagonalization, radiation-basis
reduction and random-coupling statistics of the largest singular value."""

from .errors import (
    ConfigError,
    ConvergenceError,
    DimensionError,
    DomainError,
    MLRabiError,
    NotHermitianError,
    PrecisionError,
)
from .model import (
    DoubletBasis,
    HamiltonianMatrix,
    ModelSpec,
    SymmetryKind,
    SymmetryOperator,
    build_doublet,
    build_hamiltonian,
    build_parity,
    build_total_excitation,
    expectation,
)
from .radiation import RadiationDecomposition, assemble_radiation_hamiltonian, to_radiation_basis
from .records import ExperimentRecord
from .rmt import (
    Ensemble,
    SvDistribution,
    min_kappa1,
    moment_lambda1,
    pdf_kappa1,
    pdf_lambda1,
    sample_ginibre,
    tricomi_u,
    variance_lambda1,
)
from .spectral import SpectrumResult, SvdResult, converge_spectrum, diagonalize, eigendecompose, svd

__version__ = "0.1.0"
