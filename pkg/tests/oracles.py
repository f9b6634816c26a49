"""Independent reference constructions used as test oracles.

Nothing here imports the package's Hamiltonian builders: matrices are
filled element by element from the defining matrix elements.
"""

import math

import numpy as np


def loop_hamiltonian(n, m, coupling, cutoff, omega=1.0, epsilon=0.0, delta_e=None, delta_g=None):
    """Dense H filled entry by entry; atomic order g_1..g_m, e_1..e_n, photon index fastest."""
    delta_e = np.zeros(n) if delta_e is None else np.asarray(delta_e, float)
    delta_g = np.zeros(m) if delta_g is None else np.asarray(delta_g, float)
    nf = cutoff + 1
    dim = (n + m) * nf
    h = np.zeros((dim, dim), dtype=complex)

    def idx(atom, k):
        return atom * nf + k

    for j in range(m):
        for k in range(nf):
            h[idx(j, k), idx(j, k)] = epsilon * delta_g[j] + omega * k
    for i in range(n):
        for k in range(nf):
            h[idx(m + i, k), idx(m + i, k)] = omega + epsilon * delta_e[i] + omega * k
    for i in range(n):
        for j in range(m):
            lam = coupling[i][j]
            for k in range(nf - 1):
                amp = math.sqrt(k + 1)
                # |g_j, k+1><e_i, k| and |g_j, k><e_i, k+1| carry Lambda_ij
                h[idx(j, k + 1), idx(m + i, k)] += lam * amp
                h[idx(j, k), idx(m + i, k + 1)] += lam * amp
                h[idx(m + i, k), idx(j, k + 1)] += np.conj(lam) * amp
                h[idx(m + i, k + 1), idx(j, k)] += np.conj(lam) * amp
    return h


def qrm_levels(lam, cutoff, omega=1.0):
    """Rabi-model spectrum from an explicit 2-level matrix, ground atomic energy 0."""
    return np.linalg.eigvalsh(loop_hamiltonian(1, 1, [[lam]], cutoff, omega))


def juddian_coupling_first(omega=1.0):
    """Coupling of the first exceptional (Juddian) point for equal atom and field frequency.

    In the convention H = omega a^dag a + (Delta/2) sigma_z + g sigma_x (a + a^dag)
    the level omega (1 - g^2/omega^2) is exact when (Delta/2 omega)^2 + 4 (g/omega)^2 = 1.
    With Delta = omega that gives g = sqrt(3)/4 omega.
    """
    return math.sqrt(3.0) / 4.0 * omega


def u11_by_quadrature(x):
    """U(1, 1, x) = int_0^inf exp(-x t) / (1 + t) dt by adaptive quadrature."""
    from scipy import integrate

    val, _ = integrate.quad(lambda t: math.exp(-x * t) / (1.0 + t), 0.0, np.inf, epsabs=0, epsrel=1e-13)
    return val
