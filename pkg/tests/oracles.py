"""Independent brute-force constructions used as test oracles.

Everything here is built from explicit Kronecker products and scipy's
series-based ``expm``, deliberately avoiding the production code paths
(bit-index arithmetic, diagonal fast paths, Hermitian eigendecomposition,
Schur propagation) so the two sides of every comparison stay independent.
"""

from functools import reduce

import numpy as np
import scipy.linalg

SX = np.array([[0, 1], [1, 0]], dtype=complex)
SY = np.array([[0, -1j], [1j, 0]], dtype=complex)
SZ = np.array([[1, 0], [0, -1]], dtype=complex)
ID = np.eye(2, dtype=complex)


def site_op(L: int, k: int, op: np.ndarray) -> np.ndarray:
    """Operator acting as ``op`` on qubit k (1-based, qubit 1 = MSB)."""
    mats = [ID] * L
    mats[k - 1] = op
    return reduce(np.kron, mats)


def ising_dense(bonds, fields) -> np.ndarray:
    L = len(fields)
    H = np.zeros((2**L, 2**L), dtype=complex)
    for n in range(L - 1):
        H += bonds[n] * site_op(L, n + 1, SZ) @ site_op(L, n + 2, SZ)
    for n in range(L):
        H += fields[n] * site_op(L, n + 1, SZ)
    return H


def heisenberg_dense(bonds, fields) -> np.ndarray:
    L = len(fields)
    H = np.zeros((2**L, 2**L), dtype=complex)
    for n in range(L - 1):
        for P in (SX, SY, SZ):
            H += bonds[n] * site_op(L, n + 1, P) @ site_op(L, n + 2, P)
    for n in range(L):
        H += fields[n] * site_op(L, n + 1, SZ)
    return H


def pulse_dense(L: int, angle: float) -> np.ndarray:
    H1 = sum(site_op(L, k, SX) for k in range(1, L + 1))
    return scipy.linalg.expm(-1j * angle * H1)


def h2i_dense(bonds, fields, t2: float, n_pulses: int) -> np.ndarray:
    L = len(fields)
    H = heisenberg_dense(bonds, fields)
    seg = scipy.linalg.expm(-1j * H * (t2 / n_pulses))
    flip = sum(site_op(L, k, SZ) for k in range(1, L + 1, 2))
    P = scipy.linalg.expm(1j * (np.pi / 2) * flip)
    bracket = P @ seg @ P.conj().T @ seg
    return np.linalg.matrix_power(bracket, n_pulses // 2)


def drive_unitary_dense(spec, bonds, fields) -> np.ndarray:
    """One-period unitary exp(-i H_int t2) @ exp(-i H_pulse t1) via expm."""
    L = spec.L
    U1 = pulse_dense(L, (np.pi / 2) * (1 - spec.epsilon))
    if spec.model_kind == "ising":
        U2 = scipy.linalg.expm(-1j * ising_dense(bonds, fields) * spec.t2)
    elif spec.h2i_pulses:
        U2 = h2i_dense(bonds, fields, spec.t2, spec.h2i_pulses)
    else:
        U2 = scipy.linalg.expm(-1j * heisenberg_dense(bonds, fields) * spec.t2)
    return U2 @ U1


def evolve_dense(U: np.ndarray, amps0: np.ndarray, n_periods: int) -> np.ndarray:
    psi = amps0.astype(complex).copy()
    for _ in range(n_periods):
        psi = U @ psi
    return psi


def z_expectation_dense(L: int, k: int, psi: np.ndarray) -> float:
    return float(np.real(psi.conj() @ site_op(L, k, SZ) @ psi))


def min_z_trace_dense(U, L, k, index0, n_periods):
    """Running-minimum autocorrelator via brute-force stepping."""
    psi = np.zeros(2**L, dtype=complex)
    psi[index0] = 1.0
    z0 = z_expectation_dense(L, k, psi)
    out = [abs(z0 * z0)]
    for n in range(n_periods // 2):
        psi = U @ (U @ psi)
        out.append(min(out[-1], abs(z0 * z_expectation_dense(L, k, psi))))
    return np.array(out)
