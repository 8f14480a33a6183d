"""L-qubit state vectors and the minimal gate set the drive needs.

Index convention, fixed for the whole codebase:

- Qubit labels are 1-based, k = 1..L.  Qubit 1 is the most significant bit
  of the basis-state integer, so the basis label "1000" (L=4) is index 8.
- Spin convention: bit value 0 means <sigma_z> = +1, bit value 1 means
  <sigma_z> = -1.
- Rotation convention: ``apply_x_rotation(state, k, a)`` applies
  U = exp(-i*a*sigma_x) = cos(a)*I - i*sin(a)*sigma_x on qubit k, so a
  global pulse with per-qubit angle (pi/2)*(1-epsilon) is an ideal spin
  flip at epsilon = 0.

All operations are exactly unitary up to roundoff; the norm is asserted at
construction and never repaired during evolution.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

_NORM_TOL = 1e-10


@dataclass
class StateVector:
    """Normalized complex amplitudes over the 2^L computational basis.

    A StateVector is owned by a single worker at a time; the gate
    operations below mutate ``amplitudes`` in place and return the same
    object.
    """

    n_qubits: int
    amplitudes: np.ndarray = field(repr=False)

    def __post_init__(self):
        if self.n_qubits < 1:
            raise ValueError(f"need at least one qubit, got L={self.n_qubits}")
        self.amplitudes = np.ascontiguousarray(self.amplitudes, dtype=np.complex128)
        if self.amplitudes.shape != (1 << self.n_qubits,):
            raise ValueError(
                f"amplitude vector has length {self.amplitudes.size}, "
                f"expected 2^{self.n_qubits}"
            )
        norm = np.linalg.norm(self.amplitudes)
        if abs(norm - 1.0) > _NORM_TOL:
            raise ValueError(f"state is not normalized: |psi| = {norm!r}")

    @property
    def dim(self) -> int:
        return self.amplitudes.size

    def copy(self) -> "StateVector":
        return StateVector(self.n_qubits, self.amplitudes.copy())

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))


def basis_index(bits: str) -> int:
    """Map a 0/1 string to its basis index (first character = qubit 1 = MSB)."""
    if not bits or any(c not in "01" for c in bits):
        raise ValueError(f"not a binary string: {bits!r}")
    return int(bits, 2)


def basis_state(bits: str) -> StateVector:
    """Computational basis state for a 0/1 string such as "1000"."""
    index = basis_index(bits)
    amps = np.zeros(1 << len(bits), dtype=np.complex128)
    amps[index] = 1.0
    return StateVector(len(bits), amps)


def qubit_z_signs(n_qubits: int, k: int) -> np.ndarray:
    """Vector of <sigma_z_k> eigenvalues (+1/-1) over all basis indices."""
    _check_qubit(n_qubits, k)
    idx = np.arange(1 << n_qubits)
    return 1.0 - 2.0 * ((idx >> (n_qubits - k)) & 1)


def all_z_signs(n_qubits: int) -> np.ndarray:
    """(L, 2^L) array stacking qubit_z_signs for k = 1..L."""
    return np.stack([qubit_z_signs(n_qubits, k) for k in range(1, n_qubits + 1)])


def sigma_z_expectation(state: StateVector, k: int) -> float:
    """<sigma_z> on qubit k; real by construction."""
    view = _split_view(state, k)
    probs = view.real**2 + view.imag**2
    return float(probs[:, 0, :].sum() - probs[:, 1, :].sum())


def apply_x_rotation(state: StateVector, k: int, angle: float) -> StateVector:
    """Apply exp(-i*angle*sigma_x) on qubit k, in place."""
    if not np.isfinite(angle):
        raise ValueError(f"rotation angle must be finite, got {angle!r}")
    view = _split_view(state, k)
    c, s = np.cos(angle), np.sin(angle)
    a0 = view[:, 0, :].copy()
    view[:, 0, :] *= c
    view[:, 0, :] += -1j * s * view[:, 1, :]
    view[:, 1, :] *= c
    view[:, 1, :] += -1j * s * a0
    return state


def apply_z_rotation(state: StateVector, k: int, angle: float) -> StateVector:
    """Apply exp(-i*angle*sigma_z) on qubit k, in place.  Diagonal, so basis
    populations are untouched."""
    if not np.isfinite(angle):
        raise ValueError(f"rotation angle must be finite, got {angle!r}")
    view = _split_view(state, k)
    view[:, 0, :] *= np.exp(-1j * angle)
    view[:, 1, :] *= np.exp(+1j * angle)
    return state


def apply_diagonal_phases(state: StateVector, phases: np.ndarray) -> StateVector:
    """Multiply amplitude_s by exp(-i*phases_s), in place."""
    phases = np.asarray(phases)
    if phases.shape != state.amplitudes.shape:
        raise ValueError(
            f"phase table has length {phases.size}, expected {state.dim}"
        )
    state.amplitudes *= np.exp(-1j * phases)
    return state


def _check_qubit(n_qubits: int, k: int) -> None:
    if not 1 <= k <= n_qubits:
        raise ValueError(f"qubit index {k} out of range 1..{n_qubits}")


def _split_view(state: StateVector, k: int) -> np.ndarray:
    # Reshape so axis 1 is the target qubit's bit: (2^(k-1), 2, 2^(L-k)).
    _check_qubit(state.n_qubits, k)
    return state.amplitudes.reshape(
        1 << (k - 1), 2, 1 << (state.n_qubits - k)
    )
