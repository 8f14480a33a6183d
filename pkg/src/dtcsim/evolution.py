"""One Floquet period: imperfect global pi-pulse followed by the
interaction segment.

The interaction segment comes in three kinds, compiled once per disorder
realization and reused every period:

- "diagonal": Ising evolution as a table of diagonal phases (fast path);
- "dense": Heisenberg evolution exp(-i H t2) via Hermitian
  eigendecomposition;
- "h2i": Heisenberg evolution chopped into n slices with z-axis pi-pulses
  on the odd-labeled qubits interleaved between slices, which converges to
  the Ising fast path as n grows.

``PeriodPropagator`` diagonalizes the full one-period unitary once so that
expectation values at millions of periods cost one small matrix product per
block of sample times; it is numerically interchangeable with stepping.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterator, Optional

import numpy as np
import scipy.linalg

from .errors import CapacityError
from .model import (
    DENSE_CAP,
    DisorderRealization,
    FloquetDriveSpec,
    heisenberg_hamiltonian,
    ising_phase_table,
)
from .state import StateVector, apply_x_rotation, qubit_z_signs

# Largest dimension for which sweeps diagonalize the period unitary instead
# of stepping (2^8 = 256).
SPECTRAL_CAP = 8


@dataclass(frozen=True, eq=False)
class FloquetStepPlan:
    """Compiled one-period evolution for a fixed realization."""

    n_qubits: int
    pulse_angle: float
    period: float
    kind: str  # "diagonal" | "dense" | "h2i"
    phase_table: Optional[np.ndarray] = None  # kind == "diagonal"
    u2_matrix: Optional[np.ndarray] = None  # kind in ("dense", "h2i")
    h2i_segment: Optional[np.ndarray] = field(default=None, repr=False)
    h2i_mask: tuple[int, ...] = ()
    h2i_pulses: int = 0
    _u2_diag: Optional[np.ndarray] = field(default=None, repr=False)

    def __post_init__(self):
        dim = 1 << self.n_qubits
        if self.kind == "diagonal":
            if self.phase_table is None or self.phase_table.shape != (dim,):
                raise ValueError("diagonal plan needs a phase table of length 2^L")
            object.__setattr__(self, "_u2_diag", np.exp(-1j * self.phase_table))
        elif self.kind in ("dense", "h2i"):
            if self.u2_matrix is None or self.u2_matrix.shape != (dim, dim):
                raise ValueError(f"{self.kind} plan needs a (2^L, 2^L) unitary")
            err = unitarity_defect(self.u2_matrix)
            if err > 1e-10:
                raise ValueError(f"interaction unitary fails U+U = I by {err:.2e}")
            if self.kind == "h2i" and (self.h2i_pulses < 2 or self.h2i_pulses % 2):
                raise ValueError(
                    f"pulse count must be even and >= 2, got {self.h2i_pulses}"
                )
        else:
            raise ValueError(f"unknown plan kind {self.kind!r}")


def unitarity_defect(U: np.ndarray) -> float:
    return float(np.abs(U.conj().T @ U - np.eye(U.shape[0])).max())


def expm_hermitian(H: np.ndarray, t: float) -> np.ndarray:
    """exp(-i H t) for Hermitian H via eigendecomposition."""
    w, V = np.linalg.eigh(H)
    return (V * np.exp(-1j * w * t)) @ V.conj().T


def odd_qubit_mask(L: int) -> tuple[int, ...]:
    return tuple(range(1, L + 1, 2))


def pulse_diagonal(L: int, qubits: tuple[int, ...], sign: float = 1.0) -> np.ndarray:
    """Diagonal of exp(sign * i * (pi/2) * sum_k sigma_z_k) over qubits."""
    total = np.zeros(1 << L)
    for k in qubits:
        total += qubit_z_signs(L, k)
    return np.exp(sign * 1j * (math.pi / 2.0) * total)


def h2i_composite(segment: np.ndarray, L: int, n_pulses: int) -> np.ndarray:
    """[P * segment * P^dagger * segment]^(n/2) with P the z-axis pi-pulse
    on the odd-labeled qubits."""
    if n_pulses < 2 or n_pulses % 2:
        raise ValueError(f"pulse count must be even and >= 2, got {n_pulses}")
    p = pulse_diagonal(L, odd_qubit_mask(L), sign=+1.0)
    bracket = (p[:, None] * segment * p.conj()[None, :]) @ segment
    return np.linalg.matrix_power(bracket, n_pulses // 2)


def compile_step(
    spec: FloquetDriveSpec,
    realization: DisorderRealization,
    dense_cap: int = DENSE_CAP,
) -> FloquetStepPlan:
    """Build the reusable one-period plan for a quenched realization."""
    if realization.n_qubits != spec.L:
        raise ValueError(
            f"realization has {realization.n_qubits} sites, spec has L={spec.L}"
        )
    common = dict(
        n_qubits=spec.L, pulse_angle=spec.pulse_angle, period=spec.period
    )
    if spec.model_kind == "ising":
        return FloquetStepPlan(
            kind="diagonal",
            phase_table=ising_phase_table(realization, spec.t2),
            **common,
        )
    H = heisenberg_hamiltonian(realization, dense_cap=dense_cap)
    if spec.h2i_pulses == 0:
        return FloquetStepPlan(
            kind="dense", u2_matrix=expm_hermitian(H, spec.t2), **common
        )
    segment = expm_hermitian(H, spec.t2 / spec.h2i_pulses)
    return FloquetStepPlan(
        kind="h2i",
        u2_matrix=h2i_composite(segment, spec.L, spec.h2i_pulses),
        h2i_segment=segment,
        h2i_mask=odd_qubit_mask(spec.L),
        h2i_pulses=spec.h2i_pulses,
        **common,
    )


def _apply_pulse(state: StateVector, plan: FloquetStepPlan) -> None:
    for k in range(1, plan.n_qubits + 1):
        apply_x_rotation(state, k, plan.pulse_angle)


def apply_period(state: StateVector, plan: FloquetStepPlan) -> StateVector:
    """Advance one period: pulse first, then the interaction segment."""
    if state.dim != 1 << plan.n_qubits:
        raise ValueError(
            f"state has {state.n_qubits} qubits, plan has {plan.n_qubits}"
        )
    if plan.kind == "h2i":
        return apply_h2i_period(state, plan)
    _apply_pulse(state, plan)
    if plan.kind == "diagonal":
        state.amplitudes *= plan._u2_diag
    else:
        state.amplitudes[:] = plan.u2_matrix @ state.amplitudes
    return state


def apply_h2i_period(state: StateVector, plan: FloquetStepPlan) -> StateVector:
    """Advance one period with the pulse-interleaved interaction segment."""
    if plan.kind != "h2i":
        raise ValueError(f"plan kind is {plan.kind!r}, not h2i")
    _apply_pulse(state, plan)
    state.amplitudes[:] = plan.u2_matrix @ state.amplitudes
    return state


def dense_pulse_unitary(L: int, angle: float) -> np.ndarray:
    c, s = np.cos(angle), np.sin(angle)
    r = np.array([[c, -1j * s], [-1j * s, c]])
    U = np.eye(1)
    for _ in range(L):
        U = np.kron(U, r)
    return U


def dense_period_unitary(plan: FloquetStepPlan) -> np.ndarray:
    """Full one-period unitary as a dense matrix (interaction * pulse)."""
    if plan.n_qubits > DENSE_CAP:
        raise CapacityError(
            f"dense period unitary is capped at L <= {DENSE_CAP}, "
            f"got L={plan.n_qubits}"
        )
    U1 = dense_pulse_unitary(plan.n_qubits, plan.pulse_angle)
    if plan.kind == "diagonal":
        return plan._u2_diag[:, None] * U1
    return plan.u2_matrix @ U1


class PeriodPropagator:
    """Spectral propagator for a compiled plan.

    Diagonalizes the one-period unitary (Schur form; exactly diagonal for a
    normal matrix up to roundoff) so states and expectations at arbitrary
    period counts are direct evaluations rather than sequential steps.
    """

    def __init__(self, plan: FloquetStepPlan):
        U = dense_period_unitary(plan)
        T, B = scipy.linalg.schur(U, output="complex")
        lam = np.diag(T)
        lam = lam / np.abs(lam)  # pin eigenvalue moduli so powers never drift
        self.n_qubits = plan.n_qubits
        self.basis = B
        self.phases = np.angle(lam)

    def state_at(self, amps0: np.ndarray, n_periods: int) -> np.ndarray:
        coeff = self.basis.conj().T @ amps0
        return self.basis @ (coeff * np.exp(1j * self.phases * n_periods))

    def even_expectation_blocks(
        self,
        amps0: np.ndarray,
        sign_rows: np.ndarray,
        n_samples: int,
        block: int = 8192,
    ) -> Iterator[tuple[np.ndarray, np.ndarray]]:
        """Yield (periods, expectations) for samples at periods 0, 2, 4, ...

        ``sign_rows`` is a (K, 2^L) matrix of sigma_z sign vectors;
        expectations come out as (K, block) chunks.
        """
        coeff = self.basis.conj().T @ amps0
        for start in range(0, n_samples, block):
            periods = 2.0 * np.arange(start, min(start + block, n_samples))
            waves = np.exp(1j * np.outer(self.phases, periods))
            amps = self.basis @ (coeff[:, None] * waves)
            probs = amps.real**2 + amps.imag**2
            yield periods, sign_rows @ probs
