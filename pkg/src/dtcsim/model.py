"""Drive parameters and quenched-disorder sampling.

Couplings and fields are radian phases per unit time: the products J*t2 and
h*t2 enter the evolution only through exp(-i * phase), so every coupling is
physically equivalent mod 2*pi/t2.  Bond couplings are truncated to be
nonnegative; by default the uniform law lives on the truncated support
[max(J0 - sigma_J, 0), J0 + sigma_J] rather than being clipped (clipping
would put an atom at 0 -- both modes are available for sensitivity checks).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import CapacityError
from .state import all_z_signs

DENSE_CAP = 12  # largest L for dense-matrix work (2^12 x 2^12)

SAMPLING_MODES = ("support", "clip")


@dataclass(frozen=True)
class DisorderDistribution:
    """Uniform-disorder parameters: means and half-widths of the bond
    couplings and onsite fields."""

    J0: float
    sigma_J: float
    h0: float
    sigma_h: float

    def __post_init__(self):
        if self.J0 < 0:
            raise ValueError(f"mean bond coupling must be >= 0, got {self.J0}")
        if self.sigma_J < 0 or self.sigma_h < 0:
            raise ValueError("distribution half-widths must be >= 0")

    def bond_support(self) -> tuple[float, float]:
        return (max(self.J0 - self.sigma_J, 0.0), self.J0 + self.sigma_J)

    def field_support(self) -> tuple[float, float]:
        return (self.h0 - self.sigma_h, self.h0 + self.sigma_h)


@dataclass(frozen=True, eq=False)
class DisorderRealization:
    """One quenched draw: L-1 bond couplings and L onsite fields, fixed for
    the entire multi-period evolution of a run."""

    bond_couplings: np.ndarray
    onsite_fields: np.ndarray

    def __post_init__(self):
        object.__setattr__(
            self, "bond_couplings", np.asarray(self.bond_couplings, dtype=float)
        )
        object.__setattr__(
            self, "onsite_fields", np.asarray(self.onsite_fields, dtype=float)
        )
        if self.bond_couplings.size != self.onsite_fields.size - 1:
            raise ValueError(
                f"got {self.bond_couplings.size} bonds for "
                f"{self.onsite_fields.size} sites; expected L-1"
            )
        if self.bond_couplings.size and self.bond_couplings.min() < 0:
            raise ValueError("bond couplings must be nonnegative")

    @property
    def n_qubits(self) -> int:
        return self.onsite_fields.size


@dataclass(frozen=True)
class FloquetDriveSpec:
    """Full description of one binary drive.

    ``epsilon`` is the fractional pulse error (0 = perfect global flip).
    ``t1``/``t2`` are the pulse and interaction segment durations; one
    period is T = t1 + t2, and all reported times count periods.
    ``h2i_pulses``: 0 runs the bare model; an even n >= 2 interleaves n
    Heisenberg-to-Ising pulses across the interaction segment (Heisenberg
    model only).
    """

    L: int
    epsilon: float
    distribution: DisorderDistribution
    t1: float = 1.0
    t2: float = 1.0
    model_kind: str = "ising"
    h2i_pulses: int = 0

    def __post_init__(self):
        if self.L < 1:
            raise ValueError(f"need at least one qubit, got L={self.L}")
        if self.t1 <= 0:
            raise ValueError(f"t1 must be positive, got {self.t1}")
        if self.t2 < 0:
            raise ValueError(f"t2 must be nonnegative, got {self.t2}")
        if self.model_kind not in ("ising", "heisenberg"):
            raise ValueError(f"unknown model kind {self.model_kind!r}")
        if self.h2i_pulses < 0 or self.h2i_pulses % 2:
            raise ValueError(
                f"h2i_pulses must be an even integer >= 0, got {self.h2i_pulses}"
            )
        if self.h2i_pulses and self.model_kind != "heisenberg":
            raise ValueError("h2i_pulses only applies to the heisenberg model")

    @property
    def period(self) -> float:
        return self.t1 + self.t2

    @property
    def pulse_angle(self) -> float:
        return (math.pi / 2.0) * (1.0 - self.epsilon)


def realization_rng(campaign_seed: int, cell_index: int, realization_index: int) -> np.random.Generator:
    """Deterministic per-realization stream.

    The schedule hashes (campaign seed, cell index, realization index), so
    parallel sweeps are reproducible and order-independent, and one cell's
    draws never depend on another cell's.
    """
    ss = np.random.SeedSequence((campaign_seed, cell_index, realization_index))
    return np.random.Generator(np.random.PCG64(ss))


def sample_realization(
    distribution: DisorderDistribution,
    L: int,
    rng: np.random.Generator,
    mode: str = "support",
) -> DisorderRealization:
    """Draw one quenched realization from the uniform laws.

    mode="support" samples uniformly on the truncated bond interval;
    mode="clip" samples on [J0 - sigma_J, J0 + sigma_J] and clips at 0.
    """
    if L < 1:
        raise ValueError(f"need at least one qubit, got L={L}")
    if mode not in SAMPLING_MODES:
        raise ValueError(f"unknown sampling mode {mode!r}; use one of {SAMPLING_MODES}")
    if mode == "support":
        lo, hi = distribution.bond_support()
        bonds = rng.uniform(lo, hi, size=L - 1)
    else:
        raw = rng.uniform(
            distribution.J0 - distribution.sigma_J,
            distribution.J0 + distribution.sigma_J,
            size=L - 1,
        )
        bonds = np.maximum(raw, 0.0)
    lo, hi = distribution.field_support()
    fields = rng.uniform(lo, hi, size=L)
    return DisorderRealization(bonds, fields)


def ising_phase_table(realization: DisorderRealization, t2: float) -> np.ndarray:
    """Diagonal of H_int * t2 over the computational basis.

    Entry s is t2 * (sum_n J_n z_n z_{n+1} + sum_n h_n z_n) with z = +-1 per
    the spin convention; feeding the table to ``apply_diagonal_phases``
    applies exp(-i H_int t2) exactly.
    """
    L = realization.n_qubits
    signs = all_z_signs(L)
    diag = realization.onsite_fields @ signs
    if L > 1:
        diag += realization.bond_couplings @ (signs[:-1] * signs[1:])
    return t2 * diag


def heisenberg_hamiltonian(
    realization: DisorderRealization, dense_cap: int = DENSE_CAP
) -> np.ndarray:
    """Dense exchange Hamiltonian sum_n J_n (XX + YY + ZZ) + sum_n h_n Z.

    Built by index arithmetic: the ZZ + field part is the diagonal phase
    table (t2=1); XX + YY maps each basis state with anti-aligned bond
    (n, n+1) to the state with both bits swapped, with matrix element 2*J_n.
    """
    L = realization.n_qubits
    if L > dense_cap:
        raise CapacityError(
            f"dense Heisenberg work is capped at L <= {dense_cap}, got L={L}"
        )
    dim = 1 << L
    H = np.zeros((dim, dim), dtype=np.complex128)
    idx = np.arange(dim)
    H[idx, idx] = ising_phase_table(realization, 1.0)
    for n in range(L - 1):
        p_hi, p_lo = L - (n + 1), L - (n + 2)  # bit positions of qubits n+1, n+2
        differ = ((idx >> p_hi) & 1) != ((idx >> p_lo) & 1)
        src = idx[differ]
        dst = src ^ ((1 << p_hi) | (1 << p_lo))
        H[dst, src] += 2.0 * realization.bond_couplings[n]
    return H
