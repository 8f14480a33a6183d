import numpy as np
import pytest
import scipy.linalg
import scipy.stats
from hypothesis import given, settings
from hypothesis import strategies as st

from dtcsim import (
    CapacityError,
    DisorderDistribution,
    DisorderRealization,
    FloquetDriveSpec,
    basis_state,
    compile_step,
    heisenberg_hamiltonian,
    ising_phase_table,
    record_trace,
    sample_realization,
)
from dtcsim.model import realization_rng

from oracles import heisenberg_dense, ising_dense


class TestSampling:
    def test_degenerate_distribution(self, rng):
        dist = DisorderDistribution(J0=2.5, sigma_J=0.0, h0=7.0, sigma_h=0.0)
        real = sample_realization(dist, 5, rng)
        assert np.array_equal(real.bond_couplings, np.full(4, 2.5))
        assert np.array_equal(real.onsite_fields, np.full(5, 7.0))

    def test_truncated_support(self, rng):
        # J0 = 1.5 with half-width 3.0 truncates at zero: support [0, 4.5].
        dist = DisorderDistribution(J0=1.5, sigma_J=3.0, h0=0.0, sigma_h=1.0)
        draws = np.concatenate(
            [sample_realization(dist, 9, rng).bond_couplings for _ in range(500)]
        )
        assert draws.min() >= 0.0
        assert draws.max() <= 4.5

    def test_field_sample_mean(self):
        # 1e5 uniform draws on [h0 - 50, h0 + 50]: the sample mean lands in
        # the 3-sigma band h0 +- 3 * (50/sqrt(3)) / sqrt(1e5).
        dist = DisorderDistribution(J0=0.0, sigma_J=0.0, h0=2.0e4, sigma_h=50.0)
        gen = np.random.default_rng(77)
        draws = np.concatenate(
            [sample_realization(dist, 11, gen).onsite_fields for _ in range(10_000)]
        )
        assert draws.size >= 10**5
        band = 3 * (50.0 / np.sqrt(3.0)) / np.sqrt(draws.size)
        assert abs(draws.mean() - 2.0e4) < min(band, 1.0)

    def test_determinism(self):
        dist = DisorderDistribution(J0=1.0, sigma_J=0.5, h0=2.0, sigma_h=0.25)
        a = sample_realization(dist, 6, realization_rng(9, 3, 14))
        b = sample_realization(dist, 6, realization_rng(9, 3, 14))
        assert np.array_equal(a.bond_couplings, b.bond_couplings)
        assert np.array_equal(a.onsite_fields, b.onsite_fields)

    def test_truncation_uniform_on_support(self):
        # J0 < sigma_J: density stays uniform on [0, J0 + sigma_J].
        dist = DisorderDistribution(J0=1.0, sigma_J=3.0, h0=0.0, sigma_h=0.0)
        gen = np.random.default_rng(123)
        draws = np.concatenate(
            [sample_realization(dist, 11, gen).bond_couplings for _ in range(10_000)]
        )
        assert draws.min() >= 0.0
        stat = scipy.stats.kstest(draws, scipy.stats.uniform(loc=0.0, scale=4.0).cdf)
        assert stat.pvalue > 0.01

    def test_clip_mode_has_atom_at_zero(self):
        dist = DisorderDistribution(J0=0.5, sigma_J=3.0, h0=0.0, sigma_h=0.0)
        gen = np.random.default_rng(5)
        draws = np.concatenate(
            [
                sample_realization(dist, 11, gen, mode="clip").bond_couplings
                for _ in range(2000)
            ]
        )
        assert np.mean(draws == 0.0) > 0.2

    def test_invalid_realization(self):
        with pytest.raises(ValueError):
            DisorderRealization([-0.1], [0.0, 0.0])
        with pytest.raises(ValueError):
            DisorderRealization([1.0, 2.0], [0.0, 0.0])


class TestIsingPhaseTable:
    def test_two_site_by_hand(self):
        real = DisorderRealization([1.0], [0.0, 0.0])
        assert np.array_equal(ising_phase_table(real, 1.0), [1.0, -1.0, -1.0, 1.0])

    def test_zero_couplings(self):
        real = DisorderRealization([0.0, 0.0], [0.0, 0.0, 0.0])
        assert np.array_equal(ising_phase_table(real, 2.0), np.zeros(8))

    def test_matches_dense_oracle(self, rng):
        real = DisorderRealization(rng.uniform(0, 3, 2), rng.normal(size=3))
        table = ising_phase_table(real, 0.7)
        H = ising_dense(real.bond_couplings, real.onsite_fields)
        assert np.allclose(np.diag(H).real * 0.7, table, atol=1e-12)
        U = scipy.linalg.expm(-1j * H * 0.7)
        assert np.allclose(np.diag(U), np.exp(-1j * table), atol=1e-12)

    @given(scale=st.floats(0.1, 10.0), seed=st.integers(0, 2**20))
    @settings(max_examples=30, deadline=None)
    def test_affine_in_t2(self, scale, seed):
        gen = np.random.default_rng(seed)
        real = DisorderRealization(gen.uniform(0, 2, 3), gen.normal(size=4))
        base = ising_phase_table(real, 1.3)
        assert np.allclose(ising_phase_table(real, 1.3 * scale), scale * base, rtol=1e-12)

    def test_single_site(self):
        real = DisorderRealization([], [2.0])
        assert np.array_equal(ising_phase_table(real, 1.5), [3.0, -3.0])


class TestHeisenbergHamiltonian:
    def test_two_spin_spectrum(self):
        real = DisorderRealization([1.0], [0.0, 0.0])
        w = np.linalg.eigvalsh(heisenberg_hamiltonian(real))
        assert np.allclose(w, [-3.0, 1.0, 1.0, 1.0], atol=1e-12)

    def test_exact_hermiticity(self, rng):
        real = DisorderRealization(rng.uniform(0, 2, 3), rng.normal(size=4))
        H = heisenberg_hamiltonian(real)
        assert np.abs(H - H.conj().T).max() == 0.0

    def test_matches_kron_oracle(self, rng):
        real = DisorderRealization(rng.uniform(0, 2, 2), rng.normal(size=3))
        H = heisenberg_hamiltonian(real)
        assert np.abs(H - heisenberg_dense(real.bond_couplings, real.onsite_fields)).max() < 1e-12

    def test_dense_cap(self):
        real = DisorderRealization(np.ones(12), np.zeros(13))
        with pytest.raises(CapacityError, match="12"):
            heisenberg_hamiltonian(real)


class TestPhaseWrapInvariance:
    @pytest.mark.parametrize("which", ["bonds", "fields"])
    def test_two_pi_shift_leaves_trajectories(self, which, showcase_distribution):
        # Shifting every coupling (or field) by 2*pi/t2 shifts each basis
        # phase by a multiple of 2*pi: all <sigma_z> trajectories agree.
        t2 = 0.75
        spec = FloquetDriveSpec(
            L=4, epsilon=0.03, distribution=showcase_distribution, t2=t2
        )
        real = sample_realization(showcase_distribution, 4, realization_rng(3, 0, 0))
        if which == "bonds":
            shifted = DisorderRealization(
                real.bond_couplings + 2 * np.pi / t2, real.onsite_fields
            )
        else:
            shifted = DisorderRealization(
                real.bond_couplings, real.onsite_fields + 2 * np.pi / t2
            )
        for bits in ("1000", "0110"):
            a = record_trace(basis_state(bits), compile_step(spec, real), [1, 3], 60)
            b = record_trace(basis_state(bits), compile_step(spec, shifted), [1, 3], 60)
            for k in (1, 3):
                assert np.max(np.abs(a[k].values - b[k].values)) <= 1e-10


class TestSpecValidation:
    def test_rejects_odd_h2i(self, showcase_distribution):
        with pytest.raises(ValueError):
            FloquetDriveSpec(
                L=4,
                epsilon=0.0,
                distribution=showcase_distribution,
                model_kind="heisenberg",
                h2i_pulses=3,
            )

    def test_rejects_h2i_on_ising(self, showcase_distribution):
        with pytest.raises(ValueError):
            FloquetDriveSpec(
                L=4, epsilon=0.0, distribution=showcase_distribution, h2i_pulses=2
            )

    def test_rejects_negative_widths(self):
        with pytest.raises(ValueError):
            DisorderDistribution(J0=1.0, sigma_J=-0.1, h0=0.0, sigma_h=0.0)
        with pytest.raises(ValueError):
            DisorderDistribution(J0=-1.0, sigma_J=0.0, h0=0.0, sigma_h=0.0)
