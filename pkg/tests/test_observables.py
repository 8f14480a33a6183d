import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dtcsim import (
    AutocorrelatorTrace,
    DisorderDistribution,
    FloquetDriveSpec,
    StateVector,
    apply_x_rotation,
    basis_state,
    bulk_qubit,
    compile_step,
    final_min_z,
    first_crossing,
    fspt_diagnostic,
    lifetime,
    record_trace,
    run_campaign,
    sample_realization,
    scaling_qubit,
)
from dtcsim.model import realization_rng

from oracles import drive_unitary_dense, min_z_trace_dense


def make_plan(L, epsilon, dist, seed=0, **kwargs):
    spec = FloquetDriveSpec(L=L, epsilon=epsilon, distribution=dist, **kwargs)
    real = sample_realization(dist, L, realization_rng(seed, 0, 0))
    return spec, real, compile_step(spec, real)


class TestRecordTrace:
    def test_perfect_pulses_hold_at_one(self, showcase_distribution):
        _, _, plan = make_plan(4, 0.0, showcase_distribution)
        traces = record_trace(basis_state("0110"), plan, [1, 2, 3, 4], 100)
        for k in range(1, 5):
            assert np.all(np.abs(traces[k].values - 1.0) <= 1e-12)

    def test_single_spin_echo_plateau(self):
        # closed form: running min of |cos(2*pi*n/10)| plateaus at
        # |cos(0.4*pi)| ~ 0.309 and never crosses 0.1
        dist = DisorderDistribution(J0=0.0, sigma_J=0.0, h0=0.0, sigma_h=0.0)
        _, _, plan = make_plan(1, 0.1, dist)
        trace = record_trace(basis_state("0"), plan, [1], 200)[1]
        expected = np.minimum.accumulate(
            np.abs(np.cos(2 * np.pi * 0.1 * np.arange(101)))
        )
        assert np.max(np.abs(trace.values - expected)) <= 1e-10
        assert trace.values[-1] == pytest.approx(np.abs(np.cos(0.4 * np.pi)), abs=1e-10)
        assert lifetime(trace, 0.1).time is None

    def test_initial_value_is_one_for_basis_states(self, showcase_spec):
        real = sample_realization(showcase_spec.distribution, 4, realization_rng(1, 0, 0))
        plan = compile_step(showcase_spec, real)
        traces = record_trace(basis_state("1010"), plan, [2], 10)
        assert traces[2].values[0] == pytest.approx(1.0, abs=1e-14)
        assert traces[2].initial_expectation in (-1.0, 1.0)

    def test_monotone_non_increasing(self, showcase_distribution):
        _, _, plan = make_plan(4, 0.08, showcase_distribution, seed=3)
        traces = record_trace(basis_state("0100"), plan, [1, 3], 300)
        for k in (1, 3):
            assert np.all(np.diff(traces[k].values) <= 1e-15)

    def test_degenerate_superposition_flagged(self, showcase_distribution):
        _, _, plan = make_plan(2, 0.05, showcase_distribution, seed=4)
        state = apply_x_rotation(basis_state("00"), 1, np.pi / 4)  # <sigma_z_1> = 0
        traces = record_trace(state, plan, [1], 20)
        assert traces[1].degenerate
        assert np.allclose(traces[1].values, 0.0, atol=1e-12)

    def test_odd_horizon_rejected(self, showcase_distribution):
        _, _, plan = make_plan(2, 0.0, showcase_distribution)
        with pytest.raises(ValueError):
            record_trace(basis_state("00"), plan, [1], 7)

    def test_matches_brute_force_trace(self, showcase_distribution):
        spec, real, plan = make_plan(3, 0.09, showcase_distribution, seed=6)
        U = drive_unitary_dense(spec, real.bond_couplings, real.onsite_fields)
        expected = min_z_trace_dense(U, 3, 2, int("010", 2), 80)
        trace = record_trace(basis_state("010"), plan, [2], 80)[2]
        assert np.max(np.abs(trace.values - expected)) <= 1e-10

    def test_engines_agree(self, showcase_distribution):
        _, _, plan = make_plan(4, 0.06, showcase_distribution, seed=7)
        a = record_trace(basis_state("1000"), plan, [1, 3], 400, engine="step")
        b = record_trace(basis_state("1000"), plan, [1, 3], 400, engine="spectral")
        for k in (1, 3):
            assert np.max(np.abs(a[k].values - b[k].values)) <= 1e-9

    def test_bit_flip_symmetry_without_fields(self):
        # Ising-even disorder only: flipping every input bit gives the same
        # trace sample by sample.
        dist = DisorderDistribution(J0=3.0, sigma_J=2.0, h0=0.0, sigma_h=0.0)
        spec, real, plan = make_plan(4, 0.12, dist, seed=8)
        a = record_trace(basis_state("1001"), plan, [2], 100)[2]
        b = record_trace(basis_state("0110"), plan, [2], 100)[2]
        assert np.max(np.abs(a.values - b.values)) <= 1e-10


class TestLifetime:
    def test_constant_trace_unbounded(self):
        trace = AutocorrelatorTrace(1, np.arange(0, 12, 2.0), np.ones(6), 1.0)
        assert lifetime(trace, 0.1).time is None

    def test_constructed_dip(self):
        values = np.array([1.0, 0.8, 0.6, 0.4, 0.2, 0.05, 0.05])
        trace = AutocorrelatorTrace(2, np.arange(0, 14, 2.0), values, 1.0)
        assert lifetime(trace, 0.1).time == 10.0

    def test_threshold_validation(self):
        trace = AutocorrelatorTrace(1, np.arange(0, 4, 2.0), np.ones(2), 1.0)
        with pytest.raises(ValueError):
            lifetime(trace, 0.0)
        with pytest.raises(ValueError):
            lifetime(trace, 1.0)

    def test_first_crossing_matches_trace(self, showcase_distribution):
        _, _, plan = make_plan(4, 0.15, showcase_distribution, seed=9)
        trace = record_trace(basis_state("0010"), plan, [3], 2000)[3]
        expected = lifetime(trace, 0.1).time
        got = first_crossing(basis_state("0010"), plan, 3, 0.1, 2000)
        assert got == expected

    def test_first_crossing_unbounded(self, showcase_distribution):
        _, _, plan = make_plan(4, 0.0, showcase_distribution)
        assert first_crossing(basis_state("1000"), plan, 3, 0.1, 500) is None


class TestFsptDiagnostic:
    def test_locked_regime_is_near_zero(self, showcase_distribution):
        _, _, plan = make_plan(4, 0.0, showcase_distribution)
        traces = record_trace(basis_state("1000"), plan, [1, 3], 50)
        assert fspt_diagnostic(traces[1], traces[3]) == pytest.approx(0.0, abs=1e-12)

    def test_mismatched_horizons_rejected(self, showcase_distribution):
        _, _, plan = make_plan(4, 0.0, showcase_distribution)
        a = record_trace(basis_state("1000"), plan, [1], 40)[1]
        b = record_trace(basis_state("1000"), plan, [3], 60)[3]
        with pytest.raises(ValueError):
            fspt_diagnostic(a, b)

    def test_edge_outlives_bulk_without_charge_noise(self):
        # sigma_J = 0: the edge retains order while the bulk decays
        dist = DisorderDistribution(J0=5.0, sigma_J=0.0, h0=2.0e4, sigma_h=50.0)
        spec = FloquetDriveSpec(L=4, epsilon=0.05, distribution=dist)
        diffs = []
        for r in range(60):
            real = sample_realization(dist, 4, realization_rng(13, 0, r))
            plan = compile_step(spec, real)
            traces = record_trace(basis_state("1000"), plan, [1, 3], 200, engine="spectral")
            diffs.append(fspt_diagnostic(traces[1], traces[3]))
        assert np.mean(diffs) > 0.5


class TestConventions:
    def test_bulk_qubit(self):
        assert bulk_qubit(4) == 3
        assert bulk_qubit(3) == 2
        assert bulk_qubit(6) == 4

    def test_scaling_qubit(self):
        assert scaling_qubit(4) == 2
        assert scaling_qubit(3) == 2
        assert scaling_qubit(5) == 3

    @given(seed=st.integers(0, 2**16))
    @settings(max_examples=10, deadline=None)
    def test_final_min_z_equals_trace_tail(self, seed):
        dist = DisorderDistribution(J0=5.0, sigma_J=3.0, h0=2.0e4, sigma_h=50.0)
        _, _, plan = make_plan(4, 0.07, dist, seed=seed)
        trace = record_trace(basis_state("1100"), plan, [2, 3], 60)
        final = final_min_z(basis_state("1100"), plan, [2, 3], 60)
        assert final[0] == pytest.approx(trace[2].values[-1], abs=1e-9)
        assert final[1] == pytest.approx(trace[3].values[-1], abs=1e-9)


class TestShowcaseRegime:
    def test_charge_noise_locks_bulk_spin(self, showcase_distribution):
        # stabilized cell: ensemble-averaged bulk autocorrelator stays high
        spec = FloquetDriveSpec(L=4, epsilon=0.04, distribution=showcase_distribution)
        records = run_campaign([], spec, "z3", 200, 100, 99, initial_state="1000")
        assert records[0].mean > 0.5
