"""Master-equation evolution, closed forms, condensation, entropy."""

import numpy as np
import pytest

from thermofield.dynamics import (
    StepSizeError,
    boltzmann_closed_form,
    condensation_state,
    entropy,
    entropy_production_rate,
    evolve_master,
    order_parameter,
    planck_nbar,
    planck_temperature,
    thermo_report,
)
from thermofield.generators import oscillator_hamiltonian
from thermofield.spaces import (
    TruncationOverflowError,
    build_space,
    initial_vacuum,
    thermal_bra,
)

from .oracles import scalar_rk4


@pytest.fixture(scope="module")
def hat30(ops30):
    return oscillator_hamiltonian(ops30, 1.0, 0.5, 1.0, 0.5)


class TestEvolveMaster:
    def test_no_damping_keeps_occupation(self, ops30):
        hat = oscillator_hamiltonian(ops30, 1.0, 0.0, 1.0)
        ket0 = initial_vacuum(ops30, 0.5)
        traj = evolve_master(hat, ket0, 1.0, 1e-3, observables={"n": ops30.number()})
        assert np.max(np.abs(traj.observables["n"] - 0.5)) < 1e-10

    def test_relaxation_against_scalar_integrator(self, ops30, hat30):
        # independent oracle: plain RK4 on dn/dt = -2κ(n - n̄)
        ket0 = initial_vacuum(ops30, 0.0)
        traj = evolve_master(hat30, ket0, 1.0, 1e-3, observables={"n": ops30.number()})
        oracle = scalar_rk4(lambda n: -2.0 * 0.5 * (n - 1.0), 0.0, 1.0, 1e-3)
        assert traj.observables["n"][-1] == pytest.approx(oracle, abs=1e-6)
        assert traj.observables["n"][-1] == pytest.approx(1.0 - np.exp(-1.0), abs=1e-6)

    def test_normalisation_conserved(self, ops30, hat30):
        ket0 = initial_vacuum(ops30, 0.0)
        traj = evolve_master(hat30, ket0, 5.0, 1e-3)
        assert np.max(traj.norm_drift) < 1e-9

    def test_step_guard(self, ops30, hat30):
        with pytest.raises(StepSizeError):
            evolve_master(hat30, initial_vacuum(ops30, 0.0), 1.0, dt=0.05)

    def test_truncation_overflow_detected(self):
        # drive a tiny space towards n̄ = 2: weight must pile on top levels
        ops = build_space(4, 1)
        hat = oscillator_hamiltonian(ops, 1.0, 1.0, 2.0)
        with pytest.raises(TruncationOverflowError):
            evolve_master(hat, initial_vacuum(ops, 0.0), 3.0, 1e-3)


class TestClosedForms:
    def test_boltzmann_initial_value(self):
        assert boltzmann_closed_form(0.7, 1.0, 0.5, 0.0) == pytest.approx(0.7)

    def test_boltzmann_stationary(self):
        t = np.linspace(0.0, 4.0, 9)
        assert np.allclose(boltzmann_closed_form(1.0, 1.0, 0.5, t), 1.0)

    def test_boltzmann_reference_point(self):
        assert boltzmann_closed_form(0.0, 1.0, 0.5, 1.0) == pytest.approx(0.6321206, abs=1e-6)

    def test_planck_limits(self):
        assert planck_nbar(50.0, 1.0) < 1e-20
        assert planck_nbar(1.0, 1.0) == pytest.approx(1.0 / (np.e - 1.0), abs=1e-12)
        assert planck_nbar(np.log(2.0), 1.0) == pytest.approx(1.0, abs=1e-12)

    def test_planck_round_trip(self):
        for nbar in (0.2, 1.0, 3.7):
            t = planck_temperature(1.3, nbar)
            assert planck_nbar(1.3, t) == pytest.approx(nbar, rel=1e-12)

    def test_planck_rejects_nonpositive(self):
        with pytest.raises(ValueError):
            planck_nbar(-1.0, 1.0)
        with pytest.raises(ValueError):
            planck_nbar(1.0, 0.0)


class TestCondensation:
    def test_identity_when_occupation_unchanged(self, ops30):
        ket0 = initial_vacuum(ops30, 0.5)
        state = condensation_state(ops30, ket0, 0.5, 0.5)
        assert np.max(np.abs(state.vector - ket0.vector)) < 1e-14
        assert order_parameter(0.5, 0.5) == 0.0

    def test_matches_master_evolution(self, ops30, hat30):
        ket0 = initial_vacuum(ops30, 0.0)
        traj = evolve_master(hat30, ket0, 1.0, 1e-3, observables={"n": ops30.number()})
        n_t = float(traj.observables["n"][-1])
        state = condensation_state(ops30, ket0, n_t, 0.0)
        assert np.max(np.abs(state.vector - traj.states[-1])) < 1e-8

    def test_order_parameter_value(self):
        n_t = boltzmann_closed_form(0.0, 1.0, 0.5, 1.0)
        assert order_parameter(n_t, 0.0) == pytest.approx(-0.632121, abs=1e-6)

    def test_order_parameter_from_state(self, ops30, hat30):
        # ⟨1|γ_t γ̃_t|ket⟩ with the occupation-n(t) quasi-particles
        from thermofield.generators import bogoliubov, doublet_transform

        ket0 = initial_vacuum(ops30, 0.0)
        traj = evolve_master(hat30, ket0, 1.0, 1e-3, observables={"n": ops30.number()})
        n_t = float(traj.observables["n"][-1])
        (gam, _), (_, minus_tilde) = doublet_transform(ops30, bogoliubov(n_t))
        bra = thermal_bra(ops30.space)
        val = bra.vector @ (gam @ (-1.0 * minus_tilde)).matrix @ ket0.vector
        assert val == pytest.approx(order_parameter(n_t, 0.0), abs=1e-8)

    def test_occupation_derivative_is_pair_creation(self, ops30):
        # the vacuum is a functional of the occupation: d|0(n)⟩/dn = γ⁺γ̃⁺|0(n)⟩
        gp = ops30.a_dag - ops30.a_tilde
        gtp = ops30.a_tilde_dag - ops30.a
        pair = (gp @ gtp).matrix
        h = 1e-4
        for n in (0.3, 0.8):
            up = initial_vacuum(ops30, n + h).vector
            dn = initial_vacuum(ops30, n - h).vector
            fd = (up - dn) / (2 * h)
            target = pair @ initial_vacuum(ops30, n).vector
            assert np.max(np.abs(fd - target)) < 1e-6


class TestThermodynamics:
    def test_entropy_limits(self):
        assert entropy(0.0) == 0.0
        assert entropy(1.0) == pytest.approx(2.0 * np.log(2.0), abs=1e-12)

    def test_production_rate_reference_point(self):
        assert entropy_production_rate(2.0, 1.0, 0.5) == pytest.approx(
            np.log(4.0 / 3.0), abs=1e-9
        )

    def test_equilibrium_and_quasistatic(self):
        assert entropy_production_rate(1.0, 1.0, 0.5) == 0.0
        assert entropy_production_rate(2.0, 1.0, 0.0) == 0.0

    def test_nonnegative_on_grid(self):
        n = np.linspace(1e-6, 4.0, 200)
        rates = entropy_production_rate(n, 1.0, 0.5)
        assert np.min(rates) >= -1e-12

    def test_undefined_temperature_rejected(self):
        with pytest.raises(ValueError):
            entropy_production_rate(1.0, 0.0, 0.5)

    def test_balance_chain(self, ops30, hat30):
        ket0 = initial_vacuum(ops30, 0.0)
        traj = evolve_master(hat30, ket0, 2.0, 1e-3, observables={"n": ops30.number()})
        report = thermo_report(traj.times, traj.observables["n"], 1.0, 1.0, 0.5)
        assert report.balance_residual() < 1e-8
        finite = np.isfinite(report.production_rate)
        assert np.min(report.production_rate[finite]) >= -1e-12

    def test_heat_rate_sign(self):
        # relaxing down from n0 > n̄ releases heat
        report = thermo_report([0.0], [2.0], 1.0, 1.0, 0.5)
        assert report.heat_rate[0] < 0.0


@pytest.mark.filterwarnings("ignore:cutoff")
@pytest.mark.parametrize("kappa", [0.1, 0.5, 1.0])
@pytest.mark.parametrize("nbar,n0", [(0.0, 1.0), (0.5, 0.0), (1.0, 0.0)])
def test_relaxation_grid_small(ops30, kappa, nbar, n0):
    """Spot grid at moderate occupations; the full grid runs in acceptance."""
    hat = oscillator_hamiltonian(ops30, 1.0, kappa, nbar, 0.5)
    traj = evolve_master(hat, initial_vacuum(ops30, n0), 1.5, 1e-3,
                         observables={"n": ops30.number()})
    closed = boltzmann_closed_form(n0, nbar, kappa, traj.times)
    assert np.max(np.abs(traj.observables["n"] - closed)) < 1e-6
