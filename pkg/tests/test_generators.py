"""Generator construction: constraints, splittings, doublet machinery."""

import numpy as np
import pytest

from thermofield.generators import (
    TAU_3,
    TAU_PLUS,
    SemiFreeCoefficients,
    bogoliubov,
    bogoliubov_inverse,
    diagonal_d_operators,
    doublet_coupling_matrix,
    doublet_transform,
    gamma_set,
    kramers_hamiltonian,
    oscillator_hamiltonian,
    oscillator_pi_ladder,
    unitary_kramers_generator,
    verify_diagonal_form,
)
from thermofield.spaces import (
    build_space,
    commutator,
    position_momentum,
    thermal_bra,
    tilde_conjugate,
)


class TestSemiFreeCoefficients:
    def test_rate_extraction(self):
        # c1 = -κ(1+2n̄), c2 = 2κ(1+n̄) gives back κ and the pump rate 2κn̄
        c = SemiFreeCoefficients.from_rates(omega=1.0, kappa=0.3, nbar=2.0)
        assert c.kappa == pytest.approx(0.3)
        assert c.pump_rate == pytest.approx(1.2)
        assert c.nbar == pytest.approx(2.0)

    def test_constraints_enforced(self):
        with pytest.raises(ValueError):
            SemiFreeCoefficients(c1=1.0, c2=0.0, c3=0.0, c4=0.0, omega=1.0)

    def test_random_rate_closure(self):
        rng = np.random.default_rng(4)
        for _ in range(20):
            kappa = float(rng.uniform(0.05, 2.0))
            nbar = float(rng.uniform(0.0, 3.0))
            c = SemiFreeCoefficients.from_rates(1.0, kappa, nbar)
            assert c.kappa == pytest.approx(kappa, abs=1e-12)
            assert c.pump_rate == pytest.approx(2 * kappa * nbar, abs=1e-12)


class TestGammaSet:
    def test_nu_zero_reduces_to_ladder(self, ops20):
        g = gamma_set(ops20, 0.0)
        assert (g.gamma_nu - ops20.a).max_norm() == 0.0
        assert (g.gamma_plus - (ops20.a_dag - ops20.a_tilde)).max_norm() == 0.0

    @pytest.mark.parametrize("nu", [0.0, 0.25, 0.5, 1.0])
    def test_commutation(self, ops20, nu):
        g = gamma_set(ops20, nu)
        res = commutator(g.gamma_nu, g.gamma_plus) - ops20.identity
        assert res.guarded_max_norm() < 1e-13

    def test_bra_annihilation_exact(self, ops20):
        g = gamma_set(ops20, 0.5)
        bra = thermal_bra(ops20.space)
        assert np.max(np.abs(bra.apply(g.gamma_plus))) == 0.0
        assert np.max(np.abs(bra.apply(g.tilde_gamma_plus))) == 0.0

    def test_tilde_partners_consistent(self, ops20):
        g = gamma_set(ops20, 0.3)
        assert (tilde_conjugate(g.gamma_nu) - g.tilde_gamma_nu).max_norm() == 0.0
        assert (tilde_conjugate(g.gamma_plus) - g.tilde_gamma_plus).max_norm() == 0.0

    @pytest.mark.parametrize("nu", [-0.1, 1.5])
    def test_out_of_range_rejected(self, ops20, nu):
        with pytest.raises(ValueError):
            gamma_set(ops20, nu)


class TestOscillatorHamiltonian:
    def test_zero_damping_is_free(self, ops20):
        hat = oscillator_hamiltonian(ops20, 1.3, 0.0, 1.0, 0.5)
        assert hat.pi_r.max_norm() == 0.0
        assert hat.pi_d.max_norm() == 0.0
        target = 1.3 * (ops20.number() - ops20.tilde_number())
        assert (hat.total - target).max_norm() < 1e-14

    @pytest.mark.parametrize("nu", [0.0, 0.25, 0.5, 1.0])
    def test_gamma_form_equals_ladder_form(self, ops20, nu):
        hat = oscillator_hamiltonian(ops20, 1.0, 0.5, 1.0, nu)
        ladder = oscillator_pi_ladder(ops20, 0.5, 1.0)
        assert (hat.pi - ladder).guarded_max_norm() < 1e-12

    def test_diffusive_coefficient(self, ops20):
        # 2κ(n̄+ν) = 1.5 at ν = 1/2, n̄ = 1, κ = 0.5
        hat = oscillator_hamiltonian(ops20, 1.0, 0.5, 1.0, 0.5)
        gp = ops20.a_dag - ops20.a_tilde
        gtp = ops20.a_tilde_dag - ops20.a
        target = 0.75 * (gp @ gtp + gtp @ gp)  # 1.5 × symmetrised pair
        assert (hat.pi_d - target).max_norm() < 1e-13

    def test_split_parts_annihilate_bra(self, ops20):
        hat = oscillator_hamiltonian(ops20, 1.0, 0.5, 1.0, 0.5)
        bra = thermal_bra(ops20.space)
        assert bra.defect(hat.h_s) < 1e-12
        assert bra.defect(hat.pi_r) < 1e-12
        assert bra.defect(hat.pi_d) < 1e-12

    def test_invalid_parameters(self, ops20):
        with pytest.raises(ValueError):
            oscillator_hamiltonian(ops20, 1.0, -0.5, 1.0)
        with pytest.raises(ValueError):
            oscillator_hamiltonian(ops20, 1.0, 0.5, -1.0)

    @pytest.mark.parametrize("kappa,nbar", [(0.1, 0.0), (0.5, 1.0), (1.0, 2.0)])
    def test_axioms_across_parameters(self, ops20, kappa, nbar):
        hat = oscillator_hamiltonian(ops20, 1.0, kappa, nbar, 0.5)
        assert hat.bra_defect() < 1e-12
        assert hat.tildian_residual() < 1e-13


class TestKramersHamiltonian:
    def test_zero_damping_pure_harmonic(self, ops20):
        hat = kramers_hamiltonian(ops20, 1.0, 1.0, 0.0, 0.0)
        assert hat.pi_r.max_norm() == 0.0
        assert hat.pi_d.max_norm() == 0.0

    def test_bra_annihilates_position_difference(self, ops30):
        x, p, xt, pt = position_momentum(ops30, 1.0, 1.0)
        bra = thermal_bra(ops30.space)
        assert bra.defect(x - xt) < 1e-12
        assert bra.defect(p - pt) < 1e-12  # thermal state condition on p

    def test_tilde_difference_pair_commutes(self, ops30):
        # [x - x̃, p - p̃] = i + (-i) = 0; the relaxational part instead
        # relies on its leftmost factor (x - x̃) killing the flat bra
        x, p, xt, pt = position_momentum(ops30, 1.0, 1.0)
        assert commutator(x - xt, p - pt).guarded_max_norm() < 1e-13

    def test_axioms(self, ops30):
        hat = kramers_hamiltonian(ops30, 1.0, 1.0, 0.2, 0.5)
        assert hat.bra_defect() < 1e-12
        assert hat.tildian_residual() < 1e-13

    def test_parameter_validation(self, ops20):
        with pytest.raises(ValueError):
            kramers_hamiltonian(ops20, -1.0, 1.0, 0.2, 0.5)
        with pytest.raises(ValueError):
            kramers_hamiltonian(ops20, 1.0, 1.0, -0.2, 0.5)


class TestUnitaryKramers:
    def test_quarter_diffusion_ratio(self, ops20):
        _, report = unitary_kramers_generator(ops20, 1.0, 1.0, 0.2, 0.0)
        assert report.diffusion_ratio == pytest.approx(0.25, abs=1e-15)

    def test_zero_damping_coincides(self, ops20):
        hat_u, report = unitary_kramers_generator(ops20, 1.0, 1.0, 0.0, 0.0)
        full = kramers_hamiltonian(ops20, 1.0, 1.0, 0.0, 0.0)
        assert (hat_u.total - full.total).max_norm() == 0.0
        assert report.gap_norm == 0.0

    def test_gap_decomposition(self, ops20):
        # H° - H = -i(Π_R + (3/4)Π_D)
        hat_u, report = unitary_kramers_generator(ops20, 1.0, 1.0, 0.2, 0.0)
        full = kramers_hamiltonian(ops20, 1.0, 1.0, 0.2, 0.0)
        gap = hat_u.total - full.total
        target = -1j * (full.pi_r + 0.75 * full.pi_d)
        assert (gap - target).guarded_max_norm() < 1e-12
        assert report.gap_norm > 0.0
        assert report.missing_relaxational_norm > 0.0

    def test_quarter_generator_still_annihilated_by_bra(self, ops20):
        # the quarter-strength diffusion is built on (x - x̃)², whose left
        # factor kills the flat bra, so this generator conserves probability
        # even though it is the wrong generator for the damped dynamics
        hat_u, _ = unitary_kramers_generator(ops20, 1.0, 1.0, 0.2, 0.5)
        assert hat_u.bra_defect() < 1e-12
        assert hat_u.tildian_residual() < 1e-13


class TestDoubletMachinery:
    def test_bogoliubov_basics(self):
        b = bogoliubov(0.0)
        assert np.allclose(b, [[1.0, 0.0], [-1.0, 1.0]])
        for n in (0.0, 0.5, 2.7):
            assert np.linalg.det(bogoliubov(n)) == pytest.approx(1.0, abs=1e-14)
            assert np.allclose(bogoliubov(n) @ bogoliubov_inverse(n), np.eye(2), atol=1e-14)

    def test_coupling_matrix_at_unit_occupation(self):
        assert np.allclose(doublet_coupling_matrix(1.0), [[3.0, -2.0], [4.0, -3.0]])

    def test_rotated_coupling_identity(self):
        # B(n) A B(n)⁻¹ = τ₃ + 2(n - n̄) τ₊; hand value at n=2, n̄=0.5: τ₃+3τ₊
        b = bogoliubov(2.0)
        a = doublet_coupling_matrix(0.5)
        lhs = b @ a @ bogoliubov_inverse(2.0)
        assert np.allclose(lhs, TAU_3 + 3.0 * TAU_PLUS, atol=1e-14)

    @pytest.mark.parametrize("n,nbar", [(0.0, 0.0), (1.0, 1.0), (2.5, 0.3)])
    def test_rotated_coupling_general(self, n, nbar):
        lhs = bogoliubov(n) @ doublet_coupling_matrix(nbar) @ bogoliubov_inverse(n)
        assert np.allclose(lhs, TAU_3 + 2.0 * (n - nbar) * TAU_PLUS, atol=1e-13)

    def test_mixing_derivative_identity(self):
        # dB/dn · B⁻¹ = -τ₊ (per unit dn/dt)
        h = 1e-6
        n = 0.8
        db_dn = (bogoliubov(n + h) - bogoliubov(n - h)) / (2 * h)
        assert np.allclose(db_dn @ bogoliubov_inverse(n), -TAU_PLUS, atol=1e-9)

    def test_doublet_transform_commutators(self, ops20):
        (d, dtd), (ddag, mdt) = doublet_transform(ops20, bogoliubov(0.7))
        assert commutator(d, ddag).guarded_max_norm() - 1.0 < 1e-12
        assert (commutator(d, ddag) - ops20.identity).guarded_max_norm() < 1e-12
        assert commutator(d, mdt).guarded_max_norm() < 1e-12  # off-diagonal pair


class TestDiagonalForm:
    def test_zero_occupation_modes_are_bare(self, ops20):
        dset = diagonal_d_operators(ops20, 0.0)
        assert (dset.d - ops20.a).max_norm() == 0.0
        assert (dset.d_tilde_dag - (ops20.a_tilde_dag - ops20.a)).max_norm() == 0.0
        assert (commutator(dset.d, dset.d_dag) - ops20.identity).guarded_max_norm() < 1e-12

    def test_zero_damping_diagonal_form(self, ops20):
        hat = oscillator_hamiltonian(ops20, 1.0, 0.0, 1.0)
        dset = diagonal_d_operators(ops20, 1.0)
        residual, constant = verify_diagonal_form(hat, dset, 1.0, 0.0)
        assert residual < 1e-12
        assert abs(constant) < 1e-12

    def test_reconstruction_exact_including_constant(self, ops20):
        # the reordering constant inside d†d + d̃†d̃ supplies the -2κn̄ term,
        # so the rotated form reproduces the generator with no offset at all
        hat = oscillator_hamiltonian(ops20, 1.0, 0.5, 1.0, 0.5)
        dset = diagonal_d_operators(ops20, 1.0)
        residual, constant = verify_diagonal_form(hat, dset, 1.0, 0.5)
        assert residual < 1e-12
        assert abs(constant) < 1e-12

    def test_initial_ket_condition_in_d_modes(self):
        # d|ket⟩ = (n - n̄) d̃†|ket⟩ on the guarded subspace
        from thermofield.spaces import initial_vacuum

        ops = build_space(40, 3)
        dset = diagonal_d_operators(ops, 0.5)
        ket = initial_vacuum(ops, 1.0)
        lhs = dset.d.matrix @ ket.vector
        rhs = 0.5 * (dset.d_tilde_dag.matrix @ ket.vector)
        g = ops.space.guard_projector()
        assert np.max(np.abs((lhs - rhs) * g)) < 1e-11
