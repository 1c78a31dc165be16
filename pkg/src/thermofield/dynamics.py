"""Schrödinger-picture evolution and closed-form references.

The master equation d|ψ⟩/dt = -iH|ψ⟩ is integrated with fixed-step RK4 on a
sparse copy of the generator; the linear desk-scale problems here are not
stiff.  Occupation relaxes by dn/dt = -2κ(n - n̄) toward the Planck value, the
vacuum can equivalently be built by exponentiating pair creation, and the
entropy-production identities close along every trajectory.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.linalg import expm_multiply

from .generators import HatHamiltonian
from .spaces import (
    LadderOperators,
    ThermalKet,
    ThermalOperator,
    TruncationOverflowError,
    thermal_bra,
)

__all__ = [
    "StepSizeError",
    "MasterTrajectory",
    "evolve_master",
    "boltzmann_closed_form",
    "planck_nbar",
    "planck_temperature",
    "pair_creation_operator",
    "condensation_state",
    "condensation_deficit",
    "order_parameter",
    "ThermoReport",
    "thermo_report",
    "entropy",
    "entropy_production_rate",
]


class StepSizeError(ValueError):
    """Time step too large for the generator's spectral radius."""


@dataclass
class MasterTrajectory:
    """Sampled master-equation run: states, observables, normalisation drift."""

    times: np.ndarray
    states: np.ndarray  # (n_samples, dim)
    observables: dict[str, np.ndarray]
    norm_drift: np.ndarray

    @property
    def n_values(self) -> np.ndarray | None:
        return self.observables.get("n")


def _spectral_radius_estimate(matrix: csr_matrix, seed: int = 0, iters: int = 30) -> float:
    rng = np.random.Generator(np.random.Philox(seed))
    v = rng.standard_normal(matrix.shape[0]) + 1j * rng.standard_normal(matrix.shape[0])
    v /= np.linalg.norm(v)
    rho = 0.0
    for _ in range(iters):
        w = matrix @ v
        nw = np.linalg.norm(w)
        if nw == 0.0:
            return 0.0
        rho = nw
        v = w / nw
    return float(rho)


def _characteristic_rate(params: dict) -> float:
    """Fastest per-quantum rate of a generator, from its parameters.

    Independent of the cutoff: the top-of-ladder modes scale the matrix norm
    with N but carry negligible amplitude, so accuracy is set by the physical
    rates ω and κ(1+2n̄).
    """
    omega = abs(params.get("omega", 0.0))
    kappa = params.get("kappa", 0.0)
    nbar = params.get("nbar", 0.0)
    return omega + 2.0 * kappa * (1.0 + 2.0 * nbar)


def evolve_master(
    hat: HatHamiltonian,
    ket0: ThermalKet,
    t_end: float,
    dt: float = 1e-3,
    observables: dict[str, ThermalOperator] | None = None,
    sample_every: int = 10,
    check_overflow: bool = True,
) -> MasterTrajectory:
    """RK4 integration of d|ψ⟩/dt = -iH|ψ⟩ with observable sampling.

    Raises StepSizeError when dt exceeds the step guard (estimated spectral
    radius times dt must stay below 0.1) and TruncationOverflowError when the
    state puts more than 1e-8 relative weight into the top guard levels.
    """
    space = hat.space
    h = csr_matrix(hat.total.matrix)
    rate = _characteristic_rate(hat.params)
    if rate * dt >= 0.1:
        raise StepSizeError(
            f"dt={dt} too large: characteristic rate {rate:.3g} gives "
            f"rate*dt={rate * dt:.3g} >= 0.1"
        )
    radius = _spectral_radius_estimate(h)
    if radius * dt >= 2.5:
        raise StepSizeError(
            f"dt={dt} unstable: spectral radius estimate {radius:.3g} gives "
            f"radius*dt={radius * dt:.3g} >= 2.5 (RK4 stability bound)"
        )
    gen = -1j * h
    bra = thermal_bra(space).vector
    obs = observables or {}
    obs_matrices = {name: csr_matrix(op.matrix) for name, op in obs.items()}

    n_steps = int(round(t_end / dt))
    sample_idx = list(range(0, n_steps + 1, sample_every))
    if sample_idx[-1] != n_steps:
        sample_idx.append(n_steps)
    times = np.array([i * dt for i in sample_idx])

    psi = ket0.vector.copy()
    states = np.empty((len(sample_idx), space.dim), dtype=complex)
    values = {name: np.empty(len(sample_idx), dtype=complex) for name in obs}
    drift = np.empty(len(sample_idx))

    k = 0
    for step in range(n_steps + 1):
        if step == sample_idx[k]:
            states[k] = psi
            for name, mat in obs_matrices.items():
                values[name][k] = bra @ (mat @ psi)
            drift[k] = abs(bra @ psi - 1.0)
            if check_overflow and space.top_weight(psi) > 1e-8:
                raise TruncationOverflowError(
                    f"state weight in top {space.guard} levels exceeds 1e-8 "
                    f"at t={step * dt:.4g}"
                )
            k += 1
        if step == n_steps:
            break
        k1 = gen @ psi
        k2 = gen @ (psi + 0.5 * dt * k1)
        k3 = gen @ (psi + 0.5 * dt * k2)
        k4 = gen @ (psi + dt * k3)
        psi = psi + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)

    observables_out = {}
    for name in values:
        vals = values[name]
        observables_out[name] = vals.real if np.max(np.abs(vals.imag)) < 1e-9 else vals
    return MasterTrajectory(times=times, states=states, observables=observables_out, norm_drift=drift)


def boltzmann_closed_form(n0: float, nbar: float, kappa: float, t) -> np.ndarray | float:
    """n(t) = n̄ + (n0 - n̄) e^{-2κt}."""
    if kappa < 0:
        raise ValueError("kappa must be >= 0")
    return nbar + (n0 - nbar) * np.exp(-2.0 * kappa * np.asarray(t, dtype=float))


def planck_nbar(omega: float, temperature: float) -> float:
    """Equilibrium occupation 1/(e^{ω/T} - 1)."""
    if omega <= 0 or temperature <= 0:
        raise ValueError("omega and temperature must be positive")
    return 1.0 / np.expm1(omega / temperature)


def planck_temperature(omega: float, nbar: float) -> float:
    """Inverse of planck_nbar: T = ω / ln(1 + 1/n̄)."""
    if omega <= 0 or nbar <= 0:
        raise ValueError("omega and nbar must be positive")
    return omega / np.log1p(1.0 / nbar)


def pair_creation_operator(ops: LadderOperators) -> csr_matrix:
    """γ⁺γ̃⁺ with γ⁺ = a† - ã, γ̃⁺ = ã† - a, as a sparse matrix."""
    gamma_plus = ops.a_dag - ops.a_tilde
    tilde_gamma_plus = ops.a_tilde_dag - ops.a
    return csr_matrix((gamma_plus @ tilde_gamma_plus).matrix)


def condensation_state(
    ops: LadderOperators,
    ket0: ThermalKet,
    n_t: float,
    n_0: float,
) -> ThermalKet:
    """|ψ(t)⟩ = exp([n(t) - n(0)] γ⁺γ̃⁺)|ψ(0)⟩ with γ⁺ = a† - ã, γ̃⁺ = ã† - a.

    The exponent annihilates ⟨1| from the right, so normalisation is kept
    automatically; the state moves by condensing correlated pairs, exactly
    as under the master-equation evolution of the same vacuum.

    Conditioning: on a truncated ladder the exponential map is only
    float-stable in the heating direction (n_t >= n_0).  Cooling amplifies
    rounding noise by ~exp(2 |Δn| N); validate that direction through the
    inverse factor instead (apply the +|Δn| exponential to the later state),
    which is the same identity read right to left.
    """
    pair = pair_creation_operator(ops)
    delta = n_t - n_0
    if abs(delta) * 4.0 > ops.space.cutoff:
        raise TruncationOverflowError(
            f"occupation change {delta:.3g} too large for cutoff {ops.space.cutoff}"
        )
    v = expm_multiply(delta * pair, ket0.vector)
    return ThermalKet(v, ops.space)


def condensation_deficit(
    ops: LadderOperators,
    ket0: ThermalKet,
    evolved: np.ndarray,
    n_t: float,
    n_0: float,
) -> float:
    """Relative mismatch between the pair-exponential solution and an evolved
    state, evaluated in whichever direction of the identity is well posed.

    Heating: compare exp(Δn γ⁺γ̃⁺)|ket0⟩ against the evolved state.
    Cooling: apply the inverse factor exp(-Δn γ⁺γ̃⁺) to the evolved state
    and compare against |ket0⟩ (the same identity, read right to left).
    """
    delta = n_t - n_0
    if delta >= 0:
        state = condensation_state(ops, ket0, n_t, n_0)
        return float(np.linalg.norm(state.vector - evolved) / np.linalg.norm(evolved))
    pair = pair_creation_operator(ops)
    back = expm_multiply(-delta * pair, evolved)
    return float(np.linalg.norm(back - ket0.vector) / np.linalg.norm(ket0.vector))


def order_parameter(n_t: float, n_0: float) -> float:
    """⟨1|γ_t γ̃_t|ψ(0)⟩ = n(0) - n(t): nonzero once dissipation has acted."""
    return n_0 - n_t


@dataclass
class ThermoReport:
    """Entropy bookkeeping along an occupation path (units: k_B = 1, ħ = 1)."""

    times: np.ndarray
    entropy: np.ndarray
    heat_rate: np.ndarray  # d'Q/dt = ω dn/dt
    entropy_flow_rate: np.ndarray  # dS_e/dt = (ω/T) dn/dt
    production_rate: np.ndarray  # dS_i/dt >= 0
    nbar: float
    temperature: float

    def balance_residual(self) -> float:
        """max |dS/dt - dS_e/dt - dS_i/dt| via the analytic chain rule.

        Points with n = 0 are excluded: the production rate diverges there.
        """
        n = self._n_path
        ok = n > 0
        if not np.any(ok):
            return 0.0
        dn_dt = -2.0 * self._kappa * (n[ok] - self.nbar)
        ds_dt = np.log1p(1.0 / n[ok]) * dn_dt
        resid = ds_dt - self.entropy_flow_rate[ok] - self.production_rate[ok]
        return float(np.max(np.abs(resid)))


def entropy(n) -> np.ndarray | float:
    """S(n) = -[n ln n - (1+n) ln(1+n)], continuous at n = 0 with S(0) = 0."""
    n = np.asarray(n, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        s = np.where(n > 0, -(n * np.log(np.where(n > 0, n, 1.0)) - (1 + n) * np.log1p(n)), 0.0)
    return s if s.ndim else float(s)


def entropy_production_rate(n, nbar: float, kappa: float) -> np.ndarray | float:
    """dS_i/dt = 2κ(n - n̄) ln[n(1+n̄) / (n̄(1+n))]; +inf at n = 0, 0 at n = n̄."""
    if nbar <= 0:
        raise ValueError("nbar must be positive (temperature undefined otherwise)")
    n = np.asarray(n, dtype=float)
    safe = np.where(n > 0, n, 1.0)
    with np.errstate(divide="ignore", invalid="ignore"):
        rate = np.where(
            n > 0,
            2.0 * kappa * (n - nbar) * np.log(safe * (1.0 + nbar) / (nbar * (1.0 + safe))),
            np.inf if kappa > 0 else 0.0,
        )
    return rate if rate.ndim else float(rate)


def thermo_report(times, n_path, omega: float, nbar: float, kappa: float) -> ThermoReport:
    """Entropy, heat and entropy-production rates along n(t).

    The reservoir temperature is the one thermometer in the problem, defined
    by inverting the Planck law at n̄.
    """
    times = np.asarray(times, dtype=float)
    n_path = np.asarray(n_path, dtype=float)
    temperature = planck_temperature(omega, nbar)
    dn_dt = -2.0 * kappa * (n_path - nbar)
    report = ThermoReport(
        times=times,
        entropy=entropy(n_path),
        heat_rate=omega * dn_dt,
        entropy_flow_rate=(omega / temperature) * dn_dt,
        production_rate=entropy_production_rate(n_path, nbar, kappa),
        nbar=nbar,
        temperature=temperature,
    )
    report._n_path = n_path
    report._kappa = kappa
    return report
