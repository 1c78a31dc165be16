"""Two-point functions: closed-form retarded/advanced pair and numerical
time-ordered correlators from Schrödinger evolution.

The doublet correlator G(t,t')^{μν} = -i⟨1|T[a(t)^μ ā(t')^ν]|ket⟩ factorises
through the occupation-dependent 2x2 mixing as B⁻¹(n(t)) 𝒢(t,t') B(n(t')),
where 𝒢 = diag(G_R, G_A) is diagonal in the rotated frame.  Equal times are
assigned to the retarded branch (θ(0) = 1), which fixes G_R(t,t) = -i.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.linalg import expm_multiply

from .dynamics import boltzmann_closed_form
from .generators import HatHamiltonian, bogoliubov, bogoliubov_inverse
from .spaces import LadderOperators, ThermalKet, thermal_bra

__all__ = [
    "PropagatorPair",
    "closed_form_propagators",
    "numeric_two_point",
    "sandwich_prediction",
    "gamma_frame_matrix",
]


@dataclass(frozen=True)
class PropagatorPair:
    """Retarded/advanced pair for a damped mode."""

    omega: float
    kappa: float

    def g_r(self, t: float, tp: float) -> complex:
        """-i θ(t-t') e^{-i(ω-iκ)(t-t')}, with θ(0) = 1."""
        if t < tp:
            return 0.0
        return -1j * np.exp(-1j * (self.omega - 1j * self.kappa) * (t - tp))

    def g_a(self, t: float, tp: float) -> complex:
        """+i θ(t'-t) e^{-i(ω+iκ)(t-t')}, equal times excluded."""
        if tp <= t:
            return 0.0
        return 1j * np.exp(-1j * (self.omega + 1j * self.kappa) * (t - tp))

    def script_g(self, t: float, tp: float) -> np.ndarray:
        return np.array([[self.g_r(t, tp), 0.0], [0.0, self.g_a(t, tp)]])


def closed_form_propagators(omega: float, kappa: float) -> PropagatorPair:
    if kappa < 0:
        raise ValueError("kappa must be >= 0")
    return PropagatorPair(omega=omega, kappa=kappa)


def _evolved(hat_csr, ket: np.ndarray, delta_t: float) -> np.ndarray:
    if delta_t == 0.0:
        return ket
    return expm_multiply(-1j * delta_t * hat_csr, ket)


def numeric_two_point(
    hat: HatHamiltonian,
    ops: LadderOperators,
    ket0: ThermalKet,
    t: float,
    tp: float,
) -> np.ndarray:
    """All four components of -i⟨1|T[a(t)^μ ā(t')^ν]|ket0⟩ by direct evolution.

    For t >= t' the correlator is -i⟨1| a^μ e^{-iH(t-t')} ā^ν |ψ(t')⟩ and
    mirrored for t' > t; |ψ(s)⟩ is the master-equation state at time s.
    """
    bra = thermal_bra(ops.space).vector
    h = csr_matrix(hat.total.matrix)
    doublet = (ops.a.matrix, ops.a_tilde_dag.matrix)
    co_doublet = (ops.a_dag.matrix, -ops.a_tilde.matrix)
    out = np.empty((2, 2), dtype=complex)
    if t >= tp:
        psi = _evolved(h, ket0.vector, tp)
        for nu_idx in range(2):
            phi = _evolved(h, co_doublet[nu_idx] @ psi, t - tp)
            for mu_idx in range(2):
                out[mu_idx, nu_idx] = -1j * (bra @ (doublet[mu_idx] @ phi))
    else:
        psi = _evolved(h, ket0.vector, t)
        for mu_idx in range(2):
            phi = _evolved(h, doublet[mu_idx] @ psi, tp - t)
            for nu_idx in range(2):
                out[mu_idx, nu_idx] = -1j * (bra @ (co_doublet[nu_idx] @ phi))
    return out


def sandwich_prediction(
    omega: float, kappa: float, nbar: float, n0: float, t: float, tp: float
) -> np.ndarray:
    """Closed form B⁻¹(n(t)) 𝒢(t,t') B(n(t')) with n(s) from the relaxation law."""
    pair = closed_form_propagators(omega, kappa)
    n_t = boltzmann_closed_form(n0, nbar, kappa, t)
    n_tp = boltzmann_closed_form(n0, nbar, kappa, tp)
    return bogoliubov_inverse(n_t) @ pair.script_g(t, tp) @ bogoliubov(n_tp)


def gamma_frame_matrix(
    g_numeric: np.ndarray, omega: float, kappa: float, nbar: float, n0: float, t: float, tp: float
) -> np.ndarray:
    """Rotate a numeric doublet correlator into the frame where it is diagonal."""
    n_t = boltzmann_closed_form(n0, nbar, kappa, t)
    n_tp = boltzmann_closed_form(n0, nbar, kappa, tp)
    return bogoliubov(n_t) @ g_numeric @ bogoliubov_inverse(n_tp)
