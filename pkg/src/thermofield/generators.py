"""Time-evolution generators on the doubled space.

A generator splits as H = H_S + i(Π_R + Π_D): a Hermitian-difference system
part, a relaxational part and a diffusive part.  Every generator built here is
tildian ((iH)~ = iH) and, except where a test deliberately probes the
opposite, annihilated by the flat bra from the left.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .noise import Martingale
from .spaces import (
    LadderOperators,
    ThermalOperator,
    commutator,
    position_momentum,
    thermal_bra,
    tilde_conjugate,
)

__all__ = [
    "SemiFreeCoefficients",
    "GammaSet",
    "HatHamiltonian",
    "gamma_set",
    "oscillator_hamiltonian",
    "kramers_hamiltonian",
    "UnitaryKramersReport",
    "unitary_kramers_generator",
    "bogoliubov",
    "bogoliubov_inverse",
    "doublet_coupling_matrix",
    "TAU_3",
    "TAU_PLUS",
    "doublet_transform",
    "DOperators",
    "diagonal_d_operators",
    "verify_diagonal_form",
    "oscillator_martingale",
    "oscillator_unitary_martingale",
    "kramers_martingale",
    "kramers_unitary_martingale",
    "oscillator_pi_ladder",
]

TAU_3 = np.array([[1.0, 0.0], [0.0, -1.0]])
TAU_PLUS = np.array([[0.0, 1.0], [0.0, 0.0]])


@dataclass(frozen=True)
class SemiFreeCoefficients:
    """Coefficients of the bilinear phase-invariant generator.

    The imaginary part is c1 (a†a + ã†ã) + c2 aã + c3 a†ã† + c4; annihilation
    of the flat bra forces 2 c1 + c2 + c3 = 0 and c3 + c4 = 0.
    """

    c1: float
    c2: float
    c3: float
    c4: float
    omega: float

    def __post_init__(self):
        if abs(2 * self.c1 + self.c2 + self.c3) > 1e-12 or abs(self.c3 + self.c4) > 1e-12:
            raise ValueError("coefficients violate the bra-annihilation constraints")

    @classmethod
    def from_rates(cls, omega: float, kappa: float, nbar: float) -> "SemiFreeCoefficients":
        c1 = -kappa * (1.0 + 2.0 * nbar)
        c2 = 2.0 * kappa * (1.0 + nbar)
        return cls(c1=c1, c2=c2, c3=-(2 * c1 + c2), c4=2 * c1 + c2, omega=omega)

    @property
    def kappa(self) -> float:
        return self.c1 + self.c2

    @property
    def pump_rate(self) -> float:
        """The constant source term 2 κ n̄ = -(2 c1 + c2)."""
        return -(2 * self.c1 + self.c2)

    @property
    def nbar(self) -> float:
        return self.pump_rate / (2.0 * self.kappa)


@dataclass(frozen=True)
class GammaSet:
    """Quasi-particle pair γ_ν = μa + νã†, γ⁺ = a† - ã and tilde partners.

    [γ_ν, γ⁺] = 1 on the guarded subspace; the creation members annihilate
    the flat bra exactly: ⟨1|γ⁺ = ⟨1|γ̃⁺ = 0.
    """

    nu: float
    gamma_nu: ThermalOperator
    gamma_plus: ThermalOperator
    tilde_gamma_nu: ThermalOperator
    tilde_gamma_plus: ThermalOperator

    @property
    def mu(self) -> float:
        return 1.0 - self.nu


def gamma_set(ops: LadderOperators, nu: float = 0.5) -> GammaSet:
    if not 0.0 <= nu <= 1.0:
        raise ValueError(f"nu must lie in [0, 1], got {nu}")
    mu = 1.0 - nu
    return GammaSet(
        nu=nu,
        gamma_nu=mu * ops.a + nu * ops.a_tilde_dag,
        gamma_plus=ops.a_dag - ops.a_tilde,
        tilde_gamma_nu=mu * ops.a_tilde + nu * ops.a_dag,
        tilde_gamma_plus=ops.a_tilde_dag - ops.a,
    )


@dataclass(frozen=True)
class HatHamiltonian:
    """Generator split H_S + i(Π_R + Π_D) with its parameters."""

    h_s: ThermalOperator
    pi_r: ThermalOperator
    pi_d: ThermalOperator
    params: dict

    @property
    def pi(self) -> ThermalOperator:
        return self.pi_r + self.pi_d

    @property
    def total(self) -> ThermalOperator:
        return self.h_s + 1j * (self.pi_r + self.pi_d)

    @property
    def space(self):
        return self.h_s.space

    def tildian_residual(self) -> float:
        ih = 1j * self.total
        return (tilde_conjugate(ih) - ih).max_norm()

    def bra_defect(self) -> float:
        """max |⟨1|H| on the guarded subspace (zero for a proper generator)."""
        return thermal_bra(self.space).defect(self.total)


def oscillator_hamiltonian(
    ops: LadderOperators, omega: float, kappa: float, nbar: float, nu: float = 0.5
) -> HatHamiltonian:
    """Damped-oscillator generator in the stationary (pumped) form.

    H_S = ω(a†a - ã†ã); the imaginary part, written with the γ operators,
    is Π_R = -κ(γ⁺γ_ν + γ̃⁺γ̃_ν) and Π_D = 2κ(n̄+ν) γ⁺γ̃⁺.  Their sum is
    ν-independent and equals the bilinear ladder form
    -κ[(1+2n̄)(a†a + ã†ã) - 2(1+n̄) aã - 2n̄ a†ã†] - 2κn̄.
    """
    if kappa < 0:
        raise ValueError(f"kappa must be >= 0, got {kappa}")
    if nbar < 0:
        raise ValueError(f"nbar must be >= 0, got {nbar}")
    mu = 1.0 - nu
    a, ad = ops.a.csr(), ops.a_dag.csr()
    at, atd = ops.a_tilde.csr(), ops.a_tilde_dag.csr()
    gp = ad - at
    gn = mu * a + nu * atd
    gtp = atd - a
    gtn = mu * at + nu * ad
    space = ops.space
    wrap = lambda m: ThermalOperator(m.toarray(), space)
    h_s = wrap(omega * (ad @ a - atd @ at))
    pi_r = wrap(-kappa * (gp @ gn + gtp @ gtn))
    # symmetrised product: equal to γ⁺γ̃⁺ in the algebra, but exactly tildian
    # on the truncated space, where the two orderings differ at the top levels
    pi_d = wrap((kappa * (nbar + nu)) * (gp @ gtp + gtp @ gp))
    return HatHamiltonian(
        h_s=h_s,
        pi_r=pi_r,
        pi_d=pi_d,
        params={"omega": omega, "kappa": kappa, "nbar": nbar, "nu": nu, "model": "oscillator"},
    )


def oscillator_pi_ladder(ops: LadderOperators, kappa: float, nbar: float) -> ThermalOperator:
    """Imaginary part in ladder operators, including the constant -2κn̄."""
    n = ops.number()
    nt = ops.tilde_number()
    return (
        -kappa
        * (
            (1.0 + 2.0 * nbar) * (n + nt)
            - 2.0 * (1.0 + nbar) * (ops.a @ ops.a_tilde)
            - 2.0 * nbar * (ops.a_dag @ ops.a_tilde_dag)
        )
        - (2.0 * kappa * nbar) * ops.identity
    )


def kramers_hamiltonian(
    ops: LadderOperators, m: float, omega: float, kappa: float, nbar: float
) -> HatHamiltonian:
    """Position-coupled damped oscillator (x-space diffusion neglected).

    H_S built from p²/2m + mω²x²/2; Π_R = -(i/2)κ(x-x̃)(p+p̃) and
    Π_D = -(κmω/2)(1+2n̄)(x-x̃)².  The resulting evolution is not of Lindblad
    form and need not be completely positive; no repair is attempted.
    """
    if m <= 0 or omega <= 0:
        raise ValueError("m and omega must be positive")
    if kappa < 0 or nbar < 0:
        raise ValueError("kappa and nbar must be >= 0")
    x, p, xt, pt = position_momentum(ops, m, omega)
    xs, ps, xts, pts = x.csr(), p.csr(), xt.csr(), pt.csr()
    space = ops.space
    wrap = lambda mat: ThermalOperator(mat.toarray(), space)
    h_s = wrap(
        (1.0 / (2.0 * m)) * (ps @ ps - pts @ pts)
        + (m * omega**2 / 2.0) * (xs @ xs - xts @ xts)
    )
    dx = xs - xts
    pi_r = wrap((-0.5j * kappa) * (dx @ (ps + pts)))
    pi_d = wrap((-0.5 * kappa * m * omega * (1.0 + 2.0 * nbar)) * (dx @ dx))
    return HatHamiltonian(
        h_s=h_s,
        pi_r=pi_r,
        pi_d=pi_d,
        params={"m": m, "omega": omega, "kappa": kappa, "nbar": nbar, "model": "kramers"},
    )


@dataclass(frozen=True)
class UnitaryKramersReport:
    """Quantified gap between the unitary-picture generator and the full one."""

    diffusion_ratio: float
    missing_relaxational_norm: float
    gap_norm: float


def unitary_kramers_generator(
    ops: LadderOperators, m: float, omega: float, kappa: float, nbar: float
) -> tuple[HatHamiltonian, UnitaryKramersReport]:
    """Generator produced by the position-position unitary scheme.

    Its diffusive part is one quarter of the full one and the relaxational
    part is missing entirely, so it generates a different master equation
    whenever κ > 0.
    """
    full = kramers_hamiltonian(ops, m, omega, kappa, nbar)
    x, _, xt, _ = position_momentum(ops, m, omega)
    dx = x - xt
    pi_u = (-kappa * m * omega / 8.0 * (1.0 + 2.0 * nbar)) * (dx @ dx)
    zero = 0.0 * ops.identity
    unitary = HatHamiltonian(
        h_s=full.h_s,
        pi_r=zero,
        pi_d=pi_u,
        params={"m": m, "omega": omega, "kappa": kappa, "nbar": nbar, "model": "kramers-unitary"},
    )
    gap = unitary.total - full.total
    report = UnitaryKramersReport(
        diffusion_ratio=(m * omega / 8.0) / (m * omega / 2.0),
        missing_relaxational_norm=full.pi_r.guarded_max_norm(),
        gap_norm=float(np.max(np.abs(gap.guarded()))),
    )
    return unitary, report


def oscillator_martingale(ops: LadderOperators, nu: float = 0.5) -> Martingale:
    """Noise part of the non-unitary oscillator generator: i(γ⁺dW + γ̃⁺dW̃).

    Annihilates the system bra exactly (⟨1|γ⁺ = ⟨1|γ̃⁺ = 0), so probability
    is conserved within the relevant system alone.
    """
    g = gamma_set(ops, nu)
    return Martingale(
        [(1j * g.gamma_plus, "dW"), (1j * g.tilde_gamma_plus, "dW_tilde")]
    )


def oscillator_unitary_martingale(ops: LadderOperators, nu: float = 0.5) -> Martingale:
    """Hermitian martingale of the unitary oscillator scheme.

    i(γ⁺dW + γ̃⁺dW̃) - i(γ_ν dW° + γ̃_ν dW̃°): the annihilation-side terms do
    not annihilate the system bra, only the joint (system ⊗ noise) one.
    """
    g = gamma_set(ops, nu)
    return Martingale(
        [
            (1j * g.gamma_plus, "dW"),
            (1j * g.tilde_gamma_plus, "dW_tilde"),
            (-1j * g.gamma_nu, "dW_plus"),
            (-1j * g.tilde_gamma_nu, "dW_tilde_plus"),
        ]
    )


def kramers_martingale(ops: LadderOperators, m: float, omega: float) -> Martingale:
    """(x - x̃)(dX + dX̃): commutative noise, bra-annihilating coefficient."""
    x, _, xt, _ = position_momentum(ops, m, omega)
    dx = x - xt
    return Martingale([(dx, "dX"), (dx, "dX_tilde")])


def kramers_unitary_martingale(ops: LadderOperators, m: float, omega: float) -> Martingale:
    """x dX - x̃ dX̃: the position-position unitary coupling (no cross terms)."""
    x, _, xt, _ = position_momentum(ops, m, omega)
    return Martingale([(x, "dX"), (-1.0 * xt, "dX_tilde")])


def bogoliubov(n: float) -> np.ndarray:
    """Occupation-dependent doublet mixing B(n) = [[1+n, -n], [-1, 1]], det 1."""
    if n < 0:
        raise ValueError(f"occupation must be >= 0, got {n}")
    return np.array([[1.0 + n, -n], [-1.0, 1.0]])


def bogoliubov_inverse(n: float) -> np.ndarray:
    return np.array([[1.0, n], [1.0, 1.0 + n]])


def doublet_coupling_matrix(nbar: float) -> np.ndarray:
    """Damping matrix A in the doublet form Π = -κ ā A a + κ."""
    return np.array(
        [[1.0 + 2.0 * nbar, -2.0 * nbar], [2.0 * (1.0 + nbar), -(1.0 + 2.0 * nbar)]]
    )


def doublet_transform(ops: LadderOperators, b: np.ndarray):
    """Apply a 2x2 mixing to the doublets (a, ã†) and (a†, -ã).

    Returns ((d, d̃†), (d†, -d̃)) with d^μ = B^{μν} a^ν and the co-doublet
    transformed by B⁻¹ from the right.
    """
    a_doublet = (ops.a, ops.a_tilde_dag)
    abar_doublet = (ops.a_dag, -1.0 * ops.a_tilde)
    b_inv = np.linalg.inv(b)
    d = tuple(b[mu, 0] * a_doublet[0] + b[mu, 1] * a_doublet[1] for mu in range(2))
    dbar = tuple(
        b_inv[0, mu] * abar_doublet[0] + b_inv[1, mu] * abar_doublet[1] for mu in range(2)
    )
    return d, dbar


@dataclass(frozen=True)
class DOperators:
    """Modes that diagonalise the damped-oscillator generator."""

    nbar: float
    d: ThermalOperator
    d_dag: ThermalOperator
    d_tilde: ThermalOperator
    d_tilde_dag: ThermalOperator


def diagonal_d_operators(ops: LadderOperators, nbar: float) -> DOperators:
    (d, d_tilde_dag), (d_dag, minus_d_tilde) = doublet_transform(ops, bogoliubov(nbar))
    return DOperators(
        nbar=nbar,
        d=d,
        d_dag=d_dag,
        d_tilde=-1.0 * minus_d_tilde,
        d_tilde_dag=d_tilde_dag,
    )


def verify_diagonal_form(
    hat: HatHamiltonian, dset: DOperators, omega: float, kappa: float
) -> tuple[float, complex]:
    """Rebuild the generator as ω(d†d - d̃†d̃) - iκ(d†d + d̃†d̃) and compare.

    Returns (residual after removing the best-fit multiple of the identity,
    best-fit constant).  The reordering constant inside d†d + d̃†d̃ supplies
    the -2κn̄ term of the ladder form, so the fitted constant is zero.
    """
    nd = dset.d_dag @ dset.d
    ndt = dset.d_tilde_dag @ dset.d_tilde
    rebuilt = omega * (nd - ndt) + (-1j * kappa) * (nd + ndt)
    diff = rebuilt.total if isinstance(rebuilt, HatHamiltonian) else rebuilt
    diff = diff - hat.total
    g = hat.space.guard_projector()
    mask = np.outer(g, g).astype(bool)
    diag = np.eye(hat.space.dim, dtype=bool) & mask
    constant = complex(np.mean(diff.matrix[diag]))
    residual = diff.matrix - constant * np.eye(hat.space.dim)
    return float(np.max(np.abs(residual[mask]))), constant
