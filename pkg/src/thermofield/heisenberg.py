"""Heisenberg-picture linear processes and classical vector SDEs.

Every model here is linear, so a Heisenberg operator is represented exactly
as coefficients over the initial-operator basis plus a ledger of noise
kernels ∫ k(t,s) dF_s — never as a matrix on a joint system⊗noise space.
Because the drift is time-independent, a kernel depends only on the lag
t - s and is stored as a single lag array per noise symbol.

Equal-time commutators reduce to c-numbers (basis pair table plus
kernel-kernel overlap integrals against the increment commutator table), and
weak moments pair kernels through the second-moment table.  Kernel overlap
integrals use composite Simpson quadrature on the shared grid.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import simpson
from scipy.linalg import expm

from .noise import GaussianIncrementSampler, NoiseAlgebra
from .spaces import LadderOperators, ThermalBra, ThermalKet, position_momentum

__all__ = [
    "KINDS",
    "SystemSpec",
    "LinearProcess",
    "evolve_process",
    "equal_time_commutator",
    "weak_moment",
    "basis_matrices",
    "EnsembleResult",
    "simulate_vector_sde",
    "mean_ode_solution",
]

KINDS = (
    "oscillator-nonunitary",
    "oscillator-unitary",
    "kramers-nonunitary",
    "kramers-unitary",
    "averaged-reference",
)

OSC_BASIS = ("a", "a_tilde_dag", "a_dag", "a_tilde", "one")
KRAMERS_BASIS = ("x", "p", "x_tilde", "p_tilde", "one")


@dataclass(frozen=True)
class SystemSpec:
    """One of the named linear models with its parameters.

    kind selects drift matrix and noise-injection rule:
      oscillator-nonunitary  da = -iωa dt - κ[(μ-ν)a + 2ν ã†] dt + dW
      oscillator-unitary     da = -(iω+κ)a dt + sqrt(2κ) dB   (shifted noise)
      kramers-nonunitary     dx = p/m dt + (κ/2)(x-x̃)dt,
                             dp = -mω²x dt - (κ/2)(p+p̃)dt - (dX+dX̃)
      kramers-unitary        dx = p/m dt, dp = -mω²x dt - dX
      averaged-reference     noise-averaged damped pair (commutator decays)
    """

    kind: str
    omega: float = 1.0
    kappa: float = 0.5
    nbar: float = 1.0
    nu: float = 0.5
    m: float = 1.0

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown system kind {self.kind!r}; expected one of {KINDS}")

    @property
    def basis(self) -> tuple[str, ...]:
        return KRAMERS_BASIS if self.kind.startswith("kramers") else OSC_BASIS

    def algebra(self) -> NoiseAlgebra:
        return NoiseAlgebra(
            nbar=self.nbar, kappa=self.kappa, nu=self.nu, m_omega=self.m * self.omega
        )

    def drift_matrix(self) -> np.ndarray:
        """5x5 drift M with dO_b = Σ_b' M[b,b'] O_b' dt (last slot is the unit)."""
        w, k, m = self.omega, self.kappa, self.m
        mu, nu = 1.0 - self.nu, self.nu
        drift = np.zeros((5, 5), dtype=complex)
        if self.kind == "oscillator-nonunitary":
            drift[0, 0] = -1j * w - k * (mu - nu)
            drift[0, 1] = -2.0 * k * nu
            drift[1, 0] = -2.0 * k * mu
            drift[1, 1] = -1j * w + k * (mu - nu)
            drift[2, 2] = 1j * w + k * (mu - nu)
            drift[2, 3] = -2.0 * k * mu
            drift[3, 2] = -2.0 * k * nu
            drift[3, 3] = 1j * w - k * (mu - nu)
        elif self.kind in ("oscillator-unitary", "averaged-reference"):
            drift[0, 0] = drift[1, 1] = -1j * w - k
            drift[2, 2] = drift[3, 3] = 1j * w - k
        elif self.kind == "kramers-nonunitary":
            drift[0, :4] = [0.5 * k, 1.0 / m, -0.5 * k, 0.0]
            drift[1, :4] = [-m * w**2, -0.5 * k, 0.0, -0.5 * k]
            drift[2, :4] = [-0.5 * k, 0.0, 0.5 * k, 1.0 / m]
            drift[3, :4] = [0.0, -0.5 * k, -m * w**2, -0.5 * k]
        elif self.kind == "kramers-unitary":
            drift[0, 1] = 1.0 / m
            drift[1, 0] = -m * w**2
            drift[2, 3] = 1.0 / m
            drift[3, 2] = -m * w**2
        return drift

    def noise_injections(self) -> dict[str, np.ndarray]:
        """Injection weight vectors over the basis, per increment symbol."""
        sk = np.sqrt(2.0 * self.kappa)
        if self.kind == "oscillator-nonunitary":
            return {
                "dW": np.array([1.0, 1.0, 0.0, 0.0, 0.0], dtype=complex),
                "dW_tilde": np.array([0.0, 0.0, 1.0, 1.0, 0.0], dtype=complex),
            }
        if self.kind == "oscillator-unitary":
            return {
                "dB": np.array([sk, 0, 0, 0, 0], dtype=complex),
                "dB_tilde_dag": np.array([0, sk, 0, 0, 0], dtype=complex),
                "dB_dag": np.array([0, 0, sk, 0, 0], dtype=complex),
                "dB_tilde": np.array([0, 0, 0, sk, 0], dtype=complex),
            }
        if self.kind == "kramers-nonunitary":
            inj = np.array([0.0, -1.0, 0.0, -1.0, 0.0], dtype=complex)
            return {"dX": inj, "dX_tilde": inj.copy()}
        if self.kind == "kramers-unitary":
            return {
                "dX": np.array([0, -1.0, 0, 0, 0], dtype=complex),
                "dX_tilde": np.array([0, 0, 0, -1.0, 0], dtype=complex),
            }
        return {}

    def basis_commutators(self) -> np.ndarray:
        """c-number table [O_b, O_b'] of the initial operators."""
        table = np.zeros((5, 5), dtype=complex)
        if self.kind.startswith("kramers"):
            table[0, 1] = 1j  # [x, p]
            table[1, 0] = -1j
            table[2, 3] = -1j  # [x̃, p̃]
            table[3, 2] = 1j
        else:
            table[0, 2] = 1.0  # [a, a†]
            table[2, 0] = -1.0
            table[1, 3] = -1.0  # [ã†, ã]
            table[3, 1] = 1.0
        return table


@dataclass
class LinearProcess:
    """Exact solution of a seeded linear Langevin equation.

    coeffs[i] are the basis coefficients at t_i; kernels[name][r] is the
    kernel value at lag r*dt, so the noise part at t_i is
    Σ_name Σ_{j<=i} kernels[name][i-j] dF_{t_j}.
    """

    spec: SystemSpec
    times: np.ndarray
    coeffs: np.ndarray
    kernels: dict[str, np.ndarray] = field(default_factory=dict)

    @property
    def dt(self) -> float:
        return float(self.times[1] - self.times[0]) if len(self.times) > 1 else 0.0

    def index_of(self, t: float) -> int:
        i = int(round(t / self.dt)) if self.dt else 0
        if i < 0 or i >= len(self.times) or abs(self.times[i] - t) > 1e-9:
            raise ValueError(f"time {t} is not on the process grid")
        return i


def _seed_row(spec: SystemSpec, seed) -> np.ndarray:
    row = np.zeros(5, dtype=complex)
    if isinstance(seed, str):
        row[spec.basis.index(seed)] = 1.0
    else:
        for label, value in seed.items():
            row[spec.basis.index(label)] = value
    return row


def evolve_process(spec: SystemSpec, seed, t_end: float, dt: float = 1e-3) -> LinearProcess:
    """Evolve an initial operator (basis label or coefficient dict).

    Coefficient rows advance by the exact one-step propagator expm(M dt);
    kernels are the same rows contracted with the noise injection vectors.
    """
    n_steps = int(round(t_end / dt))
    times = np.arange(n_steps + 1) * dt
    m = spec.drift_matrix()
    step = expm(m * dt)
    rows = np.empty((n_steps + 1, 5), dtype=complex)
    rows[0] = _seed_row(spec, seed)
    for i in range(1, n_steps + 1):
        rows[i] = rows[i - 1] @ step
    algebra = spec.algebra()
    kernels = {
        name: rows @ inj
        for name, inj in spec.noise_injections().items()
        if np.any(algebra.symbol(name).coeffs != 0)  # κ = 0 silences the noise
    }
    return LinearProcess(spec=spec, times=times, coeffs=rows, kernels=kernels)


def _overlap_integral(lag_p: np.ndarray, lag_q: np.ndarray, i: int, dt: float) -> complex:
    if i == 0:
        return 0.0
    vals = lag_p[: i + 1] * lag_q[: i + 1]
    return complex(simpson(vals.real, dx=dt) + 1j * simpson(vals.imag, dx=dt))


def equal_time_commutator(p: LinearProcess, q: LinearProcess, t: float) -> complex:
    """[P(t), Q(t)] as a c-number.

    Basis-pair contributions use the initial-operator commutator table; the
    kernel-kernel contribution integrates the increment commutator over the
    shared history, ∫ k_P(t,s) k_Q(t,s) [dF, dF']/dt ds.
    """
    if p.spec != q.spec:
        raise ValueError("processes evolved under different system specs")
    i = p.index_of(t)
    table = p.spec.basis_commutators()
    total = complex(p.coeffs[i] @ table @ q.coeffs[i])
    algebra = p.spec.algebra()
    for sym_p, lag_p in p.kernels.items():
        for sym_q, lag_q in q.kernels.items():
            c = algebra.increment_commutator(sym_p, sym_q)
            if c != 0:
                total += c * _overlap_integral(lag_p, lag_q, i, p.dt)
    return total


def basis_matrices(spec: SystemSpec, ops: LadderOperators) -> dict:
    """Thermal-space matrices for the initial-operator basis of a spec."""
    if spec.kind.startswith("kramers"):
        x, pp, xt, pt = position_momentum(ops, spec.m, spec.omega)
        named = {"x": x, "p": pp, "x_tilde": xt, "p_tilde": pt}
    else:
        named = {
            "a": ops.a,
            "a_tilde_dag": ops.a_tilde_dag,
            "a_dag": ops.a_dag,
            "a_tilde": ops.a_tilde,
        }
    named["one"] = ops.identity
    return named


def weak_moment(
    processes,
    bra: ThermalBra,
    ket: ThermalKet,
    ops: LadderOperators,
    t: float,
) -> complex:
    """⟨⟨bra| P_1(t) ... P_k(t) |ket⟩⟩ for one or two processes.

    Basis terms are evaluated with thermal-space matrices between the bra and
    ket; kernel pairs contract through the weak second-moment table.  Single
    kernels average to zero.  Terms with more than two kernels would need
    Gaussian pairing and are rejected.
    """
    processes = list(processes)
    if not 1 <= len(processes) <= 2:
        raise ValueError("weak_moment supports products of one or two processes")
    spec = processes[0].spec
    mats = basis_matrices(spec, ops)
    labels = spec.basis
    i = processes[0].index_of(t)

    if len(processes) == 1:
        p = processes[0]
        return complex(
            sum(
                p.coeffs[i, b] * (bra.vector @ mats[labels[b]].matrix @ ket.vector)
                for b in range(5)
                if p.coeffs[i, b] != 0
            )
        )

    p, q = processes
    if q.spec != spec:
        raise ValueError("processes evolved under different system specs")
    total = 0.0 + 0.0j
    for b in range(5):
        if p.coeffs[i, b] == 0:
            continue
        left = bra.vector @ mats[labels[b]].matrix
        for b2 in range(5):
            if q.coeffs[i, b2] == 0:
                continue
            total += p.coeffs[i, b] * q.coeffs[i, b2] * (left @ mats[labels[b2]].matrix @ ket.vector)
    algebra = spec.algebra()
    for sym_p, lag_p in p.kernels.items():
        for sym_q, lag_q in q.kernels.items():
            w = algebra.ito_product(sym_p, sym_q)
            if w != 0:
                total += w * _overlap_integral(lag_p, lag_q, i, p.dt)
    return complex(total)


@dataclass
class EnsembleResult:
    """Monte-Carlo ensemble statistics for a vector SDE."""

    spec: SystemSpec
    seed: int
    n_traj: int
    times: np.ndarray
    means: dict[str, np.ndarray]
    stderr: dict[str, np.ndarray]


def simulate_vector_sde(
    spec: SystemSpec,
    n_traj: int,
    seed: int,
    t_end: float,
    dt: float = 1e-3,
    init=None,
    sample_every: int = 100,
) -> EnsembleResult:
    """Euler-Maruyama ensemble for the c-number vector equations.

    Oscillator kinds damp the complex amplitude at rate κ and feel sqrt(2κ)dB;
    the position-coupled kinds feel -2 dX (non-unitary, damped means) or
    -dX (unitary, undamped means).  Ensemble means converge to the
    deterministic mean equations at rate 1/sqrt(n_traj).
    """
    n_steps = int(round(t_end / dt))
    sample_idx = list(range(0, n_steps + 1, sample_every))
    if sample_idx[-1] != n_steps:
        sample_idx.append(n_steps)
    times = np.array([i * dt for i in sample_idx])
    algebra = spec.algebra()

    rng = np.random.Generator(np.random.Philox(seed))

    if spec.kind.startswith("oscillator") or spec.kind == "averaged-reference":
        alpha0 = 1.0 + 0.0j if init is None else complex(init)
        lam = -1j * spec.omega - spec.kappa
        sampler = None
        if spec.kind != "averaged-reference":
            sampler = GaussianIncrementSampler(algebra, ["dB"], dt)
        sk = np.sqrt(2.0 * spec.kappa)
        alpha = np.full(n_traj, alpha0, dtype=complex)
        means_re, means_im = [], []
        err_re, err_im = [], []

        def record():
            means_re.append(np.mean(alpha.real))
            means_im.append(np.mean(alpha.imag))
            err_re.append(np.std(alpha.real, ddof=1) / np.sqrt(n_traj))
            err_im.append(np.std(alpha.imag, ddof=1) / np.sqrt(n_traj))

        k = 0
        for step in range(n_steps + 1):
            if step == sample_idx[k]:
                record()
                k += 1
            if step == n_steps:
                break
            alpha = alpha + lam * alpha * dt
            if sampler is not None:
                alpha = alpha + sk * sampler.draw(rng, n_traj)[:, 0]
        means = {"a": np.array(means_re) + 1j * np.array(means_im)}
        stderr = {"a_re": np.array(err_re), "a_im": np.array(err_im)}
        return EnsembleResult(spec, seed, n_traj, times, means, stderr)

    x0, p0 = (1.0, 0.0) if init is None else init
    sampler = GaussianIncrementSampler(algebra, ["dX"], dt)
    noise_factor = 2.0 if spec.kind == "kramers-nonunitary" else 1.0
    damping = spec.kappa if spec.kind == "kramers-nonunitary" else 0.0
    x = np.full(n_traj, float(x0))
    p = np.full(n_traj, float(p0))
    mx, mp, ex, ep = [], [], [], []

    def record_xp():
        mx.append(np.mean(x))
        mp.append(np.mean(p))
        ex.append(np.std(x, ddof=1) / np.sqrt(n_traj))
        ep.append(np.std(p, ddof=1) / np.sqrt(n_traj))

    k = 0
    for step in range(n_steps + 1):
        if step == sample_idx[k]:
            record_xp()
            k += 1
        if step == n_steps:
            break
        xi = sampler.draw(rng, n_traj)[:, 0].real
        dx = p / spec.m * dt
        dp = (-spec.m * spec.omega**2 * x - damping * p) * dt - noise_factor * xi
        x = x + dx
        p = p + dp
    means = {"x": np.array(mx), "p": np.array(mp)}
    stderr = {"x": np.array(ex), "p": np.array(ep)}
    return EnsembleResult(spec, seed, n_traj, times, means, stderr)


def mean_ode_solution(spec: SystemSpec, init, times) -> dict[str, np.ndarray]:
    """Exact solution of the deterministic mean equations at the given times."""
    times = np.asarray(times, dtype=float)
    if spec.kind.startswith("oscillator") or spec.kind == "averaged-reference":
        alpha0 = complex(init)
        lam = -1j * spec.omega - spec.kappa
        return {"a": alpha0 * np.exp(lam * times)}
    x0, p0 = init
    damping = spec.kappa if spec.kind == "kramers-nonunitary" else 0.0
    m = np.array([[0.0, 1.0 / spec.m], [-spec.m * spec.omega**2, -damping]])
    out = np.empty((len(times), 2))
    v0 = np.array([float(x0), float(p0)])
    for i, t in enumerate(times):
        out[i] = expm(m * t) @ v0
    return {"x": out[:, 0], "p": out[:, 1]}
