"""Quantum stochastic calculus: increment symbols, weak-product tables,
Ito/Stratonovich conversion, martingale squaring, classical sampling.

Increments are linear combinations of the four base noises
(dB, dB†, dB̃, dB̃†).  Their weak second moments (coefficients of dt inside
noise-vacuum expectations) are not transcribed by hand: they are generated
from the thermal Bogoliubov construction, in which the rotated modes
dC = (1+n̄)dB - n̄dB̃† (and tilde partner) annihilate a plain Fock vacuum
pair.  Expressing the base noises through the C modes and taking Fock-vacuum
expectations on a tiny doubled space yields every entry, signs and ordering
included.

Products of two increments give a coefficient of dt; products of three or
more increments vanish (each increment carries formal degree dt^(1/2) and
anything past degree dt is dropped).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .spaces import ThermalOperator

__all__ = [
    "BASE_SYMBOLS",
    "IncrementSymbol",
    "NoiseAlgebra",
    "Martingale",
    "StochasticGenerator",
    "martingale_square",
    "fdt_residual",
    "martingale_bra_defect",
    "strat_to_ito",
    "ito_to_strat",
    "weak_product_chain",
    "GaussianIncrementSampler",
    "sample_increments",
    "NonCommutativeNoiseError",
    "NonRealizableMomentsError",
]

BASE_SYMBOLS = ("dB", "dB_dag", "dB_tilde", "dB_tilde_dag")

# index maps for tilde / adjoint on the base quadruple
_TILDE_PERM = (2, 3, 0, 1)
_ADJOINT_PERM = (1, 0, 3, 2)


class NonCommutativeNoiseError(ValueError):
    """Classical sampling requested for a non-commutative symbol set."""


class NonRealizableMomentsError(ValueError):
    """The symmetrised joint moments are not a classical Gaussian covariance."""

    def __init__(self, message, covariance):
        super().__init__(message)
        self.covariance = covariance


@dataclass(frozen=True)
class IncrementSymbol:
    """A noise increment as a linear combination of the base quadruple."""

    name: str
    coeffs: np.ndarray

    def __post_init__(self):
        c = np.ascontiguousarray(np.asarray(self.coeffs, dtype=complex))
        if c.shape != (4,):
            raise ValueError("coefficients must have length 4")
        c.flags.writeable = False
        object.__setattr__(self, "coeffs", c)

    def tilde(self) -> "IncrementSymbol":
        return IncrementSymbol(_decorate(self.name, "~"), self.coeffs.conj()[list(_TILDE_PERM)])

    def adjoint(self) -> "IncrementSymbol":
        return IncrementSymbol(_decorate(self.name, "†"), self.coeffs.conj()[list(_ADJOINT_PERM)])

    def is_hermitian(self) -> bool:
        return bool(np.allclose(self.adjoint().coeffs, self.coeffs, atol=1e-14))

    def __add__(self, other: "IncrementSymbol") -> "IncrementSymbol":
        return IncrementSymbol(f"({self.name}+{other.name})", self.coeffs + other.coeffs)

    def __mul__(self, c) -> "IncrementSymbol":
        return IncrementSymbol(f"({c}*{self.name})", complex(c) * self.coeffs)

    __rmul__ = __mul__


def _decorate(name: str, op: str) -> str:
    return f"{name}{op}"


def _single_mode_ladder(cutoff: int) -> np.ndarray:
    return np.diag(np.sqrt(np.arange(1, cutoff + 1, dtype=float)), k=1).astype(complex)


def _c_mode_base_matrices(nbar: float, cutoff: int = 2):
    """Base-noise matrices on the doubled Fock space of the rotated C mode.

    dB = dC + n̄ dC̃†, dB̃† = dC + (1+n̄) dC̃†, and adjoint/tilde partners; the
    vacuum pair is the plain Fock vacuum of the C mode, so any quadratic weak
    moment is exact already at occupation cutoff 2.
    """
    c1 = _single_mode_ladder(cutoff)
    eye = np.eye(cutoff + 1, dtype=complex)
    c = np.kron(c1, eye)
    ct = np.kron(eye, c1)
    c_dag, ct_dag = c.conj().T, ct.conj().T
    base = {
        "dB": c + nbar * ct_dag,
        "dB_tilde_dag": c + (1.0 + nbar) * ct_dag,
        "dB_dag": ct + (1.0 + nbar) * c_dag,
        "dB_tilde": ct + nbar * c_dag,
    }
    vac = np.zeros((cutoff + 1) ** 2, dtype=complex)
    vac[0] = 1.0
    return base, vac


def _generate_base_tables(nbar: float) -> tuple[np.ndarray, np.ndarray]:
    base, vac = _c_mode_base_matrices(nbar)
    mats = [base[s] for s in BASE_SYMBOLS]
    second = np.empty((4, 4), dtype=complex)
    comm = np.empty((4, 4), dtype=complex)
    for i, mi in enumerate(mats):
        for j, mj in enumerate(mats):
            second[i, j] = vac @ (mi @ (mj @ vac))
            comm[i, j] = vac @ ((mi @ mj - mj @ mi) @ vac)
    return second, comm


class NoiseAlgebra:
    """Weak-product and commutator tables for a fixed parameter set.

    Named symbols:
      dW   = sqrt(2κ)(μ dB + ν dB̃†)          (μ + ν = 1)
      dW°  = sqrt(2κ)(dB† - dB̃)              ("dW_plus"; annihilates the bra)
      dX   = sqrt(κmω)/2 (dB + dB†)
    plus tilde partners and the bare quadruple.
    """

    def __init__(self, nbar: float, kappa: float = 0.0, nu: float = 0.5, m_omega: float = 1.0):
        if nbar < 0 or kappa < 0:
            raise ValueError("nbar and kappa must be >= 0")
        if not 0.0 <= nu <= 1.0:
            raise ValueError(f"nu must lie in [0, 1], got {nu}")
        self.nbar = nbar
        self.kappa = kappa
        self.nu = nu
        self.mu = 1.0 - nu
        self.m_omega = m_omega
        self._second, self._comm = _generate_base_tables(nbar)
        sk = np.sqrt(2.0 * kappa)
        sx = np.sqrt(kappa * m_omega) / 2.0
        dB = IncrementSymbol("dB", [1, 0, 0, 0])
        dB_dag = IncrementSymbol("dB_dag", [0, 1, 0, 0])
        dB_t = IncrementSymbol("dB_tilde", [0, 0, 1, 0])
        dB_td = IncrementSymbol("dB_tilde_dag", [0, 0, 0, 1])
        dW = IncrementSymbol("dW", [sk * self.mu, 0, 0, sk * nu])
        dWp = IncrementSymbol("dW_plus", [0, sk, -sk, 0])
        dX = IncrementSymbol("dX", [sx, sx, 0, 0])
        self.symbols: dict[str, IncrementSymbol] = {
            "dB": dB,
            "dB_dag": dB_dag,
            "dB_tilde": dB_t,
            "dB_tilde_dag": dB_td,
            "dW": dW,
            "dW_tilde": IncrementSymbol("dW_tilde", dW.tilde().coeffs),
            "dW_plus": dWp,
            "dW_tilde_plus": IncrementSymbol("dW_tilde_plus", dWp.tilde().coeffs),
            "dX": dX,
            "dX_tilde": IncrementSymbol("dX_tilde", dX.tilde().coeffs),
        }

    def symbol(self, name) -> IncrementSymbol:
        if isinstance(name, IncrementSymbol):
            return name
        try:
            return self.symbols[name]
        except KeyError:
            raise KeyError(f"unknown increment symbol {name!r}") from None

    def ito_product(self, x, y) -> complex:
        """Coefficient of dt in the weak product x·y (bilinear in both slots)."""
        cx, cy = self.symbol(x).coeffs, self.symbol(y).coeffs
        return complex(cx @ self._second @ cy)

    def increment_commutator(self, x, y) -> complex:
        """Coefficient of dt in [x, y]."""
        cx, cy = self.symbol(x).coeffs, self.symbol(y).coeffs
        return complex(cx @ self._comm @ cy)


@dataclass(frozen=True)
class Martingale:
    """Noise part of a stochastic generator: Σ (system operator) × increment."""

    terms: tuple

    def __init__(self, terms):
        object.__setattr__(self, "terms", tuple(terms))


def martingale_square(m: Martingale, algebra: NoiseAlgebra) -> ThermalOperator:
    """Coefficient of dt in dM·dM, collected as a system operator."""
    out = None
    for op_a, sym_a in m.terms:
        for op_b, sym_b in m.terms:
            w = algebra.ito_product(sym_a, sym_b)
            if w == 0:
                continue
            term = w * (op_a @ op_b)
            out = term if out is None else out + term
    if out is None:
        first_op = m.terms[0][0]
        out = 0.0 * first_op
    return out


def fdt_residual(m: Martingale, algebra: NoiseAlgebra, pi_part: ThermalOperator) -> float:
    """max |dM dM / dt + 2 Π_part| on the guarded subspace."""
    square = martingale_square(m, algebra)
    return (square + 2.0 * pi_part).guarded_max_norm()


def martingale_bra_defect(m: Martingale, bra, algebra: NoiseAlgebra | None = None) -> float:
    """Largest guarded residual of ⟨1| applied to any martingale term.

    Zero exactly when the martingale annihilates the system bra (the
    non-unitary construction); positive for the unitary martingales, whose
    increments survive ⟨1| and leak probability out of the relevant system.
    With an algebra, each term is weighted by the 2-norm of its increment's
    base coefficients, so switched-off noise (κ = 0) contributes nothing.
    """
    worst = 0.0
    for op, sym in m.terms:
        weight = 1.0
        if algebra is not None:
            weight = float(np.linalg.norm(algebra.symbol(sym).coeffs))
        if weight > 0.0:
            worst = max(worst, weight * bra.defect(op))
    return worst


@dataclass(frozen=True)
class StochasticGenerator:
    """Drift + martingale pair with its multiplication convention."""

    drift: ThermalOperator
    martingale: Martingale
    convention: str  # "ito" or "strat"

    def __post_init__(self):
        if self.convention not in ("ito", "strat"):
            raise ValueError(f"convention must be 'ito' or 'strat', got {self.convention!r}")


def strat_to_ito(gen: StochasticGenerator, algebra: NoiseAlgebra) -> StochasticGenerator:
    """Midpoint → non-anticipating form: drift gains -(i/2) dM dM / dt."""
    if gen.convention != "strat":
        raise ValueError("generator is not in Stratonovich form")
    square = martingale_square(gen.martingale, algebra)
    return StochasticGenerator(gen.drift - 0.5j * square, gen.martingale, "ito")


def ito_to_strat(gen: StochasticGenerator, algebra: NoiseAlgebra) -> StochasticGenerator:
    """Non-anticipating → midpoint form: drift loses -(i/2) dM dM / dt."""
    if gen.convention != "ito":
        raise ValueError("generator is not in Ito form")
    square = martingale_square(gen.martingale, algebra)
    return StochasticGenerator(gen.drift + 0.5j * square, gen.martingale, "strat")


def weak_product_chain(algebra: NoiseAlgebra, symbols) -> complex:
    """Weak value of an ordered product of increments.

    Degree bookkeeping: one increment has zero mean, two give the table
    entry, three or more exceed degree dt and vanish identically.
    """
    symbols = list(symbols)
    if len(symbols) == 0:
        return 1.0
    if len(symbols) == 1:
        return 0.0
    if len(symbols) == 2:
        return algebra.ito_product(symbols[0], symbols[1])
    return 0.0


def _real_covariance(algebra: NoiseAlgebra, symbols) -> np.ndarray:
    """Real covariance of (Re z_1, Im z_1, ...) per unit dt.

    Built from E[z_i z_j] = table(s_i, s_j) and the symmetrised conjugate
    moments E[z_i z̄_j] = (table(s_i, s_j†) + table(s_j†, s_i))/2; the
    symmetrisation is the standard classical shadow of operator moments.
    """
    n = len(symbols)
    szz = np.empty((n, n), dtype=complex)
    szc = np.empty((n, n), dtype=complex)
    for i, si in enumerate(symbols):
        for j, sj in enumerate(symbols):
            szz[i, j] = algebra.ito_product(si, sj)
            adj = algebra.symbol(sj).adjoint()
            szc[i, j] = 0.5 * (algebra.ito_product(si, adj) + algebra.ito_product(adj, si))
    cov = np.empty((2 * n, 2 * n))
    for i in range(n):
        for j in range(n):
            exx = 0.5 * (szz[i, j] + szc[i, j]).real
            eyy = 0.5 * (szc[i, j] - szz[i, j]).real
            exy = 0.5 * (szz[i, j].imag - szc[i, j].imag)
            eyx = 0.5 * (szz[i, j].imag + szc[i, j].imag)
            cov[2 * i, 2 * j] = exx
            cov[2 * i + 1, 2 * j + 1] = eyy
            cov[2 * i, 2 * j + 1] = exy
            cov[2 * i + 1, 2 * j] = eyx
    return cov


class GaussianIncrementSampler:
    """Prepared classical sampler for a pairwise-commutative increment set."""

    def __init__(self, algebra: NoiseAlgebra, symbols, dt: float):
        symbols = [algebra.symbol(s) for s in symbols]
        for i, si in enumerate(symbols):
            for sj in symbols[i:]:
                c = algebra.increment_commutator(si, sj)
                if abs(c) > 1e-12:
                    raise NonCommutativeNoiseError(
                        f"[{si.name}, {sj.name}] = {c} dt != 0; classical sampling undefined"
                    )
        cov = _real_covariance(algebra, symbols)
        scale = max(np.max(np.abs(cov)), 1.0)
        eigval, eigvec = np.linalg.eigh(cov)
        if np.min(eigval) < -1e-10 * scale:
            raise NonRealizableMomentsError(
                f"symmetrised moment matrix has negative eigenvalue {np.min(eigval):.3e}",
                cov,
            )
        self.symbols = symbols
        self.covariance = cov
        self._root = eigvec @ np.diag(np.sqrt(np.clip(eigval, 0.0, None))) * np.sqrt(dt)

    def draw(self, rng: np.random.Generator, count: int) -> np.ndarray:
        """(count, n_symbols) complex increments for one time step each."""
        normals = rng.standard_normal((count, self._root.shape[0]))
        reals = normals @ self._root.T
        return reals[:, 0::2] + 1j * reals[:, 1::2]


def sample_increments(
    algebra: NoiseAlgebra,
    symbols,
    dt: float,
    steps: int,
    seed: int,
    rng: np.random.Generator | None = None,
) -> np.ndarray:
    """Classical Gaussian draws for a pairwise-commutative increment set.

    Returns an array of shape (steps, len(symbols)) of complex increments
    whose sample moments converge to the weak table at rate 1/sqrt(steps).
    Deterministic for a fixed seed (counter-based Philox stream).
    """
    sampler = GaussianIncrementSampler(algebra, symbols, dt)
    if rng is None:
        rng = np.random.Generator(np.random.Philox(seed))
    return sampler.draw(rng, steps)
