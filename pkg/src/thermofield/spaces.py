"""Truncated doubled Fock space: ladder operators, tilde conjugation, thermal vacua.

Every mixed-state object lives on the tensor product of two copies of a
truncated single-oscillator Fock space.  The first (non-tilde) factor carries
the physical operators a, a†; the second (tilde) factor carries their partners
ã, ã†.  Tilde conjugation is the antilinear involution that swaps the two
factors and conjugates scalars.  Expectation values are taken between the flat
bra ⟨1| = Σ_n ⟨n, ñ| and a ket normalised so that ⟨1|ket⟩ = 1.

Basis ordering: |n⟩ ⊗ |ñ⟩ row-major, i.e. index = n*(N+1) + ñ with the tilde
occupation varying fastest.  All matrices are dense complex128; dimensions up
to N ≈ 60 stay comfortably small ((N+1)² rows).
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "InvalidCutoffError",
    "TruncationOverflowWarning",
    "TruncationOverflowError",
    "TruncatedFockSpace",
    "ThermalOperator",
    "ThermalKet",
    "ThermalBra",
    "LadderOperators",
    "build_space",
    "tilde_conjugate",
    "commutator",
    "thermal_bra",
    "initial_vacuum",
    "displaced_vacuum",
    "expectation",
    "position_momentum",
    "cutoff_for_occupation",
]


class InvalidCutoffError(ValueError):
    """Cutoff/guard combination violates N >= 2, 0 <= G < N."""


class TruncationOverflowWarning(UserWarning):
    """Requested state puts non-negligible weight near the cutoff."""


class TruncationOverflowError(RuntimeError):
    """A state accumulated too much weight in the top guard levels."""


@dataclass(frozen=True)
class TruncatedFockSpace:
    """Doubled Fock space with occupation cutoff ``cutoff`` and guard band ``guard``.

    Operator identities that hold exactly in the untruncated algebra are only
    exact here on the guarded subspace (occupation <= cutoff - guard - 1 in
    each factor); the guard band absorbs edge effects of the finite ladder.
    """

    cutoff: int
    guard: int = 3

    def __post_init__(self):
        if self.cutoff < 2 or self.guard < 0 or self.guard >= self.cutoff:
            raise InvalidCutoffError(
                f"need cutoff >= 2 and 0 <= guard < cutoff, got "
                f"cutoff={self.cutoff}, guard={self.guard}"
            )

    @property
    def dim_single(self) -> int:
        return self.cutoff + 1

    @property
    def dim(self) -> int:
        return (self.cutoff + 1) ** 2

    def index(self, n: int, n_tilde: int) -> int:
        return n * self.dim_single + n_tilde

    def occupations(self, index: int) -> tuple[int, int]:
        return divmod(index, self.dim_single)

    def swap_permutation(self) -> np.ndarray:
        """Index permutation exchanging the two tensor factors."""
        d = self.dim_single
        idx = np.arange(self.dim)
        n, nt = np.divmod(idx, d)
        return nt * d + n

    def guard_projector(self) -> np.ndarray:
        """Diagonal of the projector onto occupations <= cutoff - guard - 1."""
        d = self.dim_single
        keep = self.cutoff - self.guard - 1
        idx = np.arange(self.dim)
        n, nt = np.divmod(idx, d)
        return ((n <= keep) & (nt <= keep)).astype(float)

    def top_weight(self, vector: np.ndarray) -> float:
        """Relative 2-norm weight of a vector in the top ``guard`` levels."""
        d = self.dim_single
        idx = np.arange(self.dim)
        n, nt = np.divmod(idx, d)
        top = (n > self.cutoff - self.guard) | (nt > self.cutoff - self.guard)
        total = float(np.sum(np.abs(vector) ** 2))
        if total == 0.0:
            return 0.0
        return float(np.sum(np.abs(vector[top]) ** 2)) / total


@dataclass(frozen=True)
class ThermalOperator:
    """Complex matrix on the doubled space, immutable after construction."""

    matrix: np.ndarray
    space: TruncatedFockSpace

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=complex)
        if m.shape != (self.space.dim, self.space.dim):
            raise ValueError(f"matrix shape {m.shape} does not match space dim {self.space.dim}")
        # copy only views; owned arrays are adopted and frozen in place
        if not m.flags.c_contiguous or (m.base is not None and m.flags.writeable):
            m = np.ascontiguousarray(m.copy())
        if m.flags.writeable:
            m.flags.writeable = False
        object.__setattr__(self, "matrix", m)

    def _wrap(self, m: np.ndarray) -> "ThermalOperator":
        return ThermalOperator(m, self.space)

    def _check(self, other: "ThermalOperator"):
        if self.space is not other.space and self.space != other.space:
            raise ValueError("operators live on different spaces")

    def __add__(self, other):
        self._check(other)
        return self._wrap(self.matrix + other.matrix)

    def __sub__(self, other):
        self._check(other)
        return self._wrap(self.matrix - other.matrix)

    def __neg__(self):
        return self._wrap(-self.matrix)

    def __mul__(self, c):
        return self._wrap(self.matrix * complex(c))

    __rmul__ = __mul__

    def csr(self):
        """Sparse view of the matrix, cached after first use."""
        cached = getattr(self, "_csr_cache", None)
        if cached is None:
            from scipy.sparse import csr_matrix

            cached = csr_matrix(self.matrix)
            object.__setattr__(self, "_csr_cache", cached)
        return cached

    def __matmul__(self, other):
        self._check(other)
        # ladder-built operators are banded; sparse products keep the cost
        # linear in the dimension instead of cubic
        if self.space.dim >= 400:
            return self._wrap((self.csr() @ other.csr()).toarray())
        return self._wrap(self.matrix @ other.matrix)

    def dagger(self) -> "ThermalOperator":
        return self._wrap(self.matrix.conj().T)

    def tilde(self) -> "ThermalOperator":
        perm = self.space.swap_permutation()
        return self._wrap(self.matrix.conj()[np.ix_(perm, perm)])

    def guarded(self) -> np.ndarray:
        """Matrix with rows and columns outside the guarded subspace zeroed."""
        g = self.space.guard_projector()
        return self.matrix * g[:, None] * g[None, :]

    def guarded_max_norm(self) -> float:
        return float(np.max(np.abs(self.guarded())))

    def max_norm(self) -> float:
        return float(np.max(np.abs(self.matrix)))


@dataclass(frozen=True)
class ThermalKet:
    vector: np.ndarray
    space: TruncatedFockSpace

    def __post_init__(self):
        v = np.ascontiguousarray(np.asarray(self.vector, dtype=complex))
        if v.shape != (self.space.dim,):
            raise ValueError("ket dimension mismatch")
        v.flags.writeable = False
        object.__setattr__(self, "vector", v)

    def tilde(self) -> "ThermalKet":
        perm = self.space.swap_permutation()
        return ThermalKet(self.vector.conj()[perm], self.space)


@dataclass(frozen=True)
class ThermalBra:
    vector: np.ndarray
    space: TruncatedFockSpace

    def __post_init__(self):
        v = np.ascontiguousarray(np.asarray(self.vector, dtype=complex))
        if v.shape != (self.space.dim,):
            raise ValueError("bra dimension mismatch")
        v.flags.writeable = False
        object.__setattr__(self, "vector", v)

    def tilde(self) -> "ThermalBra":
        perm = self.space.swap_permutation()
        return ThermalBra(self.vector.conj()[perm], self.space)

    def apply(self, op: ThermalOperator) -> np.ndarray:
        """Row vector ⟨bra|A."""
        return self.vector @ op.matrix

    def defect(self, op: ThermalOperator) -> float:
        """max |⟨bra|A| restricted to the guarded subspace."""
        row = self.apply(op) * op.space.guard_projector()
        return float(np.max(np.abs(row)))


@dataclass(frozen=True)
class LadderOperators:
    """The four generating operators of the doubled space."""

    space: TruncatedFockSpace
    a: ThermalOperator
    a_dag: ThermalOperator
    a_tilde: ThermalOperator
    a_tilde_dag: ThermalOperator
    identity: ThermalOperator = field(repr=False, default=None)

    def number(self) -> ThermalOperator:
        return self.a_dag @ self.a

    def tilde_number(self) -> ThermalOperator:
        return self.a_tilde_dag @ self.a_tilde


def build_space(cutoff: int, guard: int = 3) -> LadderOperators:
    """Build the doubled space and its ladder operators.

    [a, a†] = 1 and [ã, ã†] = 1 hold exactly on the guarded subspace;
    [a, ã] = [a, ã†] = 0 hold exactly everywhere (different tensor factors).
    """
    space = TruncatedFockSpace(cutoff, guard)
    d = space.dim_single
    a1 = np.diag(np.sqrt(np.arange(1, d, dtype=float)), k=1).astype(complex)
    eye = np.eye(d, dtype=complex)
    a = np.kron(a1, eye)
    a_tilde = np.kron(eye, a1)
    ident = ThermalOperator(np.eye(space.dim, dtype=complex), space)
    return LadderOperators(
        space=space,
        a=ThermalOperator(a, space),
        a_dag=ThermalOperator(a.conj().T, space),
        a_tilde=ThermalOperator(a_tilde, space),
        a_tilde_dag=ThermalOperator(a_tilde.conj().T, space),
        identity=ident,
    )


def tilde_conjugate(op: ThermalOperator, coefficient: complex = 1.0) -> ThermalOperator:
    """Tilde conjugate of coefficient*op: (c A)~ = c* Ã.

    Realised as factor swap plus entrywise conjugation, which reproduces the
    defining rules (A1 A2)~ = Ã1 Ã2, (Ã)~ = A and (A†)~ = Ã†.
    """
    return np.conj(complex(coefficient)) * op.tilde()


def commutator(a: ThermalOperator, b: ThermalOperator) -> ThermalOperator:
    return a @ b - b @ a


def thermal_bra(space: TruncatedFockSpace) -> ThermalBra:
    """⟨1| = Σ_n ⟨n, ñ|: satisfies ⟨1|ã = ⟨1|a† and ⟨1|~ = ⟨1|."""
    v = np.zeros(space.dim, dtype=complex)
    for n in range(space.dim_single):
        v[space.index(n, n)] = 1.0
    return ThermalBra(v, space)


def cutoff_for_occupation(n_occ: float, tol: float = 1e-10, minimum: int = 30) -> int:
    """Smallest cutoff N with (n/(1+n))^N <= tol, at least ``minimum``."""
    if n_occ <= 0.0:
        return minimum
    f = n_occ / (1.0 + n_occ)
    n = int(np.ceil(np.log(tol) / np.log(f)))
    return max(minimum, n)


def initial_vacuum(ops, n0: float) -> ThermalKet:
    """Thermal ket with occupation n0: ∝ exp(f a†ã†)|vac⟩, f = n0/(1+n0).

    Normalised so ⟨1|ket⟩ = 1 exactly on the truncated space.  Warns when the
    cutoff is too small for the requested occupation (f^N > 1e-10).
    Accepts a LadderOperators bundle or a bare TruncatedFockSpace.
    """
    if n0 < 0:
        raise ValueError(f"occupation must be >= 0, got n0={n0}")
    space = ops if isinstance(ops, TruncatedFockSpace) else ops.space
    f = n0 / (1.0 + n0)
    if f > 0 and f ** space.cutoff > 1e-10:
        warnings.warn(
            f"cutoff N={space.cutoff} too small for n0={n0}: "
            f"f^N = {f ** space.cutoff:.3e} > 1e-10",
            TruncationOverflowWarning,
            stacklevel=2,
        )
    v = np.zeros(space.dim, dtype=complex)
    powers = f ** np.arange(space.dim_single)
    for n in range(space.dim_single):
        v[space.index(n, n)] = powers[n]
    v /= np.sum(powers)
    return ThermalKet(v, space)


def displaced_vacuum(
    ops: LadderOperators,
    n0: float,
    x0: float,
    p0: float,
    m: float = 1.0,
    omega: float = 1.0,
) -> ThermalKet:
    """Thermal ket displaced to mean position x0 and mean momentum p0.

    Applies exp(α a† - α* a + α* ã† - α ã) with α = sqrt(mω/2) x0 + i p0/sqrt(2mω).
    The exponent is tildian and annihilates ⟨1| from the right, so tilde
    invariance and ⟨1|ket⟩ = 1 are both preserved.
    """
    from scipy.sparse.linalg import expm_multiply
    from scipy.sparse import csr_matrix

    ket = initial_vacuum(ops, n0)
    alpha = np.sqrt(m * omega / 2.0) * x0 + 1j * p0 / np.sqrt(2.0 * m * omega)
    gen = (
        alpha * ops.a_dag.matrix
        - np.conj(alpha) * ops.a.matrix
        + np.conj(alpha) * ops.a_tilde_dag.matrix
        - alpha * ops.a_tilde.matrix
    )
    v = expm_multiply(csr_matrix(gen), ket.vector)
    return ThermalKet(v, ops.space)


def expectation(bra: ThermalBra, op: ThermalOperator, ket: ThermalKet) -> complex:
    """⟨bra|A|ket⟩."""
    return complex(bra.vector @ op.matrix @ ket.vector)


def position_momentum(ops: LadderOperators, m: float = 1.0, omega: float = 1.0):
    """x = (a + a†)/sqrt(2mω), p = i sqrt(mω/2)(a† - a), plus tilde partners.

    Any convention with [x, p] = i serves; this one gives H = ω(a†a + 1/2).
    The tilde partners are built directly (conjugated coefficients on the
    tilde ladder), which coincides with tilde_conjugate on these operators.
    """
    s = 1.0 / np.sqrt(2.0 * m * omega)
    c = 1j * np.sqrt(m * omega / 2.0)
    x = s * (ops.a + ops.a_dag)
    p = c * (ops.a_dag - ops.a)
    xt = s * (ops.a_tilde + ops.a_tilde_dag)
    pt = (-c) * (ops.a_tilde_dag - ops.a_tilde)
    return x, p, xt, pt
