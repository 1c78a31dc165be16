"""Numerical laboratory for open quantum dynamics on a doubled Fock space.

Subpackages by capability:

- ``spaces``: truncated doubled space, ladder operators, tilde conjugation,
  thermal bra/ket vacua, expectations.
- ``generators``: master-equation generators for the damped oscillator and
  the position-coupled (Kramers-type) model, quasi-particle and doublet
  machinery.
- ``noise``: quantum stochastic calculus — increment symbols, weak-product
  and commutator tables, Ito/Stratonovich conversion, martingale squares,
  classical sampling of commutative noise.
- ``dynamics``: master-equation integration, relaxation closed forms,
  pair-condensation solution, entropy production.
- ``heisenberg``: exact linear Langevin processes (coefficients + noise
  kernels), equal-time commutators, weak moments, vector-SDE ensembles.
- ``propagators``: retarded/advanced two-point functions and their numerical
  cross-check.
- ``scenarios``: wired-up experiments with pass/fail reports.
- ``cli``: command-line entry point (``thermofield``).
"""

from . import dynamics, generators, heisenberg, noise, propagators, scenarios, serialize, spaces

__all__ = [
    "spaces",
    "generators",
    "noise",
    "dynamics",
    "heisenberg",
    "propagators",
    "scenarios",
    "serialize",
]

__version__ = "0.1.0"
