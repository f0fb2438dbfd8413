"""Matrix classes and range monotonicity of Lyapunov and Stein operators.

The package decides, with certificates and witnesses:

* Z/M-matrix classification, irreducibility, stability, semi-convergence,
  and the classical equivalence audits (``matclass``)
* group inverses and their existence characterizations (``groupinv``)
* triviality of subspace/cone intersections for the nonnegative orthant
  (exact) and the positive semidefinite cone (``conefeas``)
* construction and algebra of the Lyapunov operator ``X -> AX + XA^T``
  and the Stein operator ``X -> X - AXA^T`` (``operators``, ``symspace``)
* range monotonicity and trivial range monotonicity verdicts
  (``monotonicity``), with a registry of worked examples (``catalog``)

Numerics (eigenvalues, factorizations, linear programs) live in
``numkernel`` on top of numpy/scipy.
"""

from .numkernel import DEFAULT_TOL, Tolerances
from .symspace import smat, svec
from .operators import lyapunov, stein

__all__ = ["DEFAULT_TOL", "Tolerances", "smat", "svec", "lyapunov", "stein"]

__version__ = "0.1.0"
