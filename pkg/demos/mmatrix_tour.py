"""A tour of the M-matrix machinery.

Builds a few Z-matrices, classifies them, verifies the special
properties of singular irreducible M-matrices, and sums the geometric
inverse series for an invertible one.

Run:  python3 demos/mmatrix_tour.py
"""

import numpy as np

from lyapstein import matclass

np.set_printoptions(precision=4, suppress=True)


def show(title, a):
    print(f"\n=== {title} ===")
    print(a)
    rep = matclass.classify(a)
    print(f"class: {rep.m_class.value}   irreducible: {rep.is_irreducible}   "
          f"rank: {rep.rank}")
    if rep.is_z:
        print(f"shift s = {rep.s:.4g}, rho(B) = {rep.rho_b:.4g}")
    return rep


# The smallest interesting singular irreducible M-matrix: both row sums
# vanish, so the all-ones direction is a strictly positive null vector.
a = np.array([[1.0, -1.0], [-1.0, 1.0]])
rep = show("rank-one Laplacian", a)
print("perron vector:", rep.perron_vector)

sim = matclass.verify_sim(a)
print("singular-irreducible-M checks, each by its own route:")
for name in ("rank_is_n_minus_1", "perron_positive", "group_inverse_exists",
             "nonneg_on_range", "proper_principal_submatrices_invertible_m",
             "almost_monotone", "trivially_range_monotone"):
    print(f"  {name}: {getattr(sim, name)}")

# A Markov-chain generator: I - T for a column-stochastic T. Its null
# vector is the stationary distribution of the chain.
rng = np.random.default_rng(7)
t = rng.uniform(0.1, 1.0, size=(4, 4))
t /= t.sum(axis=0)
gen = np.eye(4) - t
show("Markov generator I - T", gen)
print("stationary distribution:", matclass.perron_null_vector(gen))

# An invertible M-matrix: the shift beats the spectral radius, the
# inverse is nonnegative, and the geometric series reproduces it.
b = 2 * np.eye(2) - np.array([[0.0, 1.0], [1.0, 0.0]])
show("diagonally dominant Z-matrix", b)
audit = matclass.check_m_equivalences(b)
print("equivalence audit:", audit.items, "| inverse positive:", audit.inverse_positive)
series = matclass.neumann_inverse_check(b)
print(f"geometric series: {series.terms_used} terms, "
      f"relative error {series.relative_error:.2e}")
print("inverse estimate:\n", series.inverse_estimate)

# Semi-convergence: the normalized nonnegative part B/s of a singular
# M-matrix has convergent powers exactly when the chain is aperiodic.
print("\npowers of a periodic chain converge?",
      matclass.is_semiconvergent(np.array([[0.0, 1.0], [1.0, 0.0]])))
print("powers of an averaging chain converge?",
      matclass.is_semiconvergent(np.full((3, 3), 1 / 3)))
