"""Range monotonicity verdicts across the four structured matrix classes.

Every verdict comes with evidence: a fast-path rule or cone certificate
for Yes, a re-verified witness matrix for No.

Run:  python3 demos/monotonicity_tour.py
"""

import numpy as np

from lyapstein import catalog, monotonicity, operators

np.set_printoptions(precision=4, suppress=True)


def report(title, op):
    v = monotonicity.analyze_operator(op)
    print(f"\n=== {title} ===")
    print(f"trivially range monotone: {v.trivially_range_monotone.value}"
          + (f"   [{v.fast_path}]" if v.fast_path else ""))
    print(f"range monotone:           {v.range_monotone.value}")
    if v.witness is not None:
        print("witness:\n", v.witness)
    if v.certificate is not None:
        print("certificate:\n", v.certificate)


J = np.array([[0.0, 1.0], [-1.0, 0.0]])
SWAP = np.array([[0.0, 1.0], [1.0, 0.0]])

# square root of -I: both operators trivially range monotone
report("Lyapunov, base J with J^2 = -I", operators.lyapunov(J))
report("Stein, base J with J^2 = -I", operators.stein(J))

# involution: the Stein operator keeps the property, the Lyapunov
# operator loses even plain range monotonicity (the witness is the base
# matrix itself, which maps to 2I)
report("Stein, involutory base", operators.stein(SWAP))
report("Lyapunov, involutory base", operators.lyapunov(SWAP))

# a positive diagonal base: the Stein operator maps diag(0,-1) to a PSD
# image, refuting range monotonicity
report("Stein, base diag(1, 2)", operators.stein(np.diag([1.0, 2.0])))

# order-3 skew base: the Lyapunov operator stays trivially range
# monotone (trace argument), the Stein operator does not
A3 = np.array([[0.0, 1.0, 0.0], [-1.0, 0.0, 1.0], [0.0, -1.0, 0.0]]) / np.sqrt(2)
report("Lyapunov, order-3 skew base", operators.lyapunov(A3))
report("Stein, order-3 skew base", operators.stein(A3))

# matrices are included: a singular irreducible M-matrix is trivially
# range monotone, the identity is not
print("\n=== matrix verdicts ===")
for a in (np.array([[1.0, -1.0], [-1.0, 1.0]]), np.eye(2)):
    v = monotonicity.decide_trivial_matrix(a)
    print(f"{a.tolist()} -> trivially range monotone: "
          f"{v.trivially_range_monotone.value}"
          + (f" (witness {v.witness})" if v.witness is not None else ""))

# the consolidated picture, re-verified cell by cell
print("\n=== summary table (recomputed) ===")
table = catalog.reproduce_table()
for row in table.rows:
    l_cell, s_cell = row["lyapunov"], row["stein"]
    print(f"{row['matrix_class']:<26s} Lyapunov: {l_cell.answer:<6s} "
          f"Stein: {s_cell.answer}")
