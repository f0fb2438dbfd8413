"""Lyapunov and Stein operators, materialized and dissected.

Shows the svec coordinate matrices, the polynomial identities the
structured classes satisfy, group inverses, and the cross-nonpositivity
(Z-operator) behaviour on the semidefinite cone.

Run:  python3 demos/operator_gallery.py
"""

import numpy as np

from lyapstein import groupinv, operators
from lyapstein.operators import adjoint, apply, detect_k_potency, lyapunov, op_power, stein

np.set_printoptions(precision=4, suppress=True)

J = np.array([[0.0, 1.0], [-1.0, 0.0]])       # rotation generator, J^2 = -I
SWAP = np.array([[0.0, 1.0], [1.0, 0.0]])     # involution, SWAP^2 = I

print("Lyapunov operator of the rotation generator (svec coordinates):")
L = lyapunov(J)
print(L.mat)
print("its action on the identity gives J + J^T = 0, so L is singular:")
print(apply(L, np.eye(2)))

print("\npolynomial identities of the structured classes:")
for name, op, k, alpha in [
    ("L(rotation)", lyapunov(J), 3, -4.0),
    ("S(rotation)", stein(J), 2, 2.0),
    ("L(involution)", lyapunov(SWAP), 3, 4.0),
    ("S(involution)", stein(SWAP), 2, 2.0),
]:
    rep = detect_k_potency(op)
    print(f"  {name}: T^{rep.k} = {rep.alpha:+g} T   "
          f"(residual {np.linalg.norm(op_power(op, rep.k).mat - rep.alpha * op.mat):.1e})")

print("\ngroup inverses exist for all of them; for T^2 = 2T the axioms")
print("force T# = T/4:")
S = stein(J)
gi = groupinv.group_inverse(S.mat)
print("  ||S# - S/4|| =", np.linalg.norm(gi.inverse - S.mat / 4))

print("\na nilpotent base transfers nilpotency to the operator, and the")
print("group inverse disappears:")
N = np.array([[0.0, 1.0], [0.0, 0.0]])
LN = lyapunov(N)
print("  ||L^3|| =", np.linalg.norm(op_power(LN, 3).mat))
print("  group inverse exists:", groupinv.group_inverse(LN.mat).exists)

print("\nadjoints are literal transposes in svec coordinates; for a skew")
print("base the Lyapunov operator is skew-adjoint:")
K = np.array([[0.0, 2.0, 0.0], [-2.0, 0.0, 1.0], [0.0, -1.0, 0.0]])
LK = lyapunov(K)
print("  ||L* + L|| =", np.linalg.norm(adjoint(LK).mat + LK.mat))

print("\nboth operators act like Z-matrices on the semidefinite cone:")
rng = np.random.default_rng(3)
A = rng.standard_normal((3, 3))
for name, op in (("Lyapunov", lyapunov(A)), ("Stein", stein(A))):
    ok, _ = operators.z_operator_spot_check(op, trials=200, seed=1)
    print(f"  {name}: <T(X), Y> <= 0 on 200 orthogonal PSD pairs: {ok}")

print("\nsolving T(X) = Q under a stability hypothesis returns a definite X:")
Astab = np.array([[1.0, 0.3], [-0.2, 1.5]])   # positive stable
Q = np.array([[2.0, 0.5], [0.5, 1.0]])
X = operators.solve(lyapunov(Astab), Q)
print("X =\n", X)
print("min eigenvalue of X:", np.linalg.eigvalsh(X)[0])
