"""A short walk through the geometric algebra core.

Run with ``python demos/01_algebra_tour.py``.
"""
# %%
import numpy as np

from monogenica import Signature, algebra, dual, mv_norm, project_blade, reverse

G3 = algebra(3)
e1, e2, e3 = G3.e(1), G3.e(2), G3.e(3)
B12, B13, B23 = G3.blade(1, 2), G3.blade(1, 3), G3.blade(2, 3)

# %% Coordinate bivectors behave like imaginary units, and the three of
# them multiply like the quaternion units.
print("B12^2       =", B12 * B12)
print("B23 B13 B12 =", B23 * B13 * B12)
print("e1 e2 e3    =", e1 * e2 * e3, " norm", mv_norm(e1 * e2 * e3))

# %% In four dimensions blades sharing two vectors collapse.
G4 = algebra(4)
print("E123 E124   =", G4.blade(1, 2, 3) * G4.blade(1, 2, 4))

# %% Projection onto the e1e2 plane keeps exactly the blades inside it.
A = G3.mv(np.arange(1.0, 9.0))
print("A           =", A)
print("P_B12(A)    =", project_blade(A, B12))

# %% Duality trades a vector for the plane orthogonal to it.
print("dual(e1)    =", dual(e1))

# %% Spacetime: e0 squares to +1 and the spatial vectors to -1.  Projecting
# onto e1e2e3 keeps the spatial subalgebra.
sta = algebra(Signature(1, 3, start=0))
M = sta.random(np.random.default_rng(0))
print("spatial part of a random spacetime element:")
print("  ", project_blade(M, sta.blade(1, 2, 3)))

# %% The norm is not a C*-norm on the whole algebra.  For a = 1 + e1:
a = 1 + e1
print("|a|^2 =", mv_norm(a) ** 2, " |a^dag a| =", mv_norm(reverse(a) * a))
# It is on rotors, the even elements of G_3:
R = (G3.scalar(np.cos(0.4)) + B12 * np.sin(0.4)) * 1.7
print("rotor: |R|^2 =", mv_norm(R) ** 2, " |R^dag R| =", mv_norm(reverse(R) * R))
