"""Plane-spinor variables and the homogeneous monogenic polynomials they generate."""
# %%
import numpy as np

from monogenica import algebra
from monogenica.dirac import Field, monogenicity_report
from monogenica.monogenic import build_poly, multi_indices, z_value

x = np.array([1.0, 2.0, 3.0])
print("z_12(1,2,3) =", z_value(1, 2, x))
print("z_21(1,2,3) =", z_value(2, 1, x))

# %% z_12 is a plane spinor: it lives in span{1, B12} and multiplies like a
# complex number.
G3 = algebra(3)
print("z_12 B_21   =", z_value(1, 2, x) * G3.blade(2, 1), " (equals -z_21)")

# %% The polynomials of degree two in three dimensions.
for mi in multi_indices(3, 2):
    p = build_poly(mi)
    print(mi, "words", p.words, "prefactor", p.prefactor)

print("p_(2,0)(1,2,0) =", build_poly((2, 0))([1.0, 2.0, 0.0]))

# %% Every one of them is annihilated by the Dirac operator, up to the
# truncation error of central differences.
rng = np.random.default_rng(1)
pts = rng.uniform(-1, 1, (20, 3))
for k in range(5):
    worst = max(monogenicity_report(Field(3, build_poly(mi)), pts) for mi in multi_indices(3, k))
    print(f"degree {k}: {len(multi_indices(3, k))} polynomials, worst |D p| = {worst:.2e}")

# %% A field that is not monogenic for comparison.
print("|D x1| =", monogenicity_report(Field.scalar(3, lambda p: p[..., 0]), pts))
