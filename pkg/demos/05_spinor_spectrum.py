"""Characters as tables of plane spinors, and how each one pins down a point."""
# %%
import numpy as np

from monogenica.cauchy import RegionSpec
from monogenica.monogenic import build_poly
from monogenica.spectrum import (
    character_from_point,
    consistency_residual,
    gelfand_sup,
    interior_grid,
    recover_point,
    sample_region,
    singular_probe,
)

t = character_from_point([1.0, 2.0, 3.0])
print(t.to_json())
print("residual", consistency_residual(t), "point", recover_point(t))

# %% Corrupting a single entry breaks the relations between entries.
bad = t.with_entry("alpha", 1, 2, 2.0 + 1e-6)
print("residual after corruption:", consistency_residual(bad))

# %% Sup of the transform over characters matches the sup over points.
pts = sample_region(RegionSpec.unit_ball(3), 500, np.random.default_rng(0))
p = build_poly((2, 1))
print("sup over characters:", gelfand_sup(p, [character_from_point(x) for x in pts]))

# %% A pole outside the ball gives a field that is fine on the ball, but its
# sup blows up as the pole approaches the sphere.
ball = RegionSpec.unit_ball(3)
grid = interior_grid(ball, 100)
for m in range(1, 7):
    print(f"pole at {1 + 1 / m:.3f}: sup {singular_probe(ball, [1 + 1 / m, 0.0, 0.0], grid):.4f}")
