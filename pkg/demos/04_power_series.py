"""Power-series coefficients from boundary data, and the series they define."""
# %%
import numpy as np

from monogenica import algebra
from monogenica.cauchy import RegionSpec, TraceSamples, calibrate_series_factor, make_quadrature, series_coefficients
from monogenica.monogenic import build_poly, eval_series, z_value

ball = RegionSpec.unit_ball(3)

# %% The sign attached to each derivative order is fixed once by expanding
# z_12, whose only nonzero coefficient sits at multi-index (1, 0).
print("per-degree factor:", calibrate_series_factor(3))

# %% Expand a mixture of monogenic polynomials with a non-commuting coefficient.
G3 = algebra(3)


def f(x):
    return z_value(1, 2, x) + build_poly((1, 1))(x) * G3.blade(2, 3) * 0.5


trace = TraceSamples.sample(make_quadrature(ball), f)
coeffs = series_coefficients(trace, 3)
for mi, a in coeffs.items():
    if np.max(np.abs(a.coeffs)) > 1e-8:
        print(mi, np.round(a.coeffs, 10))

# %% Summing the series reproduces f inside the ball; truncating early does not.
pts = np.random.default_rng(3).uniform(-0.28, 0.28, (50, 3))
for K in range(4):
    err = np.max(np.abs(eval_series(coeffs, pts, K).coeffs - f(pts).coeffs))
    print(f"K={K}: max error {err:.2e}")
