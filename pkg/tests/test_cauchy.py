import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from hypothesis.extra.numpy import arrays

from monogenica.algebra import algebra
from monogenica.cauchy import (
    CAUCHY_SIGN,
    SERIES_DEGREE_FACTOR,
    DomainError,
    MarginError,
    RegionSpec,
    SingularityError,
    TraceSamples,
    calibrate_series_factor,
    calibrate_sign,
    cauchy_reconstruct,
    cauchy_sum,
    greens,
    make_quadrature,
    series_coefficients,
    sphere_area,
)
from monogenica.monogenic import build_poly, eval_series, multi_indices, z_value

G3 = algebra(3)
BALL = RegionSpec.unit_ball(3)


def one(x):
    return G3.scalar(np.ones(np.asarray(x).shape[:-1]))


def z12(x):
    return z_value(1, 2, x)


@pytest.fixture(scope="module")
def z12_trace():
    return TraceSamples.sample(make_quadrature(BALL), z12)


def test_sphere_areas():
    assert sphere_area(2) == pytest.approx(2 * math.pi)
    assert sphere_area(3) == pytest.approx(4 * math.pi)
    assert sphere_area(4) == pytest.approx(2 * math.pi**2)


def test_greens_fixed_values():
    # x / (area * |x|^n)
    np.testing.assert_allclose(greens(np.array([1.0, 2.0, 2.0])).coeffs[[1, 2, 4]], np.array([1, 2, 2]) / (4 * math.pi * 27))
    np.testing.assert_allclose(greens(np.array([3.0, 4.0])).coeffs[[1, 2]], np.array([3, 4]) / (2 * math.pi * 25))


def test_greens_singularity():
    with pytest.raises(SingularityError):
        greens(np.zeros(3))


@settings(max_examples=60, deadline=None)
@given(arrays(np.float64, 3, elements=st.floats(0.1, 3)), st.floats(0.1, 10))
def test_greens_homogeneity(x, lam):
    np.testing.assert_allclose(greens(lam * x).coeffs, lam ** -2 * greens(x).coeffs, rtol=1e-13)


def test_quadrature_areas_and_counts():
    q = make_quadrature(BALL)
    assert len(q) == 8192
    assert q.area == pytest.approx(4 * math.pi, rel=1e-14)
    assert make_quadrature(RegionSpec.unit_ball(2), 100).area == pytest.approx(2 * math.pi)
    box = make_quadrature(RegionSpec.box((0.0, 0.0, 0.0), (1.0, 2.0, 0.5)), (6,))
    assert len(box) == 6 * 36
    assert box.area == pytest.approx(2 * (2 * 4 + 2 * 1 + 4 * 1))


def test_ball_quadrature_unsupported_dimension():
    with pytest.raises(ValueError):
        make_quadrature(RegionSpec.unit_ball(4))


def test_calibrated_orientation():
    assert CAUCHY_SIGN == {2: 1.0, 3: 1.0}
    assert calibrate_sign(2) == 1.0 and calibrate_sign(3) == 1.0


def test_constant_reconstructs_at_centre():
    trace = TraceSamples.sample(make_quadrature(BALL, (16, 32)), one)
    np.testing.assert_allclose(cauchy_reconstruct(trace, np.zeros(3)).coeffs, G3.scalar(1).coeffs, atol=1e-6)


def test_z12_fixed_point(z12_trace):
    x = np.array([0.2, 0.1, -0.3])
    np.testing.assert_allclose(cauchy_reconstruct(z12_trace, x).coeffs, z12(x).coeffs, atol=1e-12)


@pytest.mark.parametrize("mi", [(1, 1), (2, 0), (0, 3), (2, 2)])
def test_polynomial_traces(mi):
    p = build_poly(mi)
    trace = TraceSamples.sample(make_quadrature(BALL), p)
    pts = np.random.default_rng(4).uniform(-0.45, 0.45, (10, 3))
    np.testing.assert_allclose(cauchy_reconstruct(trace, pts).coeffs, p(pts).coeffs, atol=1e-10)


def test_circle_reconstruction():
    trace = TraceSamples.sample(make_quadrature(RegionSpec.unit_ball(2), 256), lambda x: z_value(1, 2, x))
    got = cauchy_reconstruct(trace, [0.3, -0.2])
    np.testing.assert_allclose(got.coeffs, [-0.2, 0.0, 0.0, -0.3], atol=1e-12)


def test_box_reconstruction():
    box = RegionSpec.box((0.0, 0.0, 0.0), 1.0)
    trace = TraceSamples.sample(make_quadrature(box, (24,)), z12)
    x = np.array([0.1, 0.2, -0.1])
    np.testing.assert_allclose(cauchy_reconstruct(trace, x).coeffs, z12(x).coeffs, atol=1e-3)


def test_shifted_ball():
    spec = RegionSpec.ball((1.0, -2.0, 0.5), 0.5)
    trace = TraceSamples.sample(make_quadrature(spec, (24, 48)), z12)
    x = np.array([1.1, -1.9, 0.4])
    np.testing.assert_allclose(cauchy_reconstruct(trace, x).coeffs, z12(x).coeffs, atol=1e-9)


def test_error_shrinks_with_resolution():
    pts = np.random.default_rng(0).uniform(-0.28, 0.28, (10, 3))
    errs = []
    for grid in [(8, 16), (16, 32), (32, 64)]:
        trace = TraceSamples.sample(make_quadrature(BALL, grid), z12)
        errs.append(np.max(np.abs(cauchy_reconstruct(trace, pts).coeffs - z12(pts).coeffs)))
    assert errs[0] > 2 * errs[1] > 4 * errs[2]


def test_exterior_points_see_nothing():
    # outside the region the Cauchy sum of a monogenic trace vanishes
    for grid, tol in [((8, 16), 1e-2), ((16, 32), 1e-6)]:
        trace = TraceSamples.sample(make_quadrature(BALL, grid), z12)
        assert np.max(np.abs(cauchy_sum(trace, [2.0, 0.0, 0.0]).coeffs)) < tol


def test_domain_and_margin_guards(z12_trace):
    with pytest.raises(DomainError):
        cauchy_reconstruct(z12_trace, [1.5, 0.0, 0.0])
    with pytest.raises(MarginError):
        cauchy_reconstruct(z12_trace, [0.95, 0.0, 0.0])
    cauchy_reconstruct(z12_trace, [0.95, 0.0, 0.0], margin=0.01)


def test_trace_csv_round_trip(tmp_path):
    trace = TraceSamples.sample(make_quadrature(BALL, (4, 8)), z12)
    text = trace.to_csv()
    assert text.splitlines()[0].startswith("node,x1,x2,x3,nu1,nu2,nu3,weight,1,e1")
    back = TraceSamples.from_csv(text, BALL)
    np.testing.assert_array_equal(back.quadrature.nodes, trace.quadrature.nodes)
    np.testing.assert_array_equal(back.values.coeffs, trace.values.coeffs)


def test_region_json_round_trip():
    for spec in [BALL, RegionSpec.box((0.0, 1.0), (2.0, 0.5), resolution=[8])]:
        assert RegionSpec.from_json(spec.to_json()).to_json() == spec.to_json()
    assert RegionSpec.from_json('{"kind": "ball", "n": 2}') == RegionSpec.unit_ball(2)
    with pytest.raises(ValueError):
        RegionSpec.from_json('{"kind": "torus", "n": 3}')


def test_signed_distance():
    box = RegionSpec.box((0.0, 0.0), 1.0)
    assert box.signed_distance([0.0, 0.0]) == -1.0
    assert box.signed_distance([2.0, 2.0]) == pytest.approx(math.sqrt(2))
    assert BALL.signed_distance([0.0, 0.0, 3.0]) == 2.0


# -- series ------------------------------------------------------------------


def test_degree_factor_calibration():
    assert SERIES_DEGREE_FACTOR == -1.0
    assert calibrate_series_factor(3) == pytest.approx(-1.0, abs=1e-10)


def test_series_of_constant():
    trace = TraceSamples.sample(make_quadrature(BALL), one)
    coeffs = series_coefficients(trace, 2)
    np.testing.assert_allclose(coeffs[(0, 0)].coeffs, G3.scalar(1).coeffs, atol=1e-4)
    for mi, a in coeffs.items():
        if mi != (0, 0):
            assert np.max(np.abs(a.coeffs)) < 1e-3


def test_series_of_z12_round_trips(z12_trace):
    coeffs = series_coefficients(z12_trace, 3)
    pts = np.random.default_rng(9).uniform(-0.28, 0.28, (20, 3))
    np.testing.assert_allclose(eval_series(coeffs, pts, 3).coeffs, z12(pts).coeffs, atol=1e-3)


def test_series_recovers_polynomial_coefficients():
    p = build_poly((1, 1))
    coeffs = series_coefficients(TraceSamples.sample(make_quadrature(BALL), p), 2)
    for mi in multi_indices(3, 2):
        target = 1.0 if mi == (1, 1) else 0.0
        np.testing.assert_allclose(coeffs[mi].coeffs, G3.scalar(target).coeffs, atol=1e-5)


def test_spinor_traces_have_even_coefficients(z12_trace):
    for a in series_coefficients(z12_trace, 2).values():
        assert np.max(np.abs(a.odd().coeffs)) < 1e-12


def test_series_guards(z12_trace):
    box_trace = TraceSamples.sample(make_quadrature(RegionSpec.box((0.0, 0.0, 0.0), 1.0), (4,)), z12)
    with pytest.raises(DomainError):
        series_coefficients(box_trace, 1)
    off = TraceSamples.sample(make_quadrature(RegionSpec.ball((0.5, 0.0, 0.0), 1.0), (8, 16)), z12)
    with pytest.raises(DomainError):
        series_coefficients(off, 1)
    with pytest.raises(ValueError):
        series_coefficients(z12_trace, 5)
    with pytest.raises(ValueError):
        series_coefficients(z12_trace, 2, fd_step=0.3)
