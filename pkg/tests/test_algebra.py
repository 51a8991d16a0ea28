import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from hypothesis.extra.numpy import arrays

from monogenica.algebra import (
    MAX_DIMENSION,
    Multivector,
    NotABladeError,
    Signature,
    SignatureError,
    SignatureMismatchError,
    algebra,
    blade_inverse,
    dual,
    euclidean,
    grade_project,
    inverse_pseudoscalar,
    left_contract,
    mv_inner,
    mv_norm,
    mv_norm_sq,
    project_blade,
    reverse,
    wedge,
)

G3 = algebra(3)
STA = Signature(1, 3, start=0)  # e0^2 = +1, e1..e3 square to -1

coeff = st.floats(-2, 2, allow_nan=False, allow_infinity=False)


def mvs(n, sig=None):
    sig = sig or euclidean(n)
    return arrays(np.float64, 1 << sig.n, elements=coeff).map(lambda c: Multivector(sig, c))


# -- fixed points ------------------------------------------------------------


def test_e123_times_e124():
    G4 = algebra(4)
    assert G4.blade(1, 2, 3) * G4.blade(1, 2, 4) == -G4.blade(3, 4)


@pytest.mark.parametrize("plane", [(1, 2), (1, 3), (2, 3)])
def test_bivectors_square_to_minus_one(plane):
    B = G3.blade(*plane)
    assert B * B == G3.scalar(-1)


def test_bivector_triple_product():
    assert G3.blade(2, 3) * G3.blade(1, 3) * G3.blade(1, 2) == G3.scalar(-1)


def test_pseudoscalar_has_unit_norm():
    assert mv_norm(G3.pseudoscalar) == 1.0
    assert mv_norm_sq(G3.pseudoscalar) == 1.0


def test_reversed_pair_bivector():
    # B_ji = -B_ij and B_ij B_ji = 1
    assert G3.blade(2, 1) == -G3.blade(1, 2)
    assert G3.blade(1, 2) * G3.blade(2, 1) == G3.scalar(1)


def test_dual_of_e1():
    assert dual(G3.e(1)) == -G3.blade(2, 3)


def test_dual_of_one_is_inverse_pseudoscalar():
    assert dual(G3.scalar(1)) == inverse_pseudoscalar(G3.sig)


def test_spacetime_squares():
    sta = algebra(STA)
    assert sta.e(0) * sta.e(0) == sta.scalar(1)
    for i in (1, 2, 3):
        assert sta.e(i) * sta.e(i) == sta.scalar(-1)
    assert mv_norm_sq(sta.blade(1, 2, 3)) == -1.0


def test_metric_ordering_constructor():
    sig = Signature.from_metric((-1, 1, 1, 1), start=0)
    alg = algebra(sig)
    assert alg.e(0) * alg.e(0) == alg.scalar(-1)
    assert alg.e(3) * alg.e(3) == alg.scalar(1)
    assert (sig.p, sig.q) == (3, 1)


def test_blade_names():
    assert [G3.blade_name(b) for b in range(8)] == ["1", "e1", "e2", "e12", "e3", "e13", "e23", "e123"]


def test_projection_onto_b12_worked_example():
    a = G3.mv(np.arange(1.0, 9.0))  # 1, e1, e2, e12, e3, e13, e23, e123
    expected = G3.mv([1.0, 2.0, 3.0, 4.0, 0, 0, 0, 0])
    assert project_blade(a, G3.blade(1, 2)) == expected


def test_projection_onto_spatial_trivector():
    sta = algebra(STA)
    A = sta.random(np.random.default_rng(3))
    P = project_blade(A, sta.blade(1, 2, 3))
    spatial = (sta.blades & sta.bit(0)) == 0
    np.testing.assert_allclose(P.coeffs, A.coeffs * spatial, atol=1e-12)


# -- errors ------------------------------------------------------------------


def test_dimension_cap():
    with pytest.raises(SignatureError):
        Signature(MAX_DIMENSION + 1)
    with pytest.raises(SignatureError):
        Signature(-1)


def test_mixed_signatures_rejected():
    with pytest.raises(SignatureMismatchError):
        algebra(3).e(1) * algebra(4).e(1)


def test_grade_outside_range():
    with pytest.raises(ValueError):
        grade_project(G3.e(1), 4)


@pytest.mark.parametrize(
    "bad",
    [G3.scalar(1) + G3.blade(1, 2), G3.e(1) * 2.0, G3.e(1) + G3.blade(2, 3)],
    ids=["mixed-grade", "non-unit", "mixed-vector-bivector"],
)
def test_project_blade_rejects(bad):
    with pytest.raises(NotABladeError):
        project_blade(G3.e(1), bad)


def test_null_blade_has_no_inverse():
    alg = algebra(Signature(1, 1))
    with pytest.raises(NotABladeError):
        blade_inverse(alg.e(1) + alg.e(2))


def test_multivectors_are_immutable():
    a = G3.e(1)
    with pytest.raises(AttributeError):
        a.coeffs = np.zeros(8)
    with pytest.raises(ValueError):
        a.coeffs[0] = 1.0


def test_large_dimension_product_without_table():
    alg = algebra(10)
    a = alg.blade(1, 5, 9) * alg.blade(9, 10)
    assert a == alg.blade(1, 5, 10)


# -- properties --------------------------------------------------------------


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 6), st.integers(0, 2**32 - 1))
def test_associativity_euclidean(n, seed):
    alg = algebra(n)
    a, b, c = alg.random(np.random.default_rng(seed), 3)
    np.testing.assert_allclose(((a * b) * c).coeffs, (a * (b * c)).coeffs, atol=1e-12)


@settings(max_examples=40, deadline=None)
@given(mvs(4, STA), mvs(4, STA), mvs(4, STA))
def test_associativity_spacetime(a, b, c):
    np.testing.assert_allclose(((a * b) * c).coeffs, (a * (b * c)).coeffs, atol=1e-12)


@settings(max_examples=60, deadline=None)
@given(arrays(np.float64, 4, elements=coeff), arrays(np.float64, 4, elements=coeff))
def test_vector_product_split(v, w):
    V, W = algebra(4).vector(v), algebra(4).vector(w)
    assert V * W == (V | W) + (V ^ W)


@settings(max_examples=60, deadline=None)
@given(mvs(4), mvs(4))
def test_reverse_is_antiautomorphism(a, b):
    np.testing.assert_allclose(reverse(a * b).coeffs, (reverse(b) * reverse(a)).coeffs, atol=1e-12)


@settings(max_examples=60, deadline=None)
@given(mvs(3), mvs(3), mvs(3))
def test_adjoint_identity(a, b, c):
    assert abs(mv_inner(c * a, b) - mv_inner(a, reverse(c) * b)) < 1e-12


@settings(max_examples=40, deadline=None)
@given(mvs(4), mvs(4))
def test_dual_exchanges_contraction_and_wedge(a, b):
    np.testing.assert_allclose(dual(left_contract(a, b)).coeffs, wedge(a, dual(b)).coeffs, atol=1e-12)


@pytest.mark.parametrize("sig", [euclidean(n) for n in range(1, 7)] + [STA, Signature(2, 1)])
def test_double_dual_sign_matches_brute_force(sig):
    alg = algebra(sig)
    I = alg.pseudoscalar
    rng = np.random.default_rng(sig.n)
    for k in range(sig.n + 1):
        a = alg.random(rng, (), [k])
        # brute force: the scalar (I^-1)^2 computed from the pseudoscalar's own square
        s = 1.0 / (I * I).scalar
        np.testing.assert_allclose(dual(dual(a)).coeffs, s * a.coeffs, atol=1e-12)


@settings(max_examples=60, deadline=None)
@given(mvs(3), st.sampled_from([(1, 2), (1, 3), (2, 3), (1,), (3,), (1, 2, 3)]))
def test_projection_idempotent_and_grade_preserving(a, labels):
    u = G3.blade(*labels)
    pa = project_blade(a, u)
    np.testing.assert_allclose(project_blade(pa, u).coeffs, pa.coeffs, atol=1e-12)
    for k in range(4):
        part = project_blade(grade_project(a, k), u)
        assert part.grades_present(1e-12) <= {k}


def test_projection_onto_itself():
    for labels in [(1,), (1, 2), (1, 2, 3)]:
        u = G3.blade(*labels)
        assert project_blade(u, u) == u


# -- norm ----------------------------------------------------------------------
# The pointwise C*-identity and submultiplicativity are theorems on the even
# subalgebras of G_2 and G_3 and on versors, and fail for general elements.


@settings(max_examples=60, deadline=None)
@given(arrays(np.float64, 8, elements=coeff))
def test_cstar_identity_on_g3_spinors(c):
    a = G3.mv(c).even()
    assert abs(mv_norm(reverse(a) * a) - mv_norm(a) ** 2) <= 1e-10 * max(1.0, mv_norm(a) ** 2)


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 6), st.integers(1, 4), st.integers(0, 2**32 - 1))
def test_cstar_identity_and_submultiplicativity_on_versors(n, factors, seed):
    alg = algebra(n)
    rng = np.random.default_rng(seed)

    def versor():
        v = alg.vector(rng.standard_normal(n))
        for _ in range(factors - 1):
            v = v * alg.vector(rng.standard_normal(n))
        return v

    a, b = versor(), versor()
    assert abs(mv_norm(reverse(a) * a) - mv_norm(a) ** 2) <= 1e-10 * mv_norm(a) ** 2
    assert mv_norm(a * b) <= mv_norm(a) * mv_norm(b) * (1 + 1e-10)


def test_cstar_identity_counterexample():
    a = G3.scalar(1) + G3.e(1)
    assert mv_norm(a) ** 2 == pytest.approx(2.0)
    assert mv_norm(reverse(a) * a) == pytest.approx(2 * np.sqrt(2))
    assert mv_norm(a * a) > mv_norm(a) ** 2


def test_batched_products_broadcast():
    rng = np.random.default_rng(0)
    a = G3.random(rng, (5,))
    b = G3.random(rng)
    batch = a * b
    assert batch.shape == (5,)
    for i in range(5):
        assert batch[i] == a[i] * b
