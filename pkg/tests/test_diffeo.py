import numpy as np
import pytest
from hypothesis import given, strategies as st

from gmsphere import algebra as alg
from gmsphere import brieskorn as bk
from gmsphere import diffeo
from gmsphere.diffeo import SpherePair
from strategies import seeds, sphere_pairs


@given(sphere_pairs(3))
def test_psi_lands_on_w_n3(x):
    assert diffeo.psi(x).max_residual() < 1e-12
    assert diffeo.psi_trig(x).max_residual() < 1e-12


@given(sphere_pairs(7))
def test_psi_lands_on_w_n7(x):
    assert diffeo.psi(x).max_residual() < 1e-12
    assert diffeo.psi_trig(x).max_residual() < 1e-12


@given(sphere_pairs(3))
def test_round_trip_n3(x):
    assert diffeo.psi_inverse(diffeo.psi(x)).distance(x) < 1e-9
    assert diffeo.psi_trig_inverse(diffeo.psi_trig(x)).distance(x) < 1e-9


@given(sphere_pairs(7))
def test_round_trip_n7(x):
    assert diffeo.psi_inverse(diffeo.psi(x)).distance(x) < 1e-9
    assert diffeo.psi_trig_inverse(diffeo.psi_trig(x)).distance(x) < 1e-9


@pytest.mark.parametrize("pair", [
    SpherePair([1.0, 0, 0], [0, 0, 0]),
    SpherePair([0, 0, 0], [0, 1.0, 0]),
    SpherePair([0.6, 0, 0], [0.8, 0, 0]),
    SpherePair([0.6, 0, 0], [-0.8, 0, 0]),
])
def test_round_trip_at_degenerate_pairs(pair):
    # p = 0, w = 0 and p parallel to w
    for f, inv in ((diffeo.psi, diffeo.psi_inverse), (diffeo.psi_trig, diffeo.psi_trig_inverse)):
        assert inv(f(pair)).distance(pair) < 1e-12


def test_psi_at_the_poles():
    # p = 0 maps to x0 = 1/2, w = 0 to x0 = -1/2
    top = diffeo.psi(SpherePair([0, 0, 0], [1.0, 0, 0]))
    bottom = diffeo.psi(SpherePair([1.0, 0, 0], [0, 0, 0]))
    assert (top.x0, bottom.x0) == (0.5, -0.5)


@given(st.floats(-0.5, 0.5), st.floats(-0.5, 0.5))
def test_determinant_bound(x0, y0):
    if x0 * x0 + y0 * y0 > 0.25:
        return
    det = np.linalg.det(diffeo.frame_matrix(diffeo.rational_coefficients, x0, y0))
    assert det >= diffeo.determinant_bound(x0) * (1 - 1e-12)


def test_determinant_bound_values():
    assert diffeo.determinant_bound(0.5) == pytest.approx(1 / 9)
    assert diffeo.determinant_bound(-0.5) == pytest.approx(256 / (9 * 4**8))


def test_trig_frame_is_never_singular():
    worst = min(abs(np.linalg.det(diffeo.frame_matrix(diffeo.trig_coefficients, 0.5 * np.cos(a) * r,
                                                       0.5 * np.sin(a) * r)))
                for a in np.linspace(0, 2 * np.pi, 41) for r in np.linspace(0, 1, 21))
    assert worst > 0.1


@given(sphere_pairs(3), seeds)
def test_so3_equivariance(x, seed):
    g = alg.conj_matrix(alg.random_unit(np.random.default_rng(seed), 3))
    assert diffeo.equivariance_check(g, x) < 1e-12
    assert diffeo.equivariance_check(g, x, trig=True) < 1e-12


@given(sphere_pairs(7), seeds)
def test_g2_equivariance(x, seed):
    g = bk.g2_sample(seed)
    assert diffeo.equivariance_check(g, x) < 1e-9
    assert diffeo.equivariance_check(g, x, trig=True) < 1e-9


def test_psi_is_not_so7_equivariant(rng):
    plane = np.eye(7)
    plane[:2, :2] = bk.rotation2(0.5)
    x = SpherePair.random(rng, 7)
    assert diffeo.equivariance_check(plane, x) > 1e-3


@given(sphere_pairs(5))
def test_partial_map_in_other_dimensions(x):
    if np.linalg.norm(x.w) < 1e-3:
        return
    assert diffeo.partial_injective(x).max_residual() < 1e-12


def test_partial_map_undefined_at_w_zero():
    with pytest.raises(ValueError):
        diffeo.partial_injective(SpherePair([1.0, 0, 0, 0], [0, 0, 0, 0]))


def test_psi_needs_a_cross_product():
    with pytest.raises(ValueError):
        diffeo.psi(SpherePair([1.0, 0, 0, 0], [0, 0, 0, 0]))


def test_inverse_rejects_points_off_w():
    bad = bk.BrieskornRealForm(0.0, 0.0, np.ones(3), np.zeros(3))
    with pytest.raises(ValueError):
        diffeo.psi_inverse(bad)


def test_sphere_pair_validation():
    with pytest.raises(ValueError):
        SpherePair([1.0, 1.0, 0], [0, 0, 0])
    with pytest.raises(ValueError):
        SpherePair([1.0, 0], [0, 0, 0])


@given(sphere_pairs(3))
def test_disc_coordinate_is_twice_z0(x):
    assert diffeo.disc_coordinate(x) == pytest.approx(2 * diffeo.psi(x).to_complex().z0, abs=1e-15)


@given(sphere_pairs(7))
def test_outputs_in_frame_span(x):
    assert diffeo.span_residual(x) < 1e-12
    assert diffeo.span_residual(x, trig=True) < 1e-12


def test_batched_psi_matches_pointwise(rng):
    v = rng.standard_normal((20, 6))
    v /= np.linalg.norm(v, axis=1, keepdims=True)
    x0, y0, x, y = diffeo.psi_arrays(v[:, :3], v[:, 3:])
    for k in range(20):
        b = diffeo.psi(SpherePair(v[k, :3], v[k, 3:]))
        assert abs(b.x0 - x0[k]) + abs(b.y0 - y0[k]) + np.abs(b.x - x[k]).max() + np.abs(b.y - y[k]).max() < 1e-15
