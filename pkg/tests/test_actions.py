import numpy as np
import pytest
from hypothesis import given, strategies as st

from gmsphere import actions
from gmsphere import algebra as alg
from gmsphere import brieskorn as bk
from gmsphere.diffeo import SpherePair
from strategies import angles, seeds, sphere_pairs


@given(sphere_pairs(3), angles, angles)
def test_cocycle(x, theta, tau):
    assert actions.cocycle_residual(x, theta, tau) < 1e-11


@given(sphere_pairs(7), angles, angles)
def test_cocycle_octonions(x, theta, tau):
    assert actions.cocycle_residual(x, theta, tau) < 1e-11


@given(sphere_pairs(3), angles, st.integers(0, 3))
def test_q_expansion_matches_product(x, theta, m):
    if np.linalg.norm(x.w) < 1e-6 or np.linalg.norm(actions.rotate_linear(x, theta)[1]) < 1e-6:
        return
    np.testing.assert_allclose(actions.q_map(x, theta, m), actions.q_map_raw(x, theta, m), atol=1e-12)


@given(sphere_pairs(3), angles, angles, st.integers(0, 2))
def test_action_law(x, theta, tau, m):
    assert actions.action_law_residual(x, theta, tau, m) < 1e-10


@given(sphere_pairs(7))
def test_involution_squares_to_identity(x):
    y = actions.involution(x)
    assert actions.involution(y).distance(x) < 1e-10


def test_involution_is_not_the_antipodal_map(rng):
    x = SpherePair.random(rng, 3)
    assert actions.involution(x).distance(SpherePair(-x.p, -x.w)) > 1e-3


@given(sphere_pairs(3), angles)
def test_dihedral_relation(x, theta):
    assert actions.dihedral_residual(x, theta) < 1e-10


@given(sphere_pairs(3), angles, seeds)
def test_commutes_with_so3(x, theta, seed):
    g = alg.conj_matrix(alg.random_unit(np.random.default_rng(seed), 3))
    assert actions.equivariance_residual(x, theta, g) < 1e-12


@given(sphere_pairs(3), angles)
def test_intertwines_linear_brieskorn_action(x, theta):
    assert actions.brieskorn_equivalence_residual(x, theta) < 1e-9


@given(sphere_pairs(7), angles)
def test_intertwines_linear_brieskorn_action_n7(x, theta):
    assert actions.brieskorn_equivalence_residual(x, theta) < 1e-9


@given(sphere_pairs(3))
def test_reflection_and_calabi(x):
    assert actions.reflection_residual(x) < 1e-12
    assert actions.calabi_residual(x) < 1e-9


def test_rational_psi_does_not_intertwine(rng):
    # only the trigonometric version conjugates the rotations exactly
    from gmsphere import diffeo

    x = SpherePair.random(rng, 3)
    lhs = diffeo.psi(actions.nonlinear_rotate(x, 0.8)).to_complex()
    rhs = bk.act(bk.IsometryElement.rotation(0.8), diffeo.psi(x).to_complex())
    assert lhs.distance(rhs) > 1e-4


def test_twisted_quotients_match_direct_formulas():
    r = np.linspace(0.05, 0.95, 19)
    for m in (1, 2, 3):
        k = 2 * m + 1
        f1, f2 = actions.twisted_quotients(r, m)
        np.testing.assert_allclose(f1, np.sin(k * np.pi * r / 2) / r, atol=1e-13)
        np.testing.assert_allclose(f2, np.cos(k * np.pi * r / 2) / (1 - r * r), atol=1e-12)


def test_normal_curve_identification():
    rot = actions.normal_curve_identification()
    np.testing.assert_allclose(rot, actions.NORMAL_CURVE_ROTATION, atol=1e-12)
    for s in np.linspace(0, np.pi, 9):
        assert actions.normal_curve_residual(s) < 1e-12


def test_nonlinearity_witness():
    _, _, gap = actions.nonlinearity_witness()
    # frozen value of the witness at theta = pi/2
    assert gap == pytest.approx(0.4637, abs=1e-4)


def test_rotation_preserves_the_sphere(rng):
    for _ in range(20):
        x = SpherePair.random(rng, 7)
        y = actions.nonlinear_rotate(x, rng.uniform(-3, 3))
        assert abs(y.vector() @ y.vector() - 1.0) < 1e-12
