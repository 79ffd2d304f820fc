import numpy as np
import pytest
from hypothesis import given, strategies as st

from gmsphere import algebra as alg
from gmsphere import brieskorn as bk
from strategies import angles, seeds


@given(seeds, st.sampled_from([3, 7]))
def test_random_points_lie_on_w(seed, n):
    x = bk.random_point(np.random.default_rng(seed), n)
    assert x.max_residual() < 1e-13


def test_real_and_complex_forms_agree(rng):
    x = bk.random_point(rng)
    assert x.to_real().max_residual() < 1e-13
    assert x.to_real().to_complex().distance(x) == 0.0
    assert bk.BrieskornPoint.from_vector(x.vector()).distance(x) == 0.0


def test_point_validation():
    with pytest.raises(ValueError):
        bk.BrieskornPoint(0.0, np.zeros(4))
    with pytest.raises(ValueError):
        bk.BrieskornPoint(1.0, np.zeros(3)).check()


@given(seeds)
def test_action_is_a_group_action(seed):
    rng = np.random.default_rng(seed)
    x = bk.random_point(rng)
    g, h = bk.random_element(rng), bk.random_element(rng)
    assert bk.act(g, x).max_residual() < 1e-12
    assert bk.act(g @ h, x).distance(bk.act(g, bk.act(h, x))) < 1e-13
    assert bk.act(bk.IsometryElement.identity(), x).distance(x) == 0.0


def test_element_validation():
    with pytest.raises(ValueError):
        bk.IsometryElement(np.eye(2) * 2, np.eye(3))
    with pytest.raises(ValueError):
        bk.IsometryElement(np.eye(2), -np.eye(3))
    # a rotation of a single coordinate plane is in SO(7) but not in G2
    plane = np.eye(7)
    plane[:2, :2] = bk.rotation2(0.5)
    with pytest.raises(ValueError):
        bk.IsometryElement(np.eye(2), plane, check_g2=True)


def test_o2_decomposition_round_trip():
    for theta in np.linspace(-3, 3, 7):
        for eps in (False, True):
            b = bk.rotation2(theta) @ (bk.REFLECTION if eps else np.eye(2))
            t, e = bk.o2_decompose(b)
            assert e == eps and t == pytest.approx(theta)


def test_calabi_involution_is_the_rotation_by_pi(rng):
    x = bk.random_point(rng)
    assert bk.act(bk.IsometryElement.rotation(np.pi), x).distance(bk.calabi_involution(x)) < 1e-15


def test_deck_rotation_preserves_w_but_is_not_in_the_group(rng):
    x = bk.random_point(rng)
    y = bk.deck_rotation(x)
    assert y.max_residual() < 1e-13
    assert bk.deck_rotation(x, 3).distance(x) < 1e-15
    # a group element moving z0 by e^{2 pi i/3} has e^{3 i theta} = -1 and also moves z
    g = bk.IsometryElement.rotation(np.pi / 3)
    assert bk.act(g, x).distance(y) > 1e-3


@given(st.floats(0.0, 2 * np.pi))
def test_beta_is_a_unit_speed_geodesic(s):
    r = bk.beta_geodesic_residual(s)
    assert r.speed_error < 1e-9
    assert r.tangential_acceleration < 1e-5
    assert r.orbit_perpendicularity < 1e-12
    assert bk.beta_fixed_set_residual(s) == 0.0


def test_reparametrized_beta_is_not_a_geodesic():
    tang, _ = bk.curve_geodesic_residual(lambda s: bk.beta(s * s), 0.7)
    assert tang > 1.0


def test_isotropy_tables(rng):
    for s, group in ((0.37, "H"), (0.0, "K-"), (np.pi / 4, "K+")):
        rep = bk.isotropy_verify(s, rng)
        assert rep.group == group
        assert rep.max_fixed_residual < 1e-12
        assert rep.min_random_displacement > 1e-6


def test_isotropy_only_at_tabulated_walls(rng):
    with pytest.raises(ValueError):
        bk.isotropy_verify(np.pi / 2, rng)


def test_k_plus_literal_sign_fails():
    # regression: with D(-3 theta) the listed elements move beta(pi/4)
    point = bk.beta(np.pi / 4)
    literal = max(bk.act(g, point).distance(point) for g in bk.k_plus(0.7, literal=True))
    corrected = max(bk.act(g, point).distance(point) for g in bk.k_plus(0.7))
    assert corrected < 1e-14
    assert literal > 0.1


def test_k_plus_literal_sign_passes_at_roots_of_unity():
    # the two signs agree exactly when e^{6 i theta} = 1, which is why generic angles are needed
    point = bk.beta(np.pi / 4)
    for g in bk.k_plus(np.pi / 3, literal=True):
        assert bk.act(g, point).distance(point) < 1e-14


@given(seeds)
def test_g2_samples_are_automorphisms(seed):
    g = bk.g2_sample(seed)
    assert bk.g2_residual(g) < 1e-12
    np.testing.assert_allclose(g.T @ g, np.eye(7), atol=1e-13)


def _derivation_residual(d, rng):
    x, y = rng.standard_normal((2, 7))
    lhs = d @ alg.cross(x, y)
    rhs = alg.cross(d @ x, y) + alg.cross(x, d @ y)
    return float(np.abs(lhs - rhs).max())


def test_octonion_derivation_is_a_derivation(rng):
    a, b = rng.standard_normal((2, 7))
    d = bk.octonion_derivation(a, b)
    np.testing.assert_allclose(d, -d.T, atol=1e-13)
    assert _derivation_residual(d, rng) < 1e-12


def test_octonion_derivation_opposite_sign_is_not(rng):
    # regression: the variant with -3((ax)b - a(xb)) fails the Leibniz rule
    a, b = rng.standard_normal((2, 7))
    A, B = alg.embed(a), alg.embed(b)
    ab = alg.omul(A, B) - alg.omul(B, A)
    cols = []
    for k in range(1, 8):
        x = alg.basis(7, k)
        v = alg.omul(ab, x) - alg.omul(x, ab) - 3 * (alg.omul(alg.omul(A, x), B) - alg.omul(A, alg.omul(x, B)))
        cols.append(alg.imag(v))
    assert _derivation_residual(np.stack(cols, axis=-1), rng) > 1e-2


def test_disc_projection_of_beta():
    assert bk.disc_projection(bk.beta(0.0)) == pytest.approx(-1.0)
    assert bk.disc_projection(bk.beta(np.pi / 4)) == pytest.approx(0.0, abs=1e-16)


@given(angles)
def test_killing_vectors_are_tangent(theta):
    x = bk.act(bk.IsometryElement.rotation(theta), bk.beta(0.4))
    jac = bk.constraint_jacobian(x)
    for k in bk.killing_vectors(x):
        assert np.abs(jac @ k).max() < 1e-12
