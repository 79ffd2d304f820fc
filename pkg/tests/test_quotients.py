import numpy as np
import pytest
from hypothesis import given, strategies as st

from gmsphere import brieskorn as bk
from gmsphere import quotients as Q
from gmsphere import sp2
from strategies import seeds

params = st.builds(Q.LensActionParams, st.integers(1, 12), st.integers(-6, 6), st.integers(-6, 6))


@given(params)
def test_predicate_matches_fixed_point_oracle(lp):
    assert Q.is_free(lp) == Q.fixed_point_oracle(lp)


def test_trivial_group_is_free():
    # m = 1: the stated conditions reject p = 0 although nothing acts
    lp = Q.LensActionParams(1, 0, 0)
    assert Q.is_free(lp)
    assert not Q.table_predicate(lp)
    assert Q.fixed_point_oracle(lp)


@pytest.mark.parametrize("m,p,q,free", [(7, 1, 0, True), (7, 1, 2, True), (2, 1, 3, False), (5, 0, 1, False),
                                        (4, 1, 3, False), (5, 2, 2, True), (5, 2, 1, False)])
def test_known_cases(m, p, q, free):
    lp = Q.LensActionParams(m, p, q)
    assert Q.is_free(lp) is free
    assert Q.fixed_point_oracle(lp) is free


def test_params_validation():
    with pytest.raises(ValueError):
        Q.LensActionParams(0, 1, 1)


@given(seeds, params)
def test_phi_is_unit_and_equivariant(seed, lp):
    x = bk.random_point(np.random.default_rng(seed))
    assert abs(np.linalg.norm(Q.phi(x)) - 1.0) < 1e-12
    assert Q.phi_equivariance_residual(lp, x) < 1e-12
    assert Q.phi_equivariance_residual(lp, x, "z0") < 1e-12


@given(seeds)
def test_phi_is_deck_invariant(seed):
    x = bk.random_point(np.random.default_rng(seed))
    np.testing.assert_array_equal(Q.phi(bk.deck_rotation(x)), Q.phi(x))


def test_phi_weights():
    lp = Q.LensActionParams(7, 1, 2)
    assert Q.phi_weights(lp) == (3, 5, 1)
    assert Q.phi_weights(lp, "z0") == (2, 5, 1)


@given(seeds)
def test_generic_fibers_have_three_points(seed):
    x = bk.random_point(np.random.default_rng(seed))
    fib = Q.fiber(Q.phi(x))
    assert len(fib) == 3
    assert min(x.distance(f) for f in fib) < 1e-9
    assert all(f.max_residual() < 1e-12 for f in fib)


def test_branch_fiber_has_one_point():
    z = (2.0 / 3.0) * np.array([1.0, 1j, 0.0]) / np.sqrt(2.0)
    y = bk.BrieskornPoint(0.0, z)
    assert y.max_residual() < 1e-15
    assert Q.fiber_count(Q.phi(y)) == 1


def test_near_branch_fibers_stay_three_to_one():
    # |z0| of order 1e-4: the cubic in |z0| must not collapse to the branch case
    z = (2.0 / 3.0) * np.array([1.0, 1j, 0.0]) / np.sqrt(2.0)
    u = Q.phi(bk.BrieskornPoint(0.0, z)) + np.array([1e-12, 0.0, 0.0])
    u /= np.linalg.norm(u)
    fib = Q.fiber(u)
    assert len(fib) == 3
    assert all(1e-5 < abs(f.z0) < 1e-3 for f in fib)
    assert all(f.max_residual() < 1e-14 for f in fib)
    assert all(np.abs(Q.phi(f) - u).max() < 1e-15 for f in fib)
    np.testing.assert_allclose(bk.deck_rotation(fib[0]).z0, fib[1].z0, atol=1e-18)


def test_z0_variant_is_two_to_one(rng):
    x = bk.random_point(rng)
    fib = Q.fiber(Q.phi(x, "z0"), "z0")
    assert len(fib) == 2
    assert min(x.distance(f) for f in fib) < 1e-9


def test_phi_rejects_bad_input(rng):
    with pytest.raises(ValueError):
        Q.phi(bk.random_point(rng), "z2")
    with pytest.raises(ValueError):
        Q.fiber(np.array([1.0, 1.0, 0.0]))


@given(st.integers(1, 9), seeds)
def test_rho(r, seed):
    rng = np.random.default_rng(seed)
    v = rng.standard_normal(3) + 1j * rng.standard_normal(3)
    v /= np.linalg.norm(v)
    out = Q.rho(r, v)
    assert abs(np.linalg.norm(out) - 1) < 1e-14
    assert abs(out[0] - abs(v[0]) * (v[0] / abs(v[0])) ** r) < 1e-14


def test_degree_inverse_of_three():
    for m in (2, 4, 5, 7, 8, 10, 11):
        assert (3 * Q.degree_inverse_of_three(m)) % m == 1
    with pytest.raises(ValueError):
        Q.degree_inverse_of_three(9)


def test_lens_metadata():
    meta = Q.lens_parameters(Q.LensActionParams(7, 1, 2))
    assert meta.l5 == (1, 1, 5) and meta.l7 == (1, 1, 1, 5)
    with pytest.raises(ValueError):
        Q.lens_parameters(Q.LensActionParams(12, 1, 1))
    with pytest.raises(ValueError):
        Q.lens_parameters(Q.LensActionParams(2, 1, 3))


@given(seeds)
def test_join_is_equivariant(seed):
    rng = np.random.default_rng(seed)
    j = Q.JoinPoint(np.exp(1j * rng.uniform(-3, 3)), bk.random_point(rng), rng.uniform(0, np.pi / 2))
    g = bk.random_element(rng)
    a = Q.act_on_sigma7(g, Q.join_to_sigma7(j))
    b = Q.join_to_sigma7(Q.act_on_join(g, j))
    assert sp2.orbit_residual(a.rep, b.rep) < 1e-9


def test_join_collapses_at_the_ends(rng):
    b1, b2 = bk.random_point(rng), bk.random_point(rng)
    start = [Q.join_to_sigma7(Q.JoinPoint(1j, b, 0.0)) for b in (b1, b2)]
    assert start[0] == start[1]
    end = [Q.join_to_sigma7(Q.JoinPoint(z, b1, np.pi / 2)) for z in (1.0, np.exp(0.7j))]
    assert end[0] == end[1]
    assert sp2.in_sigma5(end[0])


def test_join_needs_mu_one(rng):
    j = Q.JoinPoint(1.0, bk.random_point(rng), 0.3)
    with pytest.raises(ValueError):
        Q.join_to_sigma7(j, sp2.MetricParams(0.5, 0.5))


def test_join_point_validation(rng):
    with pytest.raises(ValueError):
        Q.JoinPoint(2.0, bk.random_point(rng), 0.3)
    with pytest.raises(ValueError):
        Q.JoinPoint(1.0, bk.random_point(rng), 2.0)


def test_quaternion_from_rotation(rng):
    from gmsphere import algebra as alg

    for q in list(alg.random_unit(rng, 3, 10)) + [np.array([0, 1.0, 0, 0])]:
        r = Q.quaternion_from_rotation(alg.conj_matrix(q))
        assert min(np.abs(r - q).max(), np.abs(r + q).max()) < 1e-12
