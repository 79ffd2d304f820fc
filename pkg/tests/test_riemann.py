import numpy as np
import pytest
from hypothesis import given, strategies as st

from gmsphere import riemann as R
from gmsphere.sp2 import MetricParams
from strategies import metric_params

HALF = MetricParams(0.5, 0.5)


def test_engine_on_round_sphere2():
    assert R.gauss_curvature(R.round_sphere2(), [0.7, 0.1]) == pytest.approx(1.0, rel=1e-7)


def test_engine_on_hyperbolic_plane():
    assert R.gauss_curvature(R.hyperbolic_plane(), [0.3, 1.7]) == pytest.approx(-1.0, rel=1e-7)


def test_engine_on_round_sphere3():
    M = R.round_sphere3()
    x = [0.6, 0.2, 0.4]
    rm = R.riemann_tensor(M, x)
    assert R.scalar_from(rm, M(x)) == pytest.approx(6.0, rel=1e-7)
    assert R.sectional_extremes_at(rm, M(x)) == pytest.approx((1.0, 1.0), rel=1e-7)
    assert R.bianchi_residual(rm) < 1e-8


def test_engine_on_flat_and_product():
    assert abs(R.scalar(R.euclidean(3), [0.1, 0.2, 0.3])) < 1e-12
    M = R.product(R.round_sphere2(), R.round_sphere2())
    x = [0.8, 0.1, 1.1, 0.3]
    rm = R.riemann_tensor(M, x)
    assert R.scalar_from(rm, M(x)) == pytest.approx(4.0, rel=1e-6)
    # mixed planes are flat
    assert abs(R.sectional_from(rm, M(x), [1, 0, 0, 0], [0, 0, 1, 0])) < 1e-8


def test_domain_errors():
    with pytest.raises(R.DomainError):
        R.round_sphere2().check_point([0.0, 0.0])
    with pytest.raises(R.DomainError):
        R.round_sphere2().check_point([1e-4, 0.0], margin=1e-3)


def test_sigma2_values_at_biinvariant_metric():
    closed = R.sigma2_curvature_closed(HALF)
    assert closed == pytest.approx({"s=0": 14.5, "s=pi/4": 4 / 3, "s=pi/2": -0.8})
    numeric = R.sigma2_curvature_numeric(HALF)
    for key in closed:
        assert numeric[key] == pytest.approx(closed[key], rel=1e-3)


@given(metric_params)
def test_sigma2_closed_forms(params):
    P = MetricParams(*params)
    closed, numeric = R.sigma2_curvature_closed(P), R.sigma2_curvature_numeric(P)
    for key in closed:
        assert numeric[key] == pytest.approx(closed[key], rel=1e-3)


@given(metric_params)
def test_sigma2_has_negative_curvature(params):
    P = MetricParams(*params)
    assert R.gauss_curvature(R.sigma2_metric(P), [np.pi / 2, 0.0]) < 0


def test_sigma31_bounds_at_biinvariant_metric():
    assert R.sigma31_bounds(HALF) == pytest.approx((0.4, 26.0))
    M = R.sigma31_metric(HALF)
    x = [np.pi / 2, np.pi / 2, 0.0]
    lo, _ = R.sectional_extremes_at(R.riemann_tensor(M, x), M(x))
    assert lo == pytest.approx(0.4, rel=1e-6)


def test_sigma32_metric_agrees_with_mu1_form():
    for x in ([0.7, 1.1, 0.0], [2.0, 0.4, 0.0]):
        np.testing.assert_allclose(R.sigma32_components(x, MetricParams(1.0, 0.6)),
                                   R.sigma32_components_mu1(x, 0.6), atol=1e-14)


@given(st.floats(0.1, 1.4), st.floats(0.3, 2.8), st.floats(0.25, 2.0))
def test_sigma32_scalar_curvature(omega, psi, nu):
    M = R.sigma32_metric(MetricParams(1.0, nu))
    x = R.hemisphere_point(omega, psi)
    assert R.scalar(M, x) == pytest.approx(R.sigma32_scalar_mu1_closed(omega, nu), rel=1e-3)


def test_sigma32_scalar_published_sign_is_opposite():
    # regression: the expression as printed has the opposite overall sign
    M = R.sigma32_metric(MetricParams(1.0, 0.5))
    x = R.hemisphere_point(0.6, 1.0)
    numeric = R.scalar(M, x)
    literal = R.sigma32_scalar_mu1_closed(0.6, 0.5, literal=True)
    assert literal == pytest.approx(-R.sigma32_scalar_mu1_closed(0.6, 0.5))
    assert numeric == pytest.approx(-literal, rel=1e-6)
    assert abs(numeric - literal) > 1.0


def test_sigma32_scalar_sign_through_the_ambient_space():
    # independent route: curvature of Sigma^7 restricted to the totally geodesic Sigma^3_2
    P = MetricParams(1.0, 0.5)
    x = R.hemisphere_point(0.6, 1.0)
    x[2] = 0.3
    rm, g = R.ambient_curvature(P, R.sigma32_chart, x)
    assert R.scalar_from(rm, g) == pytest.approx(R.sigma32_scalar_mu1_closed(0.6, 0.5), rel=1e-3)


def test_sigma31_intrinsic_equals_ambient():
    P = MetricParams(0.7, 1.2)
    x = np.array([0.9, 1.0, 0.4])
    M = R.induced_chart_metric(P, R.sigma31_chart, 3)
    rm, g = R.ambient_curvature(P, R.sigma31_chart, x)
    assert R.scalar_from(rm, g) == pytest.approx(R.scalar(M, x), rel=1e-3)


def test_sigma2_is_not_totally_geodesic_in_sigma7():
    # ambient and intrinsic curvature differ where the surface bends inside Sigma^7
    x = np.array([0.5, 0.3])
    rm, g = R.ambient_curvature(HALF, R.sigma2_chart, x)
    ambient = rm[0, 1, 1, 0] / np.linalg.det(g)
    intrinsic = R.gauss_curvature(R.sigma2_metric(HALF), x)
    assert abs(ambient - intrinsic) / abs(intrinsic) > 1e-3


def test_sigma32_extremes_at_biinvariant_metric():
    lo, hi, _, _ = R.min_max_sectional(R.sigma32_metric(HALF), R.sigma32_grid(12))
    assert lo == pytest.approx(R.sigma32_min_k_closed(HALF), rel=2e-2)
    assert lo == pytest.approx(0.1, rel=2e-2)
    assert lo / hi == pytest.approx(1 / 145, rel=2e-2)


def test_min_k_formula_is_not_the_minimum_everywhere():
    # documented discrepancy: for (mu, nu) = (1/2, 0.8) the sampled minimum lies
    # well below the closed form, although both are positive
    P = MetricParams(0.5, 0.8)
    lo, _, _, _ = R.min_max_sectional(R.sigma32_metric(P), R.sigma32_grid(12))
    closed = R.sigma32_min_k_closed(P)
    assert closed == pytest.approx(1 / 7)
    assert 0 < lo < 0.5 * closed


@pytest.mark.parametrize("mu,nu", [(0.25, 0.25), (0.25, 1.0), (0.5, 1.0), (1.0, 1.0)])
def test_nonnegativity_frontier(mu, nu):
    P = MetricParams(mu, nu)
    lo, _, _, _ = R.min_max_sectional(R.sigma32_metric(P), R.sigma32_grid(10))
    assert (lo >= 0) == (R.nonnegativity_frontier(P) >= 0)


def test_sigma32_deck_is_an_isometry():
    for P in (HALF, MetricParams(2.0, 0.3)):
        for x in ([0.4, 0.9, 0.2], [2.2, 2.5, 1.0]):
            assert R.sigma32_deck_residual(x, P) < 1e-12


def test_sigma32_phi_is_killing():
    M = R.sigma32_metric(MetricParams(0.6, 1.4))
    assert R.killing_residual(M, [0.8, 1.2, 0.3], 2) < 1e-9


@given(st.floats(0.05, 1.4), st.floats(0.3, 2.8), st.floats(0.3, 2.0))
def test_hemisphere_curvature(omega, psi, mu):
    H = R.hemisphere_metric(MetricParams(mu, 0.7))
    k = R.gauss_curvature(H, R.hemisphere_point(omega, psi)[:2])
    assert k == pytest.approx(R.hemisphere_curvature_closed(omega, mu), rel=1e-3)


def test_hemisphere_constant_only_for_mu_one():
    values = {mu: [R.hemisphere_curvature_closed(om, mu) for om in np.linspace(0, 1.5, 7)] for mu in (1.0, 0.5)}
    assert np.ptp(values[1.0]) == 0.0
    assert np.ptp(values[0.5]) > 0.1


def test_berger_metrics():
    for P in (HALF, MetricParams(2.0, 0.7)):
        for entry in R.berger_verifications(P):
            assert entry.rel_error < 1e-3, entry.name


def test_l3_constant_curvature_one():
    P = MetricParams(1.0, 0.5)
    assert R.l3_extremes_closed(P) == pytest.approx((1.0, 1.0))
    M = R.metric_by_id("l3", P)
    x = R.BERGER_POINTS[1]
    assert R.sectional_extremes_at(R.riemann_tensor(M, x), M(x)) == pytest.approx((1.0, 1.0), rel=1e-6)


def test_metric_ids():
    for name in R.METRIC_IDS:
        assert R.metric_by_id(name, HALF).dimension in (2, 3)
    with pytest.raises(KeyError):
        R.metric_by_id("s7", HALF)
