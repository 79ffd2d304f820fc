"""Finite-difference curvature of coordinate-chart metrics, and the metrics of
the fixed point sets of isometries of the Gromoll-Meyer sphere.

A ``ChartMetric`` maps chart coordinates to a symmetric positive-definite
matrix.  Derivatives of the components are central differences refined by one
Richardson pass, so the curvature needs nothing but metric evaluations.

Tensor convention: ``Rm[a, b, c, d] = <R(e_a, e_b) e_c, e_d>`` with
``R(X, Y) = [nabla_X, nabla_Y] - nabla_[X, Y]``; the sectional curvature of
span{u, v} is ``Rm(u, v, v, u) / (|u|^2 |v|^2 - <u, v>^2)``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Callable, Sequence

import numpy as np
from scipy.optimize import minimize

from scipy.linalg import null_space

from . import sp2
from .sp2 import MetricParams


class DomainError(ValueError):
    """Chart point too close to a coordinate degeneracy."""


@dataclass(frozen=True)
class ChartMetric:
    dimension: int
    components: Callable[[np.ndarray], np.ndarray]
    domain: Callable[[np.ndarray], bool] = field(default=lambda x: True)
    name: str = "metric"

    def __call__(self, x) -> np.ndarray:
        g = np.asarray(self.components(np.asarray(x, dtype=float)), dtype=float)
        return 0.5 * (g + g.T)

    def check_point(self, x, margin: float = 0.0):
        x = np.asarray(x, dtype=float)
        if margin == 0.0:
            ok = self.domain(x)
        else:
            ok = all(
                self.domain(x + s * margin * e)
                for e in np.eye(self.dimension)
                for s in (-1.0, 1.0)
            ) and self.domain(x)
        if not ok:
            raise DomainError(f"{self.name}: point {x} is outside the chart domain")


@dataclass(frozen=True)
class CurvatureReport:
    point: tuple
    k_min: float
    k_max: float
    scalar: float
    step: float
    richardson: int = 1


FIRST_STEP = 1e-4
SECOND_STEP = 1e-3


def _richardson(f: Callable[[float], np.ndarray], h: float) -> np.ndarray:
    """Second-order central differences: one Richardson pass."""
    return (4.0 * f(0.5 * h) - f(h)) / 3.0


def metric_first_derivatives(M: ChartMetric, x, h: float = FIRST_STEP) -> np.ndarray:
    """dg[k, i, j] = d_k g_ij."""
    x = np.asarray(x, dtype=float)
    n = M.dimension
    out = np.empty((n, n, n))
    for k in range(n):
        e = np.zeros(n)
        e[k] = 1.0

        def d(step, e=e):
            return (M(x + step * e) - M(x - step * e)) / (2 * step)

        out[k] = _richardson(d, h)
    return out


def metric_second_derivatives(M: ChartMetric, x, h: float = SECOND_STEP) -> np.ndarray:
    """ddg[k, l, i, j] = d_k d_l g_ij."""
    x = np.asarray(x, dtype=float)
    n = M.dimension
    eye = np.eye(n)
    out = np.empty((n, n, n, n))
    g0 = M(x)
    for k in range(n):
        def dkk(step, k=k):
            return (M(x + step * eye[k]) - 2 * g0 + M(x - step * eye[k])) / step**2

        out[k, k] = _richardson(dkk, h)
    for k, l in combinations(range(n), 2):
        def dkl(step, k=k, l=l):
            ek, el = step * eye[k], step * eye[l]
            return (M(x + ek + el) - M(x + ek - el) - M(x - ek + el) + M(x - ek - el)) / (4 * step**2)

        out[k, l] = out[l, k] = _richardson(dkl, h)
    return out


def _christoffel_from(g: np.ndarray, dg: np.ndarray) -> np.ndarray:
    ginv = np.linalg.inv(g)
    # lowered: G[l, i, j] = (d_i g_jl + d_j g_il - d_l g_ij) / 2
    lowered = 0.5 * (
        np.einsum("ijl->lij", dg) + np.einsum("jil->lij", dg) - dg
    )
    return np.einsum("kl,lij->kij", ginv, lowered)


def christoffel(M: ChartMetric, x, h: float = FIRST_STEP) -> np.ndarray:
    """Gamma[k, i, j] = Gamma^k_ij."""
    M.check_point(x, margin=2 * h)
    return _christoffel_from(M(x), metric_first_derivatives(M, x, h))


def riemann_tensor(M: ChartMetric, x, h: float = SECOND_STEP, h1: float = FIRST_STEP) -> np.ndarray:
    """Rm[a, b, c, d] = <R(e_a, e_b) e_c, e_d>."""
    M.check_point(x, margin=2 * h)
    g = M(x)
    dg = metric_first_derivatives(M, x, h1)
    ddg = metric_second_derivatives(M, x, h)
    gam = _christoffel_from(g, dg)
    # classical all-lower form R_{iklm} with K = R_{1212} / det
    second = 0.5 * (
        np.einsum("klim->iklm", ddg)
        + np.einsum("imkl->iklm", ddg)
        - np.einsum("kmil->iklm", ddg)
        - np.einsum("ilkm->iklm", ddg)
    )
    quad = np.einsum("np,nkl,pim->iklm", g, gam, gam) - np.einsum("np,nkm,pil->iklm", g, gam, gam)
    r_lower = second + quad
    # R_{iklm} = <R(e_l, e_m) e_k, e_i>;  Rm[a,b,c,d] = <R(e_a,e_b)e_c,e_d> = R_{d c a b}
    return np.einsum("dcab->abcd", r_lower)


def sectional_from(rm: np.ndarray, g: np.ndarray, u, v) -> float:
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    area = (u @ g @ u) * (v @ g @ v) - (u @ g @ v) ** 2
    if area <= 1e-14 * max(1.0, (u @ g @ u) * (v @ g @ v)):
        raise ValueError("tangent plane is degenerate")
    return float(np.einsum("abcd,a,b,c,d->", rm, u, v, v, u) / area)


def sectional(M: ChartMetric, x, u, v, h: float = SECOND_STEP) -> float:
    return sectional_from(riemann_tensor(M, x, h), M(x), u, v)


def ricci_from(rm: np.ndarray, g: np.ndarray) -> np.ndarray:
    ginv = np.linalg.inv(g)
    # Ric(b, c) = sum_{a,d} g^{ad} <R(e_a, e_b) e_c, e_d>
    return np.einsum("ad,abcd->bc", ginv, rm)


def scalar_from(rm: np.ndarray, g: np.ndarray) -> float:
    return float(np.einsum("bc,bc->", np.linalg.inv(g), ricci_from(rm, g)))


def scalar(M: ChartMetric, x, h: float = SECOND_STEP) -> float:
    return scalar_from(riemann_tensor(M, x, h), M(x))


def bianchi_residual(rm: np.ndarray) -> float:
    cyc = rm + np.einsum("abcd->bcad", rm) + np.einsum("abcd->cabd", rm)
    return float(np.abs(cyc).max())


def sectional_extremes_at(rm: np.ndarray, g: np.ndarray, samples: int = 0,
                          rng: np.random.Generator | None = None) -> tuple[float, float]:
    """Min and max sectional curvature over all planes at one point.

    Dimensions 2 and 3 are exact: every bivector is decomposable, so the
    extremes are generalized eigenvalues of the curvature operator on the
    exterior square.  Higher dimensions fall back to random planes.
    """
    n = g.shape[0]
    if n == 2:
        k = rm[0, 1, 1, 0] / np.linalg.det(g)
        return float(k), float(k)
    if n == 3:
        pairs = [(0, 1), (0, 2), (1, 2)]
        op = np.empty((3, 3))
        gram = np.empty((3, 3))
        for r, (a, b) in enumerate(pairs):
            for c, (d, e) in enumerate(pairs):
                op[r, c] = rm[a, b, e, d]
                gram[r, c] = g[a, d] * g[b, e] - g[a, e] * g[b, d]
        from scipy.linalg import eigh

        vals = eigh(0.5 * (op + op.T), gram, eigvals_only=True)
        return float(vals[0]), float(vals[-1])
    rng = rng or np.random.default_rng(0)
    ks = []
    for _ in range(max(samples, 200)):
        u, v = rng.normal(size=(2, n))
        ks.append(sectional_from(rm, g, u, v))
    return min(ks), max(ks)


def curvature_report(M: ChartMetric, x, h: float = SECOND_STEP) -> CurvatureReport:
    rm = riemann_tensor(M, x, h)
    g = M(x)
    lo, hi = sectional_extremes_at(rm, g)
    return CurvatureReport(tuple(float(c) for c in x), lo, hi, scalar_from(rm, g), h)


def min_max_sectional(M: ChartMetric, grid: Sequence, refine: bool = True,
                      h: float = SECOND_STEP) -> tuple[float, float, np.ndarray, np.ndarray]:
    """Extremes of the sectional curvature over grid points and all planes.

    The best grid points are refined with Nelder-Mead, restricted to points
    inside the domain.  Returns (min, max, argmin, argmax).
    """
    pts = [np.asarray(p, dtype=float) for p in grid]
    lows, highs = [], []
    for p in pts:
        lo, hi = sectional_extremes_at(riemann_tensor(M, p, h), M(p))
        lows.append(lo)
        highs.append(hi)
    i_lo, i_hi = int(np.argmin(lows)), int(np.argmax(highs))
    best_lo, best_hi = (lows[i_lo], pts[i_lo]), (highs[i_hi], pts[i_hi])
    if refine:
        margin = 2.5 * h

        def safe(sign):
            def f(x):
                try:
                    M.check_point(x, margin=margin)
                except DomainError:
                    return np.inf
                lo, hi = sectional_extremes_at(riemann_tensor(M, x, h), M(x))
                return lo if sign > 0 else -hi
            return f

        for sign, (val, x0) in ((1, best_lo), (-1, best_hi)):
            res = minimize(safe(sign), x0, method="Nelder-Mead",
                           options={"xatol": 1e-6, "fatol": 1e-9, "maxiter": 400})
            if np.isfinite(res.fun):
                cand = float(res.fun) if sign > 0 else -float(res.fun)
                if sign > 0 and cand < best_lo[0]:
                    best_lo = (cand, res.x)
                if sign < 0 and cand > best_hi[0]:
                    best_hi = (cand, res.x)
    return best_lo[0], best_hi[0], best_lo[1], best_hi[1]


def orbit_space_metric(M: ChartMetric, killing_index: int) -> ChartMetric:
    """Quotient by a Killing coordinate: h = g - g_{.k} g_{k.} / g_kk."""
    n = M.dimension
    keep = [i for i in range(n) if i != killing_index]

    def comps(y):
        x = np.insert(np.asarray(y, dtype=float), killing_index, 0.0)
        g = M(x)
        gkk = g[killing_index, killing_index]
        if gkk <= 0:
            raise ValueError("Killing direction has nonpositive length")
        col = g[keep, killing_index]
        return g[np.ix_(keep, keep)] - np.outer(col, col) / gkk

    def dom(y):
        return M.domain(np.insert(np.asarray(y, dtype=float), killing_index, 0.0))

    return ChartMetric(n - 1, comps, dom, name=f"{M.name}/killing{killing_index}")


def killing_residual(M: ChartMetric, x, index: int, h: float = FIRST_STEP) -> float:
    return float(np.abs(metric_first_derivatives(M, x, h)[index]).max())


# ---------------------------------------------------------------------------
# model metrics used as oracles


def euclidean(n: int) -> ChartMetric:
    return ChartMetric(n, lambda x: np.eye(n), name=f"euclidean{n}")


def round_sphere2() -> ChartMetric:
    return ChartMetric(2, lambda x: np.diag([1.0, np.sin(x[0]) ** 2]),
                       lambda x: 0 < x[0] < np.pi, name="round_s2")


def round_sphere3() -> ChartMetric:
    """Hopf-type coordinates (eta, x1, x2): d eta^2 + sin^2 dx1^2 + cos^2 dx2^2."""
    return ChartMetric(
        3, lambda x: np.diag([1.0, np.sin(x[0]) ** 2, np.cos(x[0]) ** 2]),
        lambda x: 0 < x[0] < np.pi / 2, name="round_s3",
    )


def hyperbolic_plane() -> ChartMetric:
    return ChartMetric(2, lambda x: np.eye(2) / x[1] ** 2, lambda x: x[1] > 0, name="hyperbolic")


def product(a: ChartMetric, b: ChartMetric) -> ChartMetric:
    n = a.dimension + b.dimension

    def comps(x):
        g = np.zeros((n, n))
        g[: a.dimension, : a.dimension] = a(x[: a.dimension])
        g[a.dimension:, a.dimension:] = b(x[a.dimension:])
        return g

    return ChartMetric(n, comps, lambda x: a.domain(x[: a.dimension]) and b.domain(x[a.dimension:]),
                       name=f"{a.name}x{b.name}")


# ---------------------------------------------------------------------------
# Sigma^2


def c_function(s, P: MetricParams):
    sn2 = np.sin(s) ** 2
    top = 4 * (1 - (1 - P.mu) * sn2) * sn2
    return P.nu * top / (P.nu * np.cos(2 * s) ** 2 + top)


def sigma2_metric(P: MetricParams) -> ChartMetric:
    """ds^2 + c(s)/4 dphi^2 on (0, pi) x S^1."""
    return ChartMetric(
        2, lambda x: np.diag([1.0, 0.25 * c_function(x[0], P)]),
        lambda x: 0 < x[0] < np.pi, name="sigma2",
    )


def sigma2_curvature_closed(P: MetricParams) -> dict[str, float]:
    mu, nu = P.mu, P.nu
    return {
        "s=0": 12 / nu - 8 - 3 * mu,
        "s=pi/4": 4 * nu / (1 + mu),
        "s=pi/2": -nu * (1 + 2 * mu) / (mu * (4 * mu + nu)),
    }


def gauss_curvature(M: ChartMetric, x, h: float = SECOND_STEP) -> float:
    if M.dimension != 2:
        raise ValueError("Gauss curvature needs a surface")
    rm = riemann_tensor(M, x, h)
    return float(rm[0, 1, 1, 0] / np.linalg.det(M(x)))


def sigma2_curvature_at_pole(P: MetricParams, s0: float = 0.02) -> float:
    """K at s = 0, extrapolated from s0 and 2 s0 (K is even in s)."""
    M = sigma2_metric(P)
    k1 = gauss_curvature(M, [s0, 0.0])
    k2 = gauss_curvature(M, [2 * s0, 0.0])
    return (4 * k1 - k2) / 3


def sigma2_curvature_numeric(P: MetricParams) -> dict[str, float]:
    M = sigma2_metric(P)
    return {
        "s=0": sigma2_curvature_at_pole(P),
        "s=pi/4": gauss_curvature(M, [np.pi / 4, 0.0]),
        "s=pi/2": gauss_curvature(M, [np.pi / 2, 0.0]),
    }


# ---------------------------------------------------------------------------
# Sigma^3_1


def sigma31_warp(t, P: MetricParams):
    """Squared warp function of the S^2 factor (before the overall factor mu)."""
    st2 = np.sin(t) ** 2
    return P.nu * st2 / (P.nu + 4 * P.mu * st2)


def sigma31_metric(P: MetricParams) -> ChartMetric:
    """mu (dt^2 + f(t) (da^2 + sin^2 a db^2)) on (0, pi) x S^2."""
    def comps(x):
        t, a, _ = x
        f = sigma31_warp(t, P)
        return P.mu * np.diag([1.0, f, f * np.sin(a) ** 2])

    return ChartMetric(3, comps, lambda x: 0 < x[0] < np.pi and 0 < x[1] < np.pi, name="sigma31")


def sigma31_bounds(P: MetricParams) -> tuple[float, float]:
    mu, nu = P.mu, P.nu
    return nu / (mu * (4 * mu + nu)), (12 * mu + nu) / (mu * nu)


# ---------------------------------------------------------------------------
# Sigma^3_2


def _sigma32_parts(t, th, P: MetricParams):
    st2 = np.sin(t) ** 2
    sth = np.sin(th)
    x = st2 * sth**2
    m = 1 - P.mu
    d = 4 * (1 - m * x) * x + P.nu * (1 - 2 * x) ** 2
    return st2, sth, x, m, d


def sigma32_components(x, P: MetricParams) -> np.ndarray:
    t, th, _ = x
    mu, nu = P.mu, P.nu
    st2, sth, X, m, D = _sigma32_parts(t, th, P)
    cth = np.cos(th)
    s2t = np.sin(2 * t)
    g11 = 1 - m * (4 * X + nu * (1 - 2 * X) ** 2) * cth**2 / D
    g22 = st2 + st2 * sth**2 / D * (
        nu * sth**2 * (2 * t - s2t) ** 2
        - m * ((nu + 4 * X) * np.cos(t) ** 2 + 2 * t * nu * sth**2 * (2 * t * X - s2t))
    )
    g33 = nu * X * (1 - m * X) / D
    g23 = nu * st2 * sth**3 * (2 * t - s2t + 0.5 * m * (s2t - 4 * t * X)) / D
    g13 = -nu * m * X * cth * (1 - 2 * X) / D
    g12 = m / (4 * D) * np.sin(2 * th) * (
        4 * s2t * X - nu * (1 - 2 * X) * (4 * t * X - s2t)
    )
    return np.array([[g11, g12, g13], [g12, g22, g23], [g13, g23, g33]])


def sigma32_components_mu1(x, nu: float) -> np.ndarray:
    """Rank-one-update form valid for mu = 1."""
    t, th, _ = x
    st2 = np.sin(t) ** 2
    X = st2 * np.sin(th) ** 2
    coef = nu * X / (4 * X + nu * (1 - 2 * X) ** 2)
    v = np.array([0.0, (2 * t - np.sin(2 * t)) * np.sin(th), 1.0])
    return np.diag([1.0, st2, 0.0]) + coef * np.outer(v, v)


SIGMA32_MARGIN = 1e-2


def _sigma32_domain(x) -> bool:
    t, th, _ = x
    return abs(np.sin(t) * np.sin(th)) > SIGMA32_MARGIN * 0.5 and 0 < t < np.pi and 0 < th < np.pi


def sigma32_metric(P: MetricParams) -> ChartMetric:
    return ChartMetric(3, lambda x: sigma32_components(x, P), _sigma32_domain, name="sigma32")


def sigma32_deck(x) -> tuple[np.ndarray, np.ndarray]:
    """(t, theta, phi) -> (pi - t, theta + pi, phi - 2 pi cos theta) and its Jacobian."""
    t, th, ph = x
    y = np.array([np.pi - t, th + np.pi, ph - 2 * np.pi * np.cos(th)])
    jac = np.array([[-1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 2 * np.pi * np.sin(th), 1.0]])
    return y, jac


def sigma32_deck_residual(x, P: MetricParams) -> float:
    """|J^T g(F(x)) J - g(x)| for the deck map F.

    The image has sin(theta) < 0, outside the (0, pi) chart; the component
    formulas are evaluated there directly.
    """
    y, jac = sigma32_deck(x)
    return float(np.abs(jac.T @ sigma32_components(y, P) @ jac - sigma32_components(x, P)).max())


def omega_of(t, th):
    """Polar angle of the orbit-space hemisphere: cos(omega) = sin(theta) sin(t)."""
    return np.arccos(np.clip(np.sin(th) * np.sin(t), -1.0, 1.0))


def sigma32_scalar_mu1_closed(omega, nu: float, literal: bool = False) -> float:
    """Scalar curvature of Sigma^3_2 at mu = 1 as a function of omega.

    The published expression carries the opposite overall sign; both the
    chart metric and the ambient route through Sigma^7 give this one.
    ``literal=True`` returns the published sign.
    """
    c2, c4, c6 = np.cos(2 * omega), np.cos(4 * omega), np.cos(6 * omega)
    num = 4 * (-12 + 4 * nu + 9 * nu**2 + 2 * (21 * nu - 8) * c2 + (9 * nu**2 + 16 * nu - 4) * c4 + 2 * nu * c6)
    den = (4 + nu + 4 * c2 + nu * c4) ** 2
    value = float(num / den)
    return value if literal else -value


def sigma32_min_k_closed(P: MetricParams) -> float:
    mu, nu = P.mu, P.nu
    return min(mu * nu / (4 * mu + nu), (12 - 8 * (mu + nu) - 3 * mu * nu) / (4 * mu + nu))


def nonnegativity_frontier(P: MetricParams) -> float:
    """12 - 8(mu + nu) - 3 mu nu; Sigma^3_2 has K >= 0 iff this is >= 0 (mu, nu <= 1)."""
    return 12 - 8 * (P.mu + P.nu) - 3 * P.mu * P.nu


def hemisphere_point(omega, psi) -> np.ndarray:
    """(t, theta, 0) for polar hemisphere coordinates (omega, psi)."""
    so, co = np.sin(omega), np.cos(omega)
    t = np.arccos(np.clip(so * np.cos(psi), -1.0, 1.0))
    theta = np.arctan2(co, so * np.sin(psi))
    return np.array([t, theta, 0.0])


def sigma32_grid(n: int = 20, margin: float = SIGMA32_MARGIN, n_psi: int = 3) -> list[np.ndarray]:
    """Polar grid on the orbit hemisphere, omega up to the boundary margin.

    phi is a Killing coordinate, so it is fixed at 0.  cos(omega) >= 2 margin
    keeps every finite-difference stencil inside the chart.
    """
    top = np.arccos(2 * margin)
    out = []
    for om in np.linspace(0.0, top, n):
        for ps in np.linspace(0.3, np.pi - 0.3, n_psi):
            x = hemisphere_point(om, ps)
            if 0 < x[0] < np.pi and 0 < x[1] < np.pi:
                out.append(x)
    return out


def hemisphere_metric(P: MetricParams) -> ChartMetric:
    return orbit_space_metric(sigma32_metric(P), 2)


def hemisphere_curvature_closed(omega, mu: float) -> float:
    c2 = np.cos(omega) ** 2
    return float(mu * (1 + 2 * (1 - mu) * c2) / (1 - (1 - mu) * c2) ** 2)


# ---------------------------------------------------------------------------
# Berger spheres


def berger_metric(a: float, b: float) -> ChartMetric:
    """Left-invariant metric on S^3 with horizontal circles of length 2 pi a and
    Hopf circles of length 2 pi b, in the chart q = e^{i x1} e^{j x2} e^{i x3}.

    The left-invariant coframe (conj(q) dq) has components
    i: dx3 + cos(2 x2) dx1, j: cos(2 x3) dx2 + sin(2 x3) sin(2 x2) dx1,
    k: -sin(2 x3) dx2 + cos(2 x3) sin(2 x2) dx1.
    """
    def comps(x):
        _, x2, x3 = x
        c = np.array([
            [np.cos(2 * x2), 0.0, 1.0],
            [np.sin(2 * x3) * np.sin(2 * x2), np.cos(2 * x3), 0.0],
            [np.cos(2 * x3) * np.sin(2 * x2), -np.sin(2 * x3), 0.0],
        ])
        w = np.diag([b * b, a * a, a * a])
        return c.T @ w @ c

    return ChartMetric(3, comps, lambda x: abs(np.sin(2 * x[1])) > 1e-3, name="berger")


def berger_extremes(a: float, b: float) -> tuple[float, float]:
    """Classical extremes b^2/a^4 and (4 - 3 b^2/a^2)/a^2, sorted."""
    k1 = b * b / a**4
    k2 = (4 - 3 * b * b / (a * a)) / (a * a)
    return min(k1, k2), max(k1, k2)


def berger_parameters(P: MetricParams) -> dict[str, tuple[float, float]]:
    """(a, b) of the Berger metrics on Sigma^3_0, L^3 and P^3."""
    mu, nu = P.mu, P.nu
    return {
        "sigma30": (1.0, np.sqrt(mu)),
        "l3": (1.0, np.sqrt(9 * mu * nu / (4 * mu + nu))),
        "p3": (np.sqrt(nu), np.sqrt(4 * mu * nu / (4 * mu + nu))),
    }


def l3_extremes_closed(P: MetricParams) -> tuple[float, float]:
    k = 9 * P.mu * P.nu / (4 * P.mu + P.nu)
    return tuple(sorted((k, 4 - 3 * k)))


@dataclass(frozen=True)
class BergerEntry:
    name: str
    a: float
    b: float
    classical: tuple[float, float]
    numeric: tuple[float, float]

    @property
    def rel_error(self) -> float:
        return max(abs(n - c) / max(abs(c), 1e-12) for n, c in zip(self.numeric, self.classical))


BERGER_POINTS = [np.array([0.3, 0.5, 0.2]), np.array([1.1, 0.35, 1.4]), np.array([2.0, 0.7, -0.6])]


def berger_verifications(P: MetricParams) -> list[BergerEntry]:
    out = []
    for name, (a, b) in berger_parameters(P).items():
        M = berger_metric(a, b)
        lows, highs = [], []
        for x in BERGER_POINTS:
            lo, hi = sectional_extremes_at(riemann_tensor(M, x), M(x))
            lows.append(lo)
            highs.append(hi)
        out.append(BergerEntry(name, a, b, berger_extremes(a, b), (min(lows), max(highs))))
    return out


# ---------------------------------------------------------------------------
# ambient route: curvature of Sigma^7 restricted to a totally geodesic chart


def sigma2_chart(x) -> np.ndarray:
    """(s, phi) -> alpha(s) diag(1, e^{-j phi / 2}) in Sp(2)."""
    s, ph = x
    return sp2.matmul(sp2.normal_geodesic_alpha(s), sp2.diag(1.0, np.array([np.cos(ph / 2), 0.0, -np.sin(ph / 2), 0.0])))


def sigma31_chart(x) -> np.ndarray:
    t, a, b = x
    p = np.array([np.cos(a), np.sin(a) * np.cos(b), np.sin(a) * np.sin(b)])
    return sp2.horizontal_lift(p, np.zeros(4), t)


def sigma32_chart(x) -> np.ndarray:
    t, th, ph = x
    p = np.array([0.0, np.cos(th), 0.0])
    w = np.sin(th) * np.array([0.0, np.cos(ph), 0.0, np.sin(ph)])
    return sp2.horizontal_lift(p, w, t)


def induced_chart_metric(P: MetricParams, chart, dimension: int, name: str = "induced") -> ChartMetric:
    """Metric pulled back from Sigma^7 through a chart into Sp(2)."""
    return ChartMetric(
        dimension, lambda x: sp2.induced_metric(P, chart(x), sp2.numeric_partials(chart, x, 1e-5)), name=name
    )


def ambient_curvature(P: MetricParams, chart, x, h: float = 2e-3) -> tuple[np.ndarray, np.ndarray]:
    """(Rm, g) of Sigma^7 restricted to the chart's tangent space at x.

    Sigma^7 is charted near a = chart(x) by y -> a exp(sum y_i H_i) with H_i a
    basis of the horizontal body vectors; the Riemann tensor of that 7-dim
    chart is contracted with the chart's tangent vectors.  This equals the
    intrinsic curvature only where the chart image is totally geodesic.
    """
    x = np.asarray(x, dtype=float)
    a = chart(x)
    basis = sp2.sp2_basis()
    verticals = [sp2.body(a, v) for v in sp2.star_vertical(a)]
    func = np.array([[float(sp2.inner_body(P, v, b)) for b in basis] for v in verticals])
    coeffs = null_space(func)
    hor = [sum(c * b for c, b in zip(col, basis)) for col in coeffs.T]

    def chart7(y):
        return sp2.matmul(a, sp2.mat_exp(sum(yi * hb for yi, hb in zip(y, hor))))

    ambient = ChartMetric(7, lambda y: sp2.induced_metric(P, chart7(y), sp2.numeric_partials(chart7, y, 1e-5)),
                          name="sigma7")
    rm7 = riemann_tensor(ambient, np.zeros(7), h=h)
    g7 = ambient(np.zeros(7))
    flat = np.array([hb.reshape(-1) for hb in hor]).T
    tangent = []
    for v in sp2.numeric_partials(chart, x):
        hb = sp2.body(a, sp2.horizontal_part(P, a, v))
        tangent.append(np.linalg.lstsq(flat, hb.reshape(-1), rcond=None)[0])
    T = np.array(tangent)
    return np.einsum("abcd,ia,jb,kc,ld->ijkl", rm7, T, T, T, T), T @ g7 @ T.T


METRIC_IDS = ("sigma2", "sigma31", "sigma32", "l3", "sigma30", "p3", "hemisphere")


def metric_by_id(metric_id: str, P: MetricParams) -> ChartMetric:
    if metric_id == "sigma2":
        return sigma2_metric(P)
    if metric_id == "sigma31":
        return sigma31_metric(P)
    if metric_id == "sigma32":
        return sigma32_metric(P)
    if metric_id == "hemisphere":
        return hemisphere_metric(P)
    if metric_id in ("l3", "sigma30", "p3"):
        return berger_metric(*berger_parameters(P)[metric_id])
    raise KeyError(metric_id)
