"""The group Sp(2) with the metrics <.,.>_{mu,nu}, its two S^3 actions and the
orbit space Sigma^7 of the star action.

Quaternionic matrices are float arrays of shape (..., 2, 2, 4); the last axis
holds quaternion components.  Tangent vectors are handled through their
bodies ``A^* V`` in the Lie algebra sp(2), where the metrics are defined by

    <X, Y> = Re(mu conj(x1) x2 + conj(y1) y2 + nu conj(z1) z2),
    X = [[x, -conj(y)], [y, z]].
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.linalg import expm

from . import algebra as alg
from .config import TOL

Matrix = np.ndarray
Curve = Callable[[float], Matrix]

I_Q, J_Q, K_Q = alg.basis(3, 1), alg.basis(3, 2), alg.basis(3, 3)
IMAG_UNITS = (I_Q, J_Q, K_Q)


# ---------------------------------------------------------------------------
# quaternionic matrix arithmetic


def mat(entries) -> Matrix:
    """Build a (2, 2, 4) matrix from nested entries (reals or length-4 arrays)."""
    out = np.zeros((2, 2, 4))
    for r in range(2):
        for c in range(2):
            e = np.asarray(entries[r][c], dtype=float)
            if e.ndim == 0:
                out[r, c, 0] = e
            else:
                out[r, c] = e
    return out


def matmul(a: Matrix, b: Matrix) -> Matrix:
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    prod = alg.qmul(a[..., :, :, None, :], b[..., None, :, :, :])
    return prod.sum(axis=-3)


def matmul_chain(*ms: Matrix) -> Matrix:
    out = ms[0]
    for m in ms[1:]:
        out = matmul(out, m)
    return out


def adjoint(a: Matrix) -> Matrix:
    """Conjugate transpose."""
    return alg.conj(np.swapaxes(np.asarray(a, dtype=float), -3, -2))


def diag(a, b) -> Matrix:
    return mat([[a, 0.0], [0.0, b]])


def offdiag(c) -> Matrix:
    """[[0, -conj(c)], [c, 0]] as an element of sp(2)."""
    c = np.asarray(c, dtype=float)
    if c.ndim == 0:
        c = c * alg.one(3)
    return mat([[0.0, -alg.conj(c)], [c, 0.0]])


def real_matrix(m) -> Matrix:
    """Embed a real 2x2 matrix."""
    m = np.asarray(m, dtype=float)
    out = np.zeros(m.shape + (4,))
    out[..., 0] = m
    return out


def left_scalar(q, a: Matrix) -> Matrix:
    return alg.qmul(q, a)


def right_scalar(a: Matrix, q) -> Matrix:
    return alg.qmul(a, q)


def identity() -> Matrix:
    return diag(1.0, 1.0)


def rotation(theta: float) -> np.ndarray:
    """Counterclockwise rotation D(theta) as a real 2x2 array."""
    c, s = np.cos(theta), np.sin(theta)
    return np.array([[c, -s], [s, c]])


REFLECTION = np.diag([1.0, -1.0])


def to_complex(a: Matrix) -> np.ndarray:
    """Complex 4x4 image of a quaternionic 2x2 matrix.

    A quaternion u + v j with u, v complex maps to [[u, v], [-conj(v), conj(u)]];
    the map is a real algebra homomorphism, so products and adjoints agree.
    """
    a = np.asarray(a, dtype=float)
    u = a[..., 0] + 1j * a[..., 1]
    v = a[..., 2] + 1j * a[..., 3]
    blocks = np.empty(a.shape[:-3] + (2, 2, 2, 2), dtype=complex)
    blocks[..., 0, 0] = u
    blocks[..., 0, 1] = v
    blocks[..., 1, 0] = -np.conj(v)
    blocks[..., 1, 1] = np.conj(u)
    # (row, col, r, c) -> (2 row + r, 2 col + c)
    return np.swapaxes(blocks, -3, -2).reshape(a.shape[:-3] + (4, 4))


def from_complex(m: np.ndarray) -> Matrix:
    m = np.asarray(m, dtype=complex)
    blocks = np.swapaxes(m.reshape(m.shape[:-2] + (2, 2, 2, 2)), -3, -2)
    u = blocks[..., 0, 0]
    v = blocks[..., 0, 1]
    return np.stack([u.real, u.imag, v.real, v.imag], axis=-1)


def mat_exp(x: Matrix) -> Matrix:
    """Matrix exponential through the complex representation."""
    return from_complex(expm(to_complex(x)))


def unitarity_residual(a: Matrix) -> float:
    return float(np.abs(matmul(adjoint(a), a) - identity()).max())


# ---------------------------------------------------------------------------
# the Lie algebra and the metrics


def sp2_basis() -> list[Matrix]:
    """Basis of sp(2), orthogonal for every <.,.>_{mu,nu}."""
    out = [diag(x, 0.0) for x in IMAG_UNITS]
    out += [diag(0.0, x) for x in IMAG_UNITS]
    out += [offdiag(alg.one(3))] + [offdiag(x) for x in IMAG_UNITS]
    return out


def in_sp2_residual(x: Matrix) -> float:
    """Distance of a body from the Lie algebra (X^* = -X)."""
    return float(np.abs(adjoint(x) + x).max())


def bracket(x: Matrix, y: Matrix) -> Matrix:
    return matmul(x, y) - matmul(y, x)


@dataclass(frozen=True)
class MetricParams:
    mu: float
    nu: float

    def __post_init__(self):
        if not (self.mu > 0 and self.nu > 0):
            raise ValueError("metric parameters must be positive")


BIINVARIANT = MetricParams(0.5, 0.5)


def inner_body(P: MetricParams, x: Matrix, y: Matrix):
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    return (
        P.mu * alg.dot(x[..., 0, 0, :], y[..., 0, 0, :])
        + alg.dot(x[..., 1, 0, :], y[..., 1, 0, :])
        + P.nu * alg.dot(x[..., 1, 1, :], y[..., 1, 1, :])
    )


def body(base: Matrix, v: Matrix) -> Matrix:
    """Left-translate an ambient tangent vector at ``base`` to sp(2)."""
    return matmul(adjoint(base), v)


def inner_at(P: MetricParams, base: Matrix, v: Matrix, w: Matrix):
    return inner_body(P, body(base, v), body(base, w))


@dataclass(frozen=True)
class SpElement:
    entries: np.ndarray

    def __post_init__(self):
        e = np.array(self.entries, dtype=float)
        if e.shape != (2, 2, 4):
            raise ValueError("SpElement needs a (2, 2, 4) array")
        if unitarity_residual(e) > TOL.unitarity:
            raise ValueError("matrix is not in Sp(2)")
        e.flags.writeable = False
        object.__setattr__(self, "entries", e)

    def __matmul__(self, other: "SpElement") -> "SpElement":
        return SpElement(matmul(self.entries, other.entries))


@dataclass(frozen=True)
class Sp2Tangent:
    base: SpElement
    body: np.ndarray

    def __post_init__(self):
        b = np.array(self.body, dtype=float)
        if b.shape != (2, 2, 4) or in_sp2_residual(b) > TOL.algebraic:
            raise ValueError("tangent body must lie in sp(2)")
        object.__setattr__(self, "body", b)


def metric_inner(P: MetricParams, u: Sp2Tangent, v: Sp2Tangent) -> float:
    if not np.array_equal(u.base.entries, v.base.entries):
        raise ValueError("tangent vectors live at different base points")
    return float(inner_body(P, u.body, v.body))


# ---------------------------------------------------------------------------
# the two actions and the orbit space


def _check_unit_q(q):
    if abs(float(alg.norm(q)) - 1.0) > TOL.unit_input:
        raise ValueError("acting quaternion must have unit norm")


def star_act(q, a: Matrix) -> Matrix:
    """q * A = q A diag(conj(q), 1)."""
    _check_unit_q(q)
    return matmul(left_scalar(q, a), diag(alg.conj(q), 1.0))


def bullet_act(b, q, a: Matrix) -> Matrix:
    """(B, q) . A = B A diag(1, conj(q)) with B real orthogonal."""
    _check_unit_q(q)
    b = np.asarray(b, dtype=float)
    if np.abs(b @ b.T - np.eye(2)).max() > TOL.unit_input:
        raise ValueError("B must be orthogonal")
    return matmul_chain(real_matrix(b), a, diag(1.0, alg.conj(q)))


def star_vertical(a: Matrix) -> list[Matrix]:
    """Ambient star-vertical Killing vectors x A - A diag(x, 0), x = i, j, k."""
    return [left_scalar(x, a) - matmul(a, diag(x, 0.0)) for x in IMAG_UNITS]


def bullet_vertical(a: Matrix) -> list[Matrix]:
    return [matmul(a, diag(0.0, -x)) for x in IMAG_UNITS]


def solve_star_q(x: Matrix, y: Matrix):
    """Unit q with q * x closest to y.

    The star action multiplies the second column by q on the left, and that
    column is a unit vector of H^2, so sum_r y_r1 conj(x_r1) recovers q on an
    orbit and is the least-squares fit otherwise.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    q = alg.qmul(y[0, 1], alg.conj(x[0, 1])) + alg.qmul(y[1, 1], alg.conj(x[1, 1]))
    n = float(alg.norm(q))
    return q / n if n > 1e-300 else alg.one(3)


def orbit_residual(x: Matrix, y: Matrix) -> float:
    """max-entry distance between q * x and y for the recovered q."""
    q = solve_star_q(x, y)
    return float(np.abs(star_act(q, x) - y).max())


def orbit_equal(x, y, tol: float = TOL.orbit) -> bool:
    x = x.rep if isinstance(x, Sigma7Point) else x
    y = y.rep if isinstance(y, Sigma7Point) else y
    return orbit_residual(x, y) < tol


@dataclass(frozen=True, eq=False)
class Sigma7Point:
    rep: np.ndarray

    def __eq__(self, other):
        if not isinstance(other, Sigma7Point):
            return NotImplemented
        return orbit_equal(self, other)

    __hash__ = None


# ---------------------------------------------------------------------------
# curves


def derivative(curve: Curve, t: float, h: float = 1e-6) -> Matrix:
    return (curve(t + h) - curve(t - h)) / (2.0 * h)


def body_velocity(curve: Curve, t: float, h: float = 1e-6) -> Matrix:
    return body(curve(t), derivative(curve, t, h))


def horizontal_lift(p, w, t: float) -> Matrix:
    """Horizontal lift through the identity of t -> cos t e1 + sin t (p, w).

    p is an imaginary quaternion (3 components), w a quaternion (4).
    """
    p = np.asarray(p, dtype=float)
    w = np.asarray(w, dtype=float)
    r = float(np.dot(p, p) + np.dot(w, w))
    if abs(r - 1.0) > TOL.unit_input:
        raise ValueError("need |p|^2 + |w|^2 = 1")
    nw = float(alg.norm(w))
    # for w -> 0 the lower right entry tends to 1 for every choice of u
    u = w / nw if nw > 1e-12 else alg.one(3)
    ub = alg.conj(u)
    pq = alg.embed(p)
    e = alg.sphere_exp(p, t)
    c, s = np.cos(t), np.sin(t)
    corner = alg.mul_chain(u, c * e - s * alg.qmul(pq, e), ub)
    return mat([[c * alg.one(3) + s * pq, -s * alg.qmul(e, alg.conj(w))], [s * w, corner]])


def lift_curve(p, w) -> Curve:
    return lambda t: horizontal_lift(p, w, t)


def horizontality_residual(curve: Curve, t: float, P: MetricParams, h: float = 1e-6) -> float:
    """max |<curve'(t), xi>| over the star-vertical Killing vectors xi."""
    a = curve(t)
    v = body(a, derivative(curve, t, h))
    return max(abs(float(inner_body(P, v, body(a, xi)))) for xi in star_vertical(a))


def lift_is_horizontal(p, w, t: float, P: MetricParams) -> float:
    return horizontality_residual(lift_curve(p, w), t, P)


def normal_geodesic_alpha(s: float) -> Matrix:
    c, sn = np.cos(s), np.sin(s)
    return mat([[c * J_Q, sn * K_Q], [sn * K_Q, c * J_Q]])


ALPHA_BODY = mat([[0.0, -I_Q], [-I_Q, 0.0]])


def euler_arnold_residual(curve: Curve, P: MetricParams, t: float, h: float = 1e-4) -> float:
    """max_i |d/dt <u, w_i> - <u, [u, w_i]>| over a basis of sp(2).

    u is the body velocity; both derivatives use central differences with
    step h.
    """
    def u_at(tau):
        return body_velocity(curve, tau, h)

    u = u_at(t)
    du = (u_at(t + h) - u_at(t - h)) / (2.0 * h)
    worst = 0.0
    for wb in sp2_basis():
        lhs = inner_body(P, du, wb)
        rhs = inner_body(P, u, bracket(u, wb))
        worst = max(worst, abs(float(lhs - rhs)))
    return worst


def one_parameter_curve(x: Matrix, base: Matrix | None = None) -> Curve:
    base = identity() if base is None else base
    return lambda t: matmul(base, mat_exp(t * np.asarray(x)))


# ---------------------------------------------------------------------------
# Killing fields along alpha and the metric matrix


def horizontal_part(P: MetricParams, a: Matrix, v: Matrix) -> Matrix:
    """Project an ambient vector at ``a`` orthogonally to the star-vertical space."""
    xis = star_vertical(a)
    vb = body(a, v)
    bodies = [body(a, xi) for xi in xis]
    gram = np.array([[inner_body(P, x, y) for y in bodies] for x in bodies])
    rhs = np.array([inner_body(P, x, vb) for x in bodies])
    coef = np.linalg.solve(gram, rhs)
    return v - sum(c * xi for c, xi in zip(coef, xis))


@dataclass(frozen=True)
class KillingFrame:
    s: float
    v_hat: list
    xi: list
    v_closed: list
    v_projected: list

    def max_disagreement(self) -> float:
        return max(float(np.abs(a - b).max()) for a, b in zip(self.v_closed, self.v_projected))


def xi_closed(s: float) -> list[Matrix]:
    """Closed forms of the star-vertical fields along alpha."""
    a = normal_geodesic_alpha(s)
    c2, s2 = np.cos(2 * s), np.sin(2 * s)
    bodies = [
        diag(-2 * I_Q, -I_Q),
        mat([[(c2 - 1) * J_Q, s2 * K_Q], [s2 * K_Q, c2 * J_Q]]),
        mat([[-(c2 + 1) * K_Q, s2 * J_Q], [s2 * J_Q, -c2 * K_Q]]),
    ]
    return [matmul(a, b) for b in bodies]


def v_hat(s: float) -> list[Matrix]:
    a = normal_geodesic_alpha(s)
    c2, s2 = np.cos(2 * s), np.sin(2 * s)
    b0 = mat([[s2 * I_Q, -c2], [c2, -s2 * I_Q]])
    return [matmul(a, b0)] + [matmul(a, diag(0.0, -x)) for x in IMAG_UNITS]


def _den(P: MetricParams, s: float, sq: float) -> float:
    return P.nu * np.cos(2 * s) ** 2 + 4 * (1 - (1 - P.mu) * sq) * sq


def v_tilde_closed(s: float, P: MetricParams, literal: bool = False) -> list[Matrix]:
    """Closed forms of the horizontal parts of the four Killing fields.

    The vertical correction in the last two fields carries the factor nu
    (projection coefficient nu cos 2s / den).  ``literal=True`` drops it, which
    only agrees with the projection when nu = 1; kept for regression tests.
    """
    mu, nu = P.mu, P.nu
    corr = 1.0 if literal else nu
    a = normal_geodesic_alpha(s)
    c2, s2 = np.cos(2 * s), np.sin(2 * s)
    d1 = diag(nu * I_Q, -2 * mu * I_Q)
    b0 = 3 * s2 / (4 * mu + nu) * d1 + c2 * offdiag(alg.one(3))
    b1 = 2 / (4 * mu + nu) * d1
    b2 = diag(0.0, -J_Q) + corr * c2 / _den(P, s, np.sin(s) ** 2) * mat(
        [[J_Q * (c2 - 1), K_Q * s2], [K_Q * s2, J_Q * c2]]
    )
    b3 = diag(0.0, -K_Q) + corr * c2 / _den(P, s, np.cos(s) ** 2) * mat(
        [[K_Q * (1 + c2), -J_Q * s2], [-J_Q * s2, K_Q * c2]]
    )
    return [matmul(a, b) for b in (b0, b1, b2, b3)]


def killing_fields_along_alpha(s: float, P: MetricParams) -> KillingFrame:
    a = normal_geodesic_alpha(s)
    vh = v_hat(s)
    return KillingFrame(
        s=s,
        v_hat=vh,
        xi=star_vertical(a),
        v_closed=v_tilde_closed(s, P),
        v_projected=[horizontal_part(P, a, v) for v in vh],
    )


def metric_matrix_closed(s: float, P: MetricParams) -> np.ndarray:
    mu, nu = P.mu, P.nu
    k = 4 * mu + nu
    s2 = np.sin(2 * s)
    sn2, cs2 = np.sin(s) ** 2, np.cos(s) ** 2
    a = 1 - (1 - 9 * mu * nu / k) * s2**2
    b = 6 * mu * nu / k * s2
    c = nu * 4 * (1 - (1 - mu) * sn2) * sn2 / _den(P, s, sn2)
    d = nu * 4 * (1 - (1 - mu) * cs2) * cs2 / _den(P, s, cs2)
    return np.array(
        [[a, b, 0, 0], [b, 4 * mu * nu / k, 0, 0], [0, 0, c, 0], [0, 0, 0, d]]
    )


def metric_matrix_direct(s: float, P: MetricParams) -> np.ndarray:
    a = normal_geodesic_alpha(s)
    vs = [horizontal_part(P, a, v) for v in v_hat(s)]
    return np.array([[float(inner_at(P, a, x, y)) for y in vs] for x in vs])


def metric_matrix(s: float, P: MetricParams, check: bool = True) -> np.ndarray:
    m = metric_matrix_closed(s, P)
    if check:
        gap = np.abs(m - metric_matrix_direct(s, P)).max()
        if gap > TOL.closed_form:
            raise ArithmeticError(f"metric matrix closed form disagrees by {gap:.3g}")
    return m


# ---------------------------------------------------------------------------
# distinguished subsets of Sigma^7


def _rep(x):
    return x.rep if isinstance(x, Sigma7Point) else np.asarray(x, dtype=float)


def in_sigma5(x, tol: float = TOL.orbit) -> bool:
    r = _rep(x)
    return abs(r[0, 0, 0]) < tol and abs(r[1, 0, 0]) < tol


def in_sigma6_pm1(x, tol: float = TOL.orbit) -> bool:
    return abs(_rep(x)[0, 0, 0]) < tol


def in_sigma1(x, tol: float = TOL.orbit) -> bool:
    """Orbits of real matrices: exactly those whose first column is real."""
    r = _rep(x)
    return float(np.abs(r[:, 0, 1:]).max()) < tol


def sigma1_witness(x) -> np.ndarray:
    """The O(2) matrix with the same first column as the representative."""
    r = _rep(x)
    c, s = r[0, 0, 0], r[1, 0, 0]
    return np.array([[c, -s], [s, c]])


def in_sigma3_0(x, tol: float = TOL.orbit) -> bool:
    """Membership in the projection of U(2): some q * rep has complex entries."""
    r = _rep(x)
    k = 0 if alg.norm(r[0, 1]) >= alg.norm(r[1, 1]) else 1
    c = r[k, 1]
    q = alg.conj(c) / alg.norm(c)
    return float(np.abs(star_act(q, r)[..., 2:]).max()) < tol


def wiedersehen_check(p, w, P: MetricParams | None = None) -> bool:
    if P is not None and P.mu != 1.0:
        raise ValueError("the return property needs mu = 1")
    at_pi = horizontal_lift(p, w, np.pi)
    at_2pi = horizontal_lift(p, w, 2 * np.pi)
    return orbit_equal(at_pi, -identity()) and orbit_equal(at_2pi, identity())


def wiedersehen_witness(p, w) -> Matrix:
    """-diag(1, u e^{pi p} conj(u)) with u = w/|w|."""
    w = np.asarray(w, dtype=float)
    u = w / alg.norm(w)
    return -diag(1.0, alg.mul_chain(u, alg.sphere_exp(p, np.pi), alg.conj(u)))


# ---------------------------------------------------------------------------
# the flat torus


TORUS_BASE = mat([[1.0, I_Q], [I_Q, 1.0]]) / np.sqrt(2.0)


def flat_torus(alpha: float, beta: float) -> Matrix:
    return matmul(TORUS_BASE, diag(alg.sphere_exp(I_Q[1:], alpha), alg.sphere_exp(J_Q[1:], beta)))


@dataclass(frozen=True)
class TorusReport:
    unitarity: float
    star_horizontal: float
    geodesic: float
    bullet_horizontal_beta: float


def flat_torus_checks(alpha: float, beta: float, P: MetricParams) -> TorusReport:
    ca = lambda t: flat_torus(t, beta)
    cb = lambda t: flat_torus(alpha, t)
    a = flat_torus(alpha, beta)
    star_res = max(horizontality_residual(ca, alpha, P), horizontality_residual(cb, beta, P))
    geo = max(euler_arnold_residual(ca, P, alpha), euler_arnold_residual(cb, P, beta))
    vb = body(a, derivative(cb, beta))
    bullet_res = max(abs(float(inner_at(P, a, matmul(a, vb), k))) for k in bullet_vertical(a))
    return TorusReport(unitarity_residual(a), star_res, geo, bullet_res)


# ---------------------------------------------------------------------------
# isometry and commutation properties


def action_isometry_residual(P: MetricParams, f: Callable[[Matrix], Matrix], a: Matrix,
                             x: Matrix, y: Matrix, h: float = 1e-6) -> float:
    """Compare <dF v, dF w> at F(a) with <v, w> at a for v = a x, w = a y."""
    def push(z):
        plus = f(matmul(a, mat_exp(h * z)))
        minus = f(matmul(a, mat_exp(-h * z)))
        return (plus - minus) / (2 * h)

    fa = f(a)
    before = inner_body(P, x, y)
    after = inner_at(P, fa, push(x), push(y))
    return abs(float(after - before))


def random_sp2(rng: np.random.Generator) -> Matrix:
    """Random element of Sp(2) from the exponential of a random algebra element."""
    coeff = rng.normal(size=10) * 2.0
    x = sum(c * b for c, b in zip(coeff, sp2_basis()))
    return mat_exp(x)


def random_unit_quaternion(rng: np.random.Generator):
    return alg.random_unit(rng, 3)


def random_sphere6(rng: np.random.Generator):
    """(p, w) in Im H x H with |p|^2 + |w|^2 = 1."""
    v = rng.normal(size=7)
    v /= np.linalg.norm(v)
    return v[:3], v[3:]


def random_sphere5(rng: np.random.Generator):
    v = rng.normal(size=6)
    v /= np.linalg.norm(v)
    return v[:3], alg.embed(v[3:])


# ---------------------------------------------------------------------------
# fixed points of isometries on Sigma^7


def isometry_displacement(b, q, a: Matrix) -> float:
    return orbit_residual(bullet_act(b, q, a), a)


def fixed_point_search(b, q, rng: np.random.Generator, starts: int = 20,
                       tol: float = 1e-10) -> list[Matrix]:
    """Representatives of Sigma^7 points fixed by (b, q), found by least squares.

    Each start is a random element of Sp(2); the unknown is an sp(2) element
    Y moving the start to start exp(Y).
    """
    from scipy.optimize import least_squares

    basis = sp2_basis()
    found = []
    for _ in range(starts):
        a0 = random_sp2(rng)

        def point(c):
            return matmul(a0, mat_exp(sum(ci * bi for ci, bi in zip(c, basis))))

        def resid(c):
            a = point(c)
            moved = bullet_act(b, q, a)
            qq = solve_star_q(a, moved)
            return (star_act(qq, a) - moved).ravel()

        sol = least_squares(resid, np.zeros(10), xtol=1e-15, ftol=1e-15, gtol=1e-15)
        a = point(sol.x)
        if isometry_displacement(b, q, a) < tol:
            found.append(a)
    return found


# ---------------------------------------------------------------------------
# charts into Sp(2) and induced metrics on Sigma^7


def induced_metric(P: MetricParams, a: Matrix, partials: list[Matrix]) -> np.ndarray:
    """Gram matrix of the horizontal parts of chart partial derivatives."""
    hs = [horizontal_part(P, a, v) for v in partials]
    n = len(hs)
    g = np.empty((n, n))
    for i in range(n):
        for j in range(i, n):
            g[i, j] = g[j, i] = float(inner_at(P, a, hs[i], hs[j]))
    return g


def numeric_partials(chart: Callable[[np.ndarray], Matrix], x, h: float = 1e-6) -> list[Matrix]:
    x = np.asarray(x, dtype=float)
    out = []
    for k in range(x.size):
        e = np.zeros_like(x)
        e[k] = h
        out.append((chart(x + e) - chart(x - e)) / (2 * h))
    return out


def sigma5_chart(x) -> Matrix:
    """(s, theta, y) -> D(theta) alpha(s) diag(1, E(y)), E(y) = e^{-y1 i} e^{-y2 j} e^{-y3 k}."""
    s, theta, y1, y2, y3 = x
    e = alg.mul_chain(
        alg.sphere_exp(-y1 * I_Q[1:]), alg.sphere_exp(-y2 * J_Q[1:]), alg.sphere_exp(-y3 * K_Q[1:])
    )
    return matmul_chain(real_matrix(rotation(theta)), normal_geodesic_alpha(s), diag(1.0, e))


def sigma5_chart_partials(x) -> list[Matrix]:
    """Exact partial derivatives of ``sigma5_chart``."""
    s, theta, y1, y2, y3 = x
    d = real_matrix(rotation(theta))
    dd = real_matrix(rotation(theta + np.pi / 2))
    al = normal_geodesic_alpha(s)
    dal = matmul(al, ALPHA_BODY)
    e1 = alg.sphere_exp(-y1 * I_Q[1:])
    e2 = alg.sphere_exp(-y2 * J_Q[1:])
    e3 = alg.sphere_exp(-y3 * K_Q[1:])
    e = alg.mul_chain(e1, e2, e3)
    de = [
        alg.qmul(-I_Q, e),
        alg.mul_chain(e1, -J_Q, e2, e3),
        alg.qmul(e, -K_Q),
    ]
    right = diag(1.0, e)
    out = [matmul_chain(d, dal, right), matmul_chain(dd, al, right)]
    out += [matmul_chain(d, al, diag(0.0, x)) for x in de]
    return out


def sigma5_metric(P: MetricParams):
    def g(x):
        return induced_metric(P, sigma5_chart(x), sigma5_chart_partials(x))
    return g
