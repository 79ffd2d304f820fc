"""Nonlinear O(2) actions on S^5 and S^13 and their identification with the
linear Brieskorn actions.

Points are ``SpherePair``s (p, w) of imaginary quaternions (n = 3) or
imaginary octonions (n = 7).  The rotation by theta is

    (p, w) -> Q (p_theta, w_theta) conj(Q),   Q = Q((p, w), theta),

with (p_theta, w_theta) = (p cos - w sin, p sin + w cos).  All factors of Q lie
in the subalgebra generated by p and w, which is associative for octonions
too, so bracketing never matters.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import orthogonal_procrustes

from . import algebra as alg
from .brieskorn import BrieskornPoint, IsometryElement, act, beta, rotation2
from .diffeo import SpherePair, psi_trig


def rotate_linear(pair: SpherePair, theta: float) -> tuple[np.ndarray, np.ndarray]:
    c, s = np.cos(theta), np.sin(theta)
    return pair.p * c - pair.w * s, pair.p * s + pair.w * c


@dataclass(frozen=True)
class RotatedPair:
    base: SpherePair
    theta: float

    @property
    def p_theta(self) -> np.ndarray:
        return rotate_linear(self.base, self.theta)[0]

    @property
    def w_theta(self) -> np.ndarray:
        return rotate_linear(self.base, self.theta)[1]

    def pair(self) -> SpherePair:
        return SpherePair(*rotate_linear(self.base, self.theta))


def twisted_quotients(r, m: int = 0):
    """(sin(k pi r/2)/r, cos(k pi r/2)/(1 - r^2)) with k = 2m + 1, cancellation free.

    For odd k, cos(k pi r/2) = (-1)^m sin(k pi (1-r)/2), so both quotients are
    sinc expressions.  m = 0 reproduces ``algebra.safe_trig_quotients``.
    """
    if m == 0:
        return alg.safe_trig_quotients(r)
    r = np.asarray(r, dtype=float)
    if np.any(r < 0.0) or np.any(r > 1.0):
        raise ValueError("twisted_quotients needs 0 <= r <= 1")
    k = 2 * m + 1
    f1 = 0.5 * k * np.pi * np.sinc(0.5 * k * r)
    f2 = (-1) ** m * 0.5 * k * np.pi * np.sinc(0.5 * k * (1.0 - r)) / (1.0 + r)
    return f1, f2


def q_map(pair: SpherePair, theta: float, m: int = 0) -> np.ndarray:
    """Q((p, w), theta) by the four-term analytic expansion (a unit quaternion or octonion)."""
    pt, wt = rotate_linear(pair, theta)
    a1, a2 = twisted_quotients(min(float(np.linalg.norm(pair.p)), 1.0), m)
    b1, b2 = twisted_quotients(min(float(np.linalg.norm(pt)), 1.0), m)
    W, Wt, P, Pt = (alg.embed(v) for v in (pair.w, wt, pair.p, pt))
    return (
        alg.mul_chain(W, Wt, alg.conj(W), alg.conj(Wt)) * a2 * b2
        - alg.mul(Pt, P) * a1 * b1
        + alg.mul_chain(W, Pt, alg.conj(W)) * a2 * b1
        - alg.mul_chain(Wt, P, alg.conj(Wt)) * a1 * b2
    )


def q_map_raw(pair: SpherePair, theta: float, m: int = 0) -> np.ndarray:
    """Q from its defining six-factor product; needs w and w_theta nonzero."""
    pt, wt = rotate_linear(pair, theta)
    nw, nwt = np.linalg.norm(pair.w), np.linalg.norm(wt)
    if nw < 1e-12 or nwt < 1e-12:
        raise ZeroDivisionError("raw Q needs w != 0 and w_theta != 0")
    k = 2 * m + 1
    W = alg.embed(pair.w / nw)
    Wt = alg.embed(wt / nwt)
    return alg.mul_chain(
        W, alg.sphere_exp(pair.p, -0.5 * k * np.pi), Wt, alg.conj(W),
        alg.sphere_exp(pt, 0.5 * k * np.pi), alg.conj(Wt),
    )


def cocycle_residual(pair: SpherePair, theta: float, tau: float, m: int = 0) -> float:
    rot = RotatedPair(pair, theta).pair()
    lhs = alg.mul(q_map(pair, theta, m), q_map(rot, tau, m))
    return float(np.abs(lhs - q_map(pair, theta + tau, m)).max())


def nonlinear_rotate(pair: SpherePair, theta: float, m: int = 0) -> SpherePair:
    q = q_map(pair, theta, m)
    qb = alg.conj(q)
    pt, wt = rotate_linear(pair, theta)
    p_new = alg.imag(alg.mul_chain(q, alg.embed(pt), qb))
    w_new = alg.imag(alg.mul_chain(q, alg.embed(wt), qb))
    # |q| = 1 up to rounding; conjugation scales by |q|^2
    scale = 1.0 / float(alg.dot(q, q))
    return SpherePair(p_new * scale, w_new * scale)


def reflect(pair: SpherePair) -> SpherePair:
    """The linear Z_2 part of O(2): (p, w) -> (p, -w)."""
    return SpherePair(pair.p, -pair.w)


def conjugate_pair(pair: SpherePair, q) -> SpherePair:
    """Diagonal SO(3) action (q p conj q, q w conj q) for a unit quaternion q."""
    g = alg.conj_matrix(q)
    return pair.rotate(g)


def action_law_residual(pair: SpherePair, theta: float, tau: float, m: int = 0) -> float:
    two = nonlinear_rotate(nonlinear_rotate(pair, theta, m), tau, m)
    return two.distance(nonlinear_rotate(pair, theta + tau, m))


def involution(pair: SpherePair) -> SpherePair:
    return nonlinear_rotate(pair, np.pi)


def dihedral_residual(pair: SpherePair, theta: float) -> float:
    lhs = reflect(nonlinear_rotate(reflect(pair), theta))
    return lhs.distance(nonlinear_rotate(pair, -theta))


def equivariance_residual(pair: SpherePair, theta: float, g) -> float:
    """|rotate(g x) - g rotate(x)| for a rotation g of R^n (SO(3) or G2)."""
    g = np.asarray(g, dtype=float)
    return nonlinear_rotate(pair.rotate(g), theta).distance(nonlinear_rotate(pair, theta).rotate(g))


def brieskorn_equivalence_residual(pair: SpherePair, theta: float) -> float:
    """|psi(rotate(x)) - (D(theta), 1) . psi(x)| with the trigonometric psi.

    The conjugating element of O(2) x SO(n) relating the two sides is the
    identity: measured once at the base point (j, 0) and found exact.
    """
    lhs = psi_trig(nonlinear_rotate(pair, theta)).to_complex()
    g = IsometryElement(rotation2(theta), np.eye(pair.n))
    rhs = act(g, psi_trig(pair).to_complex())
    return lhs.distance(rhs)


def reflection_residual(pair: SpherePair) -> float:
    """|psi(p, -w) - conj(psi(p, w))|: the reflection diag(1, -1) on both sides."""
    lhs = psi_trig(reflect(pair)).to_complex()
    g = IsometryElement(np.diag([1.0, -1.0]), np.eye(pair.n))
    return lhs.distance(act(g, psi_trig(pair).to_complex()))


def calabi_residual(pair: SpherePair) -> float:
    """psi(involution(x)) against (z0, -z) of psi(x)."""
    lhs = psi_trig(involution(pair)).to_complex()
    b = psi_trig(pair).to_complex()
    return lhs.distance(BrieskornPoint(b.z0, -b.z))


# ---------------------------------------------------------------------------
# the normal curve


def normal_curve(s: float) -> SpherePair:
    """s -> (j cos s, (k cos(pi cos s) - i sin(pi cos s)) sin s)."""
    c = np.cos(np.pi * np.cos(s))
    d = np.sin(np.pi * np.cos(s))
    p = np.array([0.0, np.cos(s), 0.0])
    w = np.array([-d, 0.0, c]) * np.sin(s)
    return SpherePair(p, w)


def normal_curve_identification(samples: int = 32) -> np.ndarray:
    """Rotation A in SO(3) with psi_trig(normal_curve(s)) = (1, A) . beta(s).

    Found once by orthogonal Procrustes over curve samples; at s = 0 alone
    it is underdetermined because the isotropy there is one-dimensional.
    """
    ss = np.linspace(0.05, np.pi / 2 - 0.05, samples)
    src, dst = [], []
    for s in ss:
        b = beta(s).z
        t = psi_trig(normal_curve(s)).to_complex().z
        src += [b.real, b.imag]
        dst += [t.real, t.imag]
    src, dst = np.array(src), np.array(dst)
    # minimize |src R - dst|; then A = R^T acts on column vectors
    r, _ = orthogonal_procrustes(src, dst)
    if np.linalg.det(r) < 0:
        u, _, vt = np.linalg.svd(src.T @ dst)
        u[:, -1] *= -1
        r = u @ vt
    return r.T


NORMAL_CURVE_ROTATION = np.diag([-1.0, 1.0, -1.0])


def normal_curve_residual(s: float, rotation: np.ndarray = NORMAL_CURVE_ROTATION) -> float:
    t = psi_trig(normal_curve(s)).to_complex()
    b = beta(s)
    return t.distance(BrieskornPoint(b.z0, rotation @ b.z))


def nonlinearity_witness() -> tuple[SpherePair, SpherePair, float]:
    """Two points x, y with rotate(normalize(x + y)) != normalize(rotate x + rotate y) at pi/2."""
    x = SpherePair([0.6, 0.0, 0.0], [0.0, 0.8, 0.0])
    y = SpherePair([0.0, 0.0, 0.8], [0.6, 0.0, 0.0])
    theta = np.pi / 2
    s = x.vector() + y.vector()
    s /= np.linalg.norm(s)
    lhs = nonlinear_rotate(SpherePair(s[:3], s[3:]), theta).vector()
    rhs = nonlinear_rotate(x, theta).vector() + nonlinear_rotate(y, theta).vector()
    rhs /= np.linalg.norm(rhs)
    return x, y, float(np.linalg.norm(lhs - rhs))
