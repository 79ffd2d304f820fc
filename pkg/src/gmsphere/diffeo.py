"""Equivariant diffeomorphisms from round spheres onto the Brieskorn spheres.

A point of S^{2n-1} is a pair (p, w) of vectors in R^n with |p|^2 + |w|^2 = 1.
For n = 3 and n = 7 both psi and its trigonometric precursor send it to

    x0 = (|w|^2 - |p|^2) / 2,   y0 = -<p, w>,
    x  = a1 p + a2 w + a3 p x w,
    y  = b1 p + b2 w + b3 p x w,

where the six coefficients depend on |p|^2 and <p, w> only.  That structure is
what makes the inverse a 3x3 linear solve: (x, y, x cross y) expressed in the
frame (p, w, p x w) has a coefficient matrix determined by (x0, y0).
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import algebra as alg
from .brieskorn import BrieskornRealForm
from .config import TOL


@dataclass(frozen=True)
class SpherePair:
    p: np.ndarray
    w: np.ndarray

    def __post_init__(self):
        p = np.array(self.p, dtype=float)
        w = np.array(self.w, dtype=float)
        if p.shape != w.shape or p.ndim != 1:
            raise ValueError("p and w must be vectors of equal length")
        if abs(p @ p + w @ w - 1.0) > TOL.unit_input:
            raise ValueError("need |p|^2 + |w|^2 = 1")
        p.flags.writeable = False
        w.flags.writeable = False
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "w", w)

    @property
    def n(self) -> int:
        return self.p.size

    def vector(self) -> np.ndarray:
        return np.concatenate([self.p, self.w])

    def distance(self, other: "SpherePair") -> float:
        return float(np.linalg.norm(self.vector() - other.vector()))

    def rotate(self, g) -> "SpherePair":
        g = np.asarray(g, dtype=float)
        return SpherePair(g @ self.p, g @ self.w)

    @classmethod
    def random(cls, rng: np.random.Generator, n: int = 3) -> "SpherePair":
        v = rng.standard_normal(2 * n)
        v /= np.linalg.norm(v)
        return cls(v[:n], v[n:])


Coefficients = Callable[[np.ndarray, np.ndarray], tuple[np.ndarray, np.ndarray]]


def rational_coefficients(pp, pw):
    """(a, b) with x = a . (p, w, p x w), y = b . (p, w, p x w) for psi."""
    pp = np.asarray(pp, dtype=float)
    pw = np.asarray(pw, dtype=float)
    pre = 1.0 / (3.0 * (1.0 + pp) ** 2)
    a = pre * np.stack([
        (3 - 2 * pp) * (1 + pp) ** 2 - 4 * (1 - pp) * pw**2,
        -2 * (3 + 8 * pp + pp**2 - 4 * pw**2) * pw,
        -8 * pp * pw,
    ])
    b = pre * np.stack([
        2 * (1 - pp) * (1 + 3 * pp) * pw,
        -(1 + 2 * pp) * (1 - 6 * pp + pp**2) - 4 * (1 + 3 * pp) * pw**2,
        -4 * (1 + 2 * pp) * (1 - pp) * np.ones_like(pw),
    ])
    return a, b


def trig_coefficients(pp, pw):
    """Coefficients of the trigonometric version, all quotients removable-singularity safe."""
    pp = np.asarray(pp, dtype=float)
    pw = np.asarray(pw, dtype=float)
    ww = 1.0 - pp
    r = np.sqrt(np.clip(pp, 0.0, 1.0))
    f1, f2 = alg.safe_trig_quotients(r)
    half = np.cos(0.5 * np.pi * r)
    q_a = 2 * f2 * half       # (1 + cos pi r) / (1 - r^2)
    q_b = 2 * f2 * f2         # (1 + cos pi r) / (1 - r^2)^2
    q_c = 2 * f1 * f2         # sin(pi r) / (r (1 - r^2))
    q_d = 2 * f1 * half       # sin(pi r) / r
    g = alg.trig_cubic_quotient(r)
    a = np.stack([
        3 - 2 * pp - 2 * q_a * pw**2,
        -2 * (3 + pp * q_a - 2 * q_b * pw**2) * pw,
        -2 * pp * q_c * pw,
    ]) / 3
    b = np.stack([
        -g * ww * pw,
        -(1 + 2 * pp) * np.cos(np.pi * r) + 2 * g * pw**2,
        -(1 + 2 * pp) * q_d,
    ]) / 3
    return a, b


def _map_arrays(coef: Coefficients, p, w):
    p = np.asarray(p, dtype=float)
    w = np.asarray(w, dtype=float)
    pp = alg.dot(p, p)
    ww = alg.dot(w, w)
    pw = alg.dot(p, w)
    c = alg.cross(p, w)
    a, b = coef(pp, pw)
    x = a[0][..., None] * p + a[1][..., None] * w + a[2][..., None] * c
    y = b[0][..., None] * p + b[1][..., None] * w + b[2][..., None] * c
    return 0.5 * (ww - pp), -pw, x, y


def psi_arrays(p, w, trig: bool = False):
    """Batched psi: arrays (..., n) -> (x0, y0, x, y)."""
    return _map_arrays(trig_coefficients if trig else rational_coefficients, p, w)


def _to_form(parts) -> BrieskornRealForm:
    x0, y0, x, y = parts
    return BrieskornRealForm(float(x0), float(y0), x, y)


def psi(pair: SpherePair) -> BrieskornRealForm:
    if pair.n not in (3, 7):
        raise ValueError("psi needs a cross product: n = 3 or 7")
    return _to_form(psi_arrays(pair.p, pair.w))


def psi_trig(pair: SpherePair) -> BrieskornRealForm:
    if pair.n not in (3, 7):
        raise ValueError("psi_trig needs a cross product: n = 3 or 7")
    return _to_form(psi_arrays(pair.p, pair.w, trig=True))


def frame_matrix(coef: Coefficients, x0: float, y0: float) -> np.ndarray:
    """Rows: coordinates of x, y and x cross y in the frame (p, w, p x w).

    Uses p x (p x w) = <p,w> p - |p|^2 w and w x (p x w) = |w|^2 p - <p,w> w,
    valid in dimensions 3 and 7.
    """
    pp = (1.0 - 2.0 * x0) / 2.0
    ww = 1.0 - pp
    pw = -y0
    a, b = coef(np.asarray(pp), np.asarray(pw))
    a, b = np.asarray(a, dtype=float), np.asarray(b, dtype=float)
    u = a[0] * b[2] - a[2] * b[0]
    v = a[1] * b[2] - a[2] * b[1]
    c = np.array([u * pw + v * ww, -u * pp - v * pw, a[0] * b[1] - a[1] * b[0]])
    return np.array([a, b, c])


def determinant_bound(x0: float) -> float:
    """Lower bound 256 / (9 (3 - 2 x0)^8) for det of the rational frame matrix."""
    return 256.0 / (9.0 * (3.0 - 2.0 * x0) ** 8)


def _inverse(coef: Coefficients, b: BrieskornRealForm, bound: float | None) -> SpherePair:
    if b.x.size not in (3, 7):
        raise ValueError("the inverse needs n = 3 or 7")
    if b.max_residual() > TOL.manifold:
        raise ValueError(f"point is off W (residual {b.max_residual():.3e})")
    m = frame_matrix(coef, b.x0, b.y0)
    det = float(np.linalg.det(m))
    if bound is not None and det < bound - 1e-9:
        raise ArithmeticError(f"frame determinant {det:.6g} below the bound {bound:.6g}")
    if abs(det) < 1e-12:
        raise ArithmeticError("singular frame matrix")
    rhs = np.stack([b.x, b.y, alg.cross(b.x, b.y)])
    sol = np.linalg.solve(m, rhs)
    p, w = sol[0], sol[1]
    # remove rounding drift off the sphere without touching directions
    scale = 1.0 / np.sqrt(p @ p + w @ w)
    return SpherePair(p * scale, w * scale)


def psi_inverse(b: BrieskornRealForm) -> SpherePair:
    """Inverse of psi via the 3x3 frame system; checks the determinant bound."""
    return _inverse(rational_coefficients, b, determinant_bound(b.x0))


def psi_trig_inverse(b: BrieskornRealForm) -> SpherePair:
    return _inverse(trig_coefficients, b, None)


def partial_injective(pair: SpherePair) -> BrieskornRealForm:
    """Injective map S^{2n-1} minus {w = 0} -> W^{2n-1}_3 for any n; no cross product."""
    p, w = pair.p, pair.w
    nw = float(np.linalg.norm(w))
    if nw <= 1e-9:
        raise ValueError("partial_injective is undefined at w = 0")
    u = w / nw
    pp, ww, pu = p @ p, w @ w, p @ u
    x = -((pp + 3 * ww - 4 * pu**2) * p + 2 * pp * pu * u) / 3
    y = (-(3 * pp + ww) * w + 6 * (w @ p) * p) / 3
    return BrieskornRealForm(0.5 * (ww - pp), -(p @ w), x, y)


def equivariance_check(g, pair: SpherePair, trig: bool = False) -> float:
    """|psi(g p, g w) - g . psi(p, w)| with g fixing (x0, y0) and rotating (x, y)."""
    g = np.asarray(g, dtype=float)
    f = psi_trig if trig else psi
    lhs = f(pair.rotate(g))
    rhs = f(pair)
    rot = BrieskornRealForm(rhs.x0, rhs.y0, g @ rhs.x, g @ rhs.y)
    return lhs.distance(rot)


def disc_coordinate(pair: SpherePair) -> complex:
    """|w|^2 - |p|^2 - 2i<p, w>: the orbit-space coordinate 2 z0 of psi(p, w)."""
    return complex(pair.w @ pair.w - pair.p @ pair.p, -2 * (pair.p @ pair.w))


def span_residual(pair: SpherePair, trig: bool = False) -> float:
    """Component of x and y orthogonal to span{p, w, p x w}."""
    b = (psi_trig if trig else psi)(pair)
    basis = np.stack([pair.p, pair.w, alg.cross(pair.p, pair.w)], axis=-1)
    q, _ = np.linalg.qr(basis)
    rank = np.linalg.matrix_rank(basis, tol=1e-10)
    q = q[:, :rank]
    return float(max(np.linalg.norm(v - q @ (q.T @ v)) for v in (b.x, b.y)))
