"""Brieskorn spheres W^{2n-1}_3 with the coefficients matching the Gromoll-Meyer
quotient, their O(2) x SO(n) (or O(2) x G2) actions and the normal geodesic.

    (8/9) z0^3 + sum z_i^2 = 0,    (4/3)|z0|^2 + sum |z_i|^2 = 4/9.

Ambient real coordinates are ordered (Re z0, Im z0, Re z, Im z).
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import expm, qr

from . import algebra as alg
from .config import TOL


def defining_residuals(z0, z) -> tuple[float, float]:
    z = np.asarray(z, dtype=complex)
    r1 = abs(8.0 / 9.0 * z0**3 + np.sum(z * z))
    r2 = abs(4.0 / 3.0 * abs(z0) ** 2 + np.sum(np.abs(z) ** 2) - 4.0 / 9.0)
    return float(r1), float(r2)


@dataclass(frozen=True)
class BrieskornPoint:
    z0: complex
    z: np.ndarray

    def __post_init__(self):
        z = np.array(self.z, dtype=complex)
        if z.shape not in ((3,), (7,)):
            raise ValueError("z must have 3 or 7 components")
        z.flags.writeable = False
        object.__setattr__(self, "z", z)
        object.__setattr__(self, "z0", complex(self.z0))

    @property
    def n(self) -> int:
        return self.z.size

    def residuals(self) -> tuple[float, float]:
        return defining_residuals(self.z0, self.z)

    def max_residual(self) -> float:
        return max(self.residuals())

    def check(self, tol: float = TOL.manifold) -> "BrieskornPoint":
        if self.max_residual() > tol:
            raise ValueError(f"point is off W (residual {self.max_residual():.3e})")
        return self

    def to_real(self) -> "BrieskornRealForm":
        return BrieskornRealForm(self.z0.real, self.z0.imag, self.z.real.copy(), self.z.imag.copy())

    def vector(self) -> np.ndarray:
        return np.concatenate([[self.z0.real, self.z0.imag], self.z.real, self.z.imag])

    @classmethod
    def from_vector(cls, v) -> "BrieskornPoint":
        v = np.asarray(v, dtype=float)
        n = (v.size - 2) // 2
        return cls(complex(v[0], v[1]), v[2:2 + n] + 1j * v[2 + n:])

    def distance(self, other: "BrieskornPoint") -> float:
        return float(np.linalg.norm(self.vector() - other.vector()))


@dataclass(frozen=True)
class BrieskornRealForm:
    """(z0, z) = (x0 + i y0, x + i y)."""

    x0: float
    y0: float
    x: np.ndarray
    y: np.ndarray

    def __post_init__(self):
        for name in ("x", "y"):
            a = np.array(getattr(self, name), dtype=float)
            a.flags.writeable = False
            object.__setattr__(self, name, a)
        object.__setattr__(self, "x0", float(self.x0))
        object.__setattr__(self, "y0", float(self.y0))

    def residuals(self) -> tuple[float, float, float]:
        x0, y0, x, y = self.x0, self.y0, self.x, self.y
        r1 = x @ x - 2 / 9 * (1 - 2 * x0**3 + 6 * x0 * y0**2 - 3 * x0**2 - 3 * y0**2)
        r2 = y @ y - 2 / 9 * (1 + 2 * x0**3 - 6 * x0 * y0**2 - 3 * x0**2 - 3 * y0**2)
        r3 = x @ y - 4 / 9 * y0 * (y0**2 - 3 * x0**2)
        return float(abs(r1)), float(abs(r2)), float(abs(r3))

    def max_residual(self) -> float:
        return max(self.residuals())

    def to_complex(self) -> BrieskornPoint:
        return BrieskornPoint(complex(self.x0, self.y0), self.x + 1j * self.y)

    def vector(self) -> np.ndarray:
        return np.concatenate([[self.x0, self.y0], self.x, self.y])

    def distance(self, other: "BrieskornRealForm") -> float:
        return float(np.linalg.norm(self.vector() - other.vector()))


REFLECTION = np.diag([1.0, -1.0])


def rotation2(theta: float) -> np.ndarray:
    c, s = np.cos(theta), np.sin(theta)
    return np.array([[c, -s], [s, c]])


def o2_decompose(b) -> tuple[float, bool]:
    """B = D(theta) R^eps with R = diag(1, -1); returns (theta, eps)."""
    b = np.asarray(b, dtype=float)
    eps = bool(np.linalg.det(b) < 0)
    rot = b @ REFLECTION if eps else b
    return float(np.arctan2(rot[1, 0], rot[0, 0])), eps


@dataclass(frozen=True)
class IsometryElement:
    o2_part: np.ndarray
    rot_part: np.ndarray
    check_g2: bool = field(default=False, compare=False)

    def __post_init__(self):
        b = np.array(self.o2_part, dtype=float)
        a = np.array(self.rot_part, dtype=float)
        if b.shape != (2, 2) or np.abs(b.T @ b - np.eye(2)).max() > TOL.algebraic:
            raise ValueError("o2_part must be a 2x2 orthogonal matrix")
        if a.shape not in ((3, 3), (7, 7)):
            raise ValueError("rot_part must be 3x3 or 7x7")
        if np.abs(a.T @ a - np.eye(a.shape[0])).max() > TOL.algebraic or np.linalg.det(a) < 0:
            raise ValueError("rot_part must be special orthogonal")
        if self.check_g2 and a.shape == (7, 7) and g2_residual(a) > TOL.equivariance_g2:
            raise ValueError("rot_part is not an octonion automorphism")
        b.flags.writeable = False
        a.flags.writeable = False
        object.__setattr__(self, "o2_part", b)
        object.__setattr__(self, "rot_part", a)

    def __matmul__(self, other: "IsometryElement") -> "IsometryElement":
        return IsometryElement(self.o2_part @ other.o2_part, self.rot_part @ other.rot_part)

    @classmethod
    def identity(cls, n: int = 3) -> "IsometryElement":
        return cls(np.eye(2), np.eye(n))

    @classmethod
    def rotation(cls, theta: float, a=None, n: int = 3) -> "IsometryElement":
        return cls(rotation2(theta), np.eye(n) if a is None else a)

    @classmethod
    def from_quaternion(cls, b, q) -> "IsometryElement":
        return cls(b, alg.conj_matrix(q))


def act(g: IsometryElement, point: BrieskornPoint, check: bool = True) -> BrieskornPoint:
    """(D(theta) R^eps, A): optional conjugation, then (e^{2i theta} z0, e^{3i theta} A z)."""
    if check:
        point.check()
    if g.rot_part.shape[0] != point.n:
        raise ValueError("dimension mismatch between group element and point")
    theta, eps = o2_decompose(g.o2_part)
    z0, z = point.z0, point.z
    if eps:
        z0, z = z0.conjugate(), z.conj()
    return BrieskornPoint(np.exp(2j * theta) * z0, np.exp(3j * theta) * (g.rot_part @ z))


def calabi_involution(point: BrieskornPoint) -> BrieskornPoint:
    return BrieskornPoint(point.z0, -point.z)


def deck_rotation(point: BrieskornPoint, k: int = 1) -> BrieskornPoint:
    """z0 -> e^{2 pi i k/3} z0; preserves both equations but is not in the group."""
    return BrieskornPoint(np.exp(2j * np.pi * k / 3) * point.z0, point.z)


# ---------------------------------------------------------------------------
# the normal geodesic


def beta(s: float) -> BrieskornPoint:
    z = np.array([0.0, 3 * np.cos(s) - np.cos(3 * s), 1j * (3 * np.sin(s) + np.sin(3 * s))]) / 6
    return BrieskornPoint(-0.5 * np.cos(2 * s), z)


def beta_derivative(s: float) -> np.ndarray:
    """d beta / ds as a real ambient vector."""
    dz = np.array([0.0, -3 * np.sin(s) + 3 * np.sin(3 * s), 1j * (3 * np.cos(s) + 3 * np.cos(3 * s))]) / 6
    return BrieskornPoint(np.sin(2 * s), dz).vector()


def constraint_jacobian(point: BrieskornPoint) -> np.ndarray:
    """3 x (2n+2) Jacobian of (Re F, Im F, G) in ambient real coordinates."""
    n = point.n
    z0, z = point.z0, point.z
    jac = np.zeros((3, 2 * n + 2))
    d0 = 8.0 / 3.0 * z0**2  # dF/dz0
    for col, dz in ((0, d0), (1, 1j * d0)):
        jac[0, col], jac[1, col] = dz.real, dz.imag
    jac[0, 2:2 + n], jac[1, 2:2 + n] = (2 * z).real, (2 * z).imag
    jac[0, 2 + n:], jac[1, 2 + n:] = (2j * z).real, (2j * z).imag
    jac[2, 0], jac[2, 1] = 8.0 / 3.0 * z0.real, 8.0 / 3.0 * z0.imag
    jac[2, 2:2 + n], jac[2, 2 + n:] = 2 * z.real, 2 * z.imag
    return jac


def tangent_basis(point: BrieskornPoint) -> np.ndarray:
    """Orthonormal columns spanning the tangent space (QR of the Jacobian transpose)."""
    jac = constraint_jacobian(point)
    q, r = qr(jac.T, mode="full")
    rank = int(np.sum(np.abs(np.diag(r)) > 1e-12 * max(1.0, np.abs(r).max())))
    return q[:, rank:]


def killing_vectors(point: BrieskornPoint) -> list[np.ndarray]:
    """Velocity vectors of the SO(2) and SO(n) one-parameter subgroups (n = 3)."""
    n = point.n
    out = [BrieskornPoint(2j * point.z0, 3j * point.z).vector()]
    for a, b in ((0, 1), (0, 2), (1, 2)) if n == 3 else [(a, b) for a in range(n) for b in range(a + 1, n)]:
        e = np.zeros((n, n))
        e[a, b], e[b, a] = -1.0, 1.0
        out.append(BrieskornPoint(0.0, e @ point.z).vector())
    return out


@dataclass(frozen=True)
class GeodesicReport:
    s: float
    tangential_acceleration: float
    orbit_perpendicularity: float
    speed_error: float


def curve_geodesic_residual(curve, s: float, h: float = 1e-3) -> tuple[float, float]:
    """(tangential |c''|, | |c'| - 1 |) by central differences in R^{2n+2}."""
    v_minus, v0, v_plus = (curve(s + d).vector() for d in (-h, 0.0, h))
    acc = (v_plus - 2 * v0 + v_minus) / h**2
    vel = (v_plus - v_minus) / (2 * h)
    basis = tangent_basis(curve(s))
    return float(np.linalg.norm(basis.T @ acc)), float(abs(np.linalg.norm(vel) - 1.0))


def beta_geodesic_residual(s: float, h: float = 1e-3) -> GeodesicReport:
    tang, _ = curve_geodesic_residual(beta, s, h)
    vel = beta_derivative(s)
    perp = max(abs(float(vel @ k)) for k in killing_vectors(beta(s)))
    return GeodesicReport(s, tang, perp, float(abs(np.linalg.norm(vel) - 1.0)))


def beta_fixed_set_residual(s: float) -> float:
    """beta(s) has Im z0 = 0, z1 = 0, Im z2 = 0, Re z3 = 0."""
    b = beta(s)
    return float(max(abs(b.z0.imag), abs(b.z[0]), abs(b.z[1].imag), abs(b.z[2].real)))


# ---------------------------------------------------------------------------
# isotropy along beta


def _block13(c: np.ndarray, middle: float) -> np.ndarray:
    """3x3 matrix with a 2x2 block c in rows/cols (0, 2) and the given middle entry."""
    a = np.zeros((3, 3))
    a[np.ix_([0, 2], [0, 2])] = c
    a[1, 1] = middle
    return a


def principal_isotropy() -> list[IsometryElement]:
    return [
        IsometryElement(np.eye(2), np.eye(3)),
        IsometryElement(-np.eye(2), np.diag([1.0, -1.0, -1.0])),
        IsometryElement(np.diag([1.0, -1.0]), np.diag([-1.0, 1.0, -1.0])),
        IsometryElement(np.diag([-1.0, 1.0]), np.diag([-1.0, -1.0, 1.0])),
    ]


def k_minus(tau: float) -> list[IsometryElement]:
    """One element from each of the four components of K- at beta(0)."""
    c, s = np.cos(tau), np.sin(tau)
    rot = np.array([[c, -s], [s, c]])
    refl = np.array([[c, s], [s, -c]])
    return [
        IsometryElement(np.eye(2), _block13(rot, 1.0)),
        IsometryElement(-np.eye(2), _block13(refl, -1.0)),
        IsometryElement(np.diag([1.0, -1.0]), _block13(rot, 1.0)),
        IsometryElement(np.diag([-1.0, 1.0]), _block13(refl, -1.0)),
    ]


def k_plus(theta: float, literal: bool = False) -> list[IsometryElement]:
    """K+ at beta(pi/4): (D(theta), diag(1, D(3 theta))) and its reflected partner.

    With the action (e^{2i theta} z0, e^{3i theta} A z) and D the
    counterclockwise rotation, D(phi) maps (c, ic) to e^{-i phi}(c, ic), so the
    compensating angle is +3 theta.  ``literal=True`` uses the published -3 theta.
    """
    phi = -3 * theta if literal else 3 * theta
    lower = np.eye(3)
    lower[1:, 1:] = rotation2(phi)
    return [
        IsometryElement(rotation2(theta), lower),
        IsometryElement(rotation2(theta) @ REFLECTION, lower @ np.diag([-1.0, 1.0, -1.0])),
    ]


def random_element(rng: np.random.Generator, theta: float | None = None,
                   reflect: bool | None = None) -> IsometryElement:
    th = rng.uniform(-np.pi, np.pi) if theta is None else theta
    eps = bool(rng.integers(2)) if reflect is None else reflect
    b = rotation2(th) @ (REFLECTION if eps else np.eye(2))
    return IsometryElement.from_quaternion(b, alg.random_unit(rng, 3))


@dataclass(frozen=True)
class IsotropyReport:
    s: float
    group: str
    max_fixed_residual: float
    min_random_displacement: float
    samples: int


def isotropy_verify(s: float, rng: np.random.Generator, samples: int = 100,
                    literal: bool = False) -> IsotropyReport:
    point = beta(s)
    wall = s / (np.pi / 4)
    k = int(round(wall))
    thetas = np.linspace(0.1, 6.0, 9)  # generic angles: no accidental roots of unity
    if abs(wall - k) >= 1e-12:
        group = "H"
        members = principal_isotropy()
    elif k % 8 == 0:
        group = "K-"
        members = [g for tau in thetas for g in k_minus(tau)]
    elif k % 8 == 1:
        group = "K+"
        members = [g for th in thetas for g in k_plus(th, literal)]
    else:
        raise ValueError("the isotropy lists are given at s = 0 and s = pi/4 (mod 2 pi) only")
    fixed = max(act(g, point).distance(point) for g in members)
    moved = min(act(random_element(rng), point).distance(point) for _ in range(samples))
    return IsotropyReport(float(s), group, fixed, moved, samples)


def disc_projection(point: BrieskornPoint) -> complex:
    point.check()
    return 2 * point.z0


# ---------------------------------------------------------------------------
# G2


def octonion_derivation(a, b) -> np.ndarray:
    """7x7 matrix of the derivation D_{a,b}(x) = [[a,b],x] - 3 (a,b,x) on imaginary octonions.

    (a,b,x) = (ab)x - a(bx) is the associator; since it alternates this is
    [[a,b],x] + 3((ax)b - a(xb)).
    """
    A, B = alg.embed(a), alg.embed(b)
    ab = alg.omul(A, B) - alg.omul(B, A)
    cols = []
    for k in range(1, 8):
        x = alg.basis(7, k)
        v = alg.omul(ab, x) - alg.omul(x, ab) + 3 * (alg.omul(alg.omul(A, x), B) - alg.omul(A, alg.omul(x, B)))
        cols.append(alg.imag(v))
    return np.stack(cols, axis=-1)


def g2_sample(seed: int | np.random.Generator, terms: int = 3, scale: float = 0.3) -> np.ndarray:
    """Random element of G2 as exp of a random combination of derivations."""
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    d = np.zeros((7, 7))
    for _ in range(terms):
        a, b = rng.standard_normal((2, 7))
        d += rng.standard_normal() * octonion_derivation(a, b)
    return expm(scale * d)


def g2_residual(g, rng: np.random.Generator | None = None, pairs: int = 20) -> float:
    """max |g(xy) - g(x) g(y)| over random imaginary octonion pairs."""
    rng = rng or np.random.default_rng(12345)
    worst = 0.0
    for _ in range(pairs):
        x, y = rng.standard_normal((2, 7))
        lhs = g @ alg.cross(x, y)
        rhs = alg.cross(g @ x, g @ y)
        # the real part of xy is -<x,y>, preserved by any orthogonal g
        worst = max(worst, float(np.abs(lhs - rhs).max()))
    return worst


def random_point(rng: np.random.Generator, n: int = 3) -> BrieskornPoint:
    """Point of W obtained from a random orbit parameter and group element."""
    s = rng.uniform(0.0, np.pi / 4)
    b = beta(s)
    th = rng.uniform(-np.pi, np.pi)
    if n == 3:
        return act(IsometryElement.from_quaternion(rotation2(th), alg.random_unit(rng, 3)), b)
    z = np.zeros(7, dtype=complex)
    z[:3] = b.z
    return act(IsometryElement(rotation2(th), g2_sample(rng)), BrieskornPoint(b.z0, z))
