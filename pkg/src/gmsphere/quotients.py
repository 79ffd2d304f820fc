"""Cyclic subgroups of SO(2) x SO(3) acting on W^5_3 and Sigma^7, the branched
covering phi: W^5_3 -> S^5, the join map rho and the join description of Sigma^7.

The generator of H_{m;p,q} is (D(2 pi p/m), diag(1, D(2 pi q/m))).
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import gcd

import numpy as np
from scipy.optimize import brentq, least_squares

from . import algebra as alg
from . import sp2
from .brieskorn import BrieskornPoint, IsometryElement, act, o2_decompose, rotation2
from .diffeo import psi_trig_inverse

FIXED_POINT_THRESHOLD = 1e-6
ORACLE_STARTS = 200


@dataclass(frozen=True)
class LensActionParams:
    m: int
    p: int
    q: int

    def __post_init__(self):
        if int(self.m) != self.m or self.m <= 0:
            raise ValueError("m must be a positive integer")

    def angles(self, k: int = 1) -> tuple[float, float]:
        """(theta, phi) of the k-th power of the generator."""
        return 2 * np.pi * k * self.p / self.m, 2 * np.pi * k * self.q / self.m

    def generator(self, k: int = 1) -> IsometryElement:
        theta, phi = self.angles(k)
        lower = np.eye(3)
        lower[1:, 1:] = rotation2(phi)
        return IsometryElement(rotation2(theta), lower)


def table_predicate(params: LensActionParams) -> bool:
    """The six conditions exactly as stated, including the nonvanishing ones."""
    m, p, q = params.m, params.p, params.q
    return (
        p != 0 and 3 * p - q != 0 and 3 * p + q != 0
        and gcd(m, p) == 1 and gcd(m, 3 * p - q) == 1 and gcd(m, 3 * p + q) == 1
    )


def is_free(params: LensActionParams) -> bool:
    """Whether H_{m;p,q} acts freely on W^5_3 (equivalently on Sigma^7).

    For m >= 2 this is the six-condition predicate; its nonvanishing clauses are
    then implied by the gcd clauses (gcd(m, 0) = m).  For m = 1 the group is
    trivial and acts freely whatever p and q are.
    """
    if params.m == 1:
        return True
    return table_predicate(params)


# ---------------------------------------------------------------------------
# fixed point oracle: intersect W with the fixed subspace of the linear map


def _linear_map(theta: float, phi: float) -> np.ndarray:
    """Real 8x8 matrix of (z0, z) -> (e^{2i theta} z0, e^{3i theta} diag(1, D(phi)) z)."""
    c = np.zeros((4, 4), dtype=complex)
    c[0, 0] = np.exp(2j * theta)
    e3 = np.exp(3j * theta)
    c[1, 1] = e3
    c[2:, 2:] = e3 * rotation2(phi)
    # real coordinates (Re z0, Im z0, Re z, Im z) as in BrieskornPoint.vector
    big = np.zeros((8, 8))
    re, im = c.real, c.imag
    idx_re = [0, 2, 3, 4]
    idx_im = [1, 5, 6, 7]
    for a in range(4):
        for b in range(4):
            big[idx_re[a], idx_re[b]] = re[a, b]
            big[idx_re[a], idx_im[b]] = -im[a, b]
            big[idx_im[a], idx_re[b]] = im[a, b]
            big[idx_im[a], idx_im[b]] = re[a, b]
    return big


def _constraints(v: np.ndarray) -> np.ndarray:
    z0 = complex(v[0], v[1])
    z = v[2:5] + 1j * v[5:8]
    f = 8.0 / 9.0 * z0**3 + np.sum(z * z)
    g = 4.0 / 3.0 * abs(z0) ** 2 + np.sum(np.abs(z) ** 2) - 4.0 / 9.0
    return np.array([f.real, f.imag, g])


@lru_cache(maxsize=None)
def _has_fixed_point(kp: int, kq: int, m: int, starts: int, seed: int) -> tuple[bool, float]:
    theta, phi = 2 * np.pi * kp / m, 2 * np.pi * kq / m
    lin = _linear_map(theta, phi)
    u, s, vt = np.linalg.svd(lin - np.eye(8))
    basis = vt[s < 1e-9].T
    if basis.shape[1] == 0:
        return False, float("inf")
    rng = np.random.default_rng(seed)
    dim = basis.shape[1]
    pad = np.zeros(max(0, dim - 3))

    def residual(c):
        # zero padding so Levenberg-Marquardt accepts underdetermined systems
        return np.concatenate([_constraints(basis @ c), pad])

    best = np.inf
    for _ in range(starts):
        c0 = rng.standard_normal(dim) * 0.5
        res = least_squares(residual, c0, method="lm", xtol=1e-15, ftol=1e-15, gtol=1e-15)
        best = min(best, float(np.abs(res.fun).max()))
        if best < 1e-13:
            break
    return best < FIXED_POINT_THRESHOLD, best


def fixed_point_oracle(params: LensActionParams, starts: int = ORACLE_STARTS, seed: int = 0) -> bool:
    """True iff no nontrivial power of the generator has a fixed point on W^5_3.

    For each power the fixed subspace of the linear map on C^4 is computed;
    an empty subspace means no fixed point, otherwise Levenberg-Marquardt from
    many random starts looks for a point of W inside it.
    """
    m = params.m
    for k in range(1, m):
        kp, kq = (k * params.p) % m, (k * params.q) % m
        found, _ = _has_fixed_point(kp, kq, m, starts, seed)
        if found:
            return False
    return True


# ---------------------------------------------------------------------------
# the branched covering


def phi(point: BrieskornPoint, variant: str = "z1") -> np.ndarray:
    """Normalized (sqrt2 z1, z2 + i z3, z3 + i z2); variant "z0" uses z0 instead of sqrt2 z1.

    The unnormalized norm squared is (8/9)(1 - 3|z0|^2) >= 2/9 for the default
    variant, so normalizing by the actual norm is always possible.
    """
    point.check()
    if point.n != 3:
        raise ValueError("phi is defined on W^5_3")
    z0, z = point.z0, point.z
    first = np.sqrt(2.0) * z[0] if variant == "z1" else z0
    if variant not in ("z1", "z0"):
        raise ValueError("variant must be 'z1' or 'z0'")
    v = np.array([first, z[1] + 1j * z[2], z[2] + 1j * z[1]])
    return v / np.linalg.norm(v)


def phi_weights(params: LensActionParams, variant: str = "z1") -> tuple[int, int, int]:
    first = 3 * params.p if variant == "z1" else 2 * params.p
    return first, 3 * params.p + params.q, 3 * params.p - params.q


def phi_equivariance_residual(params: LensActionParams, point: BrieskornPoint, variant: str = "z1") -> float:
    lhs = phi(act(params.generator(), point), variant)
    w = np.array(phi_weights(params, variant))
    rhs = np.exp(2j * np.pi * w / params.m) * phi(point, variant)
    return float(np.abs(lhs - rhs).max())


def fiber(target, variant: str = "z1", tol: float = 2e-14) -> list[BrieskornPoint]:
    """All points of W^5_3 with the given phi value.

    ``tol`` decides when the target lies on the branch locus.  Since |z0|^3 is
    proportional to |z1^2 + z2^2 + z3^2|, a cutoff of 2e-14 on the latter means
    |z0| below about 3e-5; roundoff at true branch points stays near 4e-15.
    """
    u = np.asarray(target, dtype=complex)
    if u.shape != (3,) or abs(np.linalg.norm(u) - 1.0) > 1e-9:
        raise ValueError("target must be a unit vector in C^3")
    a, b = u[1], u[2]
    rest = np.array([(a - 1j * b) / 2, (b - 1j * a) / 2])
    if variant == "z1":
        shape = np.concatenate([[u[0] / np.sqrt(2.0)], rest])
        s_sum = np.sum(shape * shape)
        n2 = float(np.sum(np.abs(shape) ** 2))
        # solve for rho = |z0| (well conditioned near z0 = 0, unlike t = lambda^2):
        # rho^3 = (9/8) t |S| with 4/3 rho^2 + t n2 = 4/9 gives rho^3 + 3/2 c rho^2 - c/2 = 0
        if abs(s_sum) < tol:
            t = 4.0 / (9.0 * n2)
            return [BrieskornPoint(0.0, np.sqrt(t) * shape)]
        c = abs(s_sum) / n2
        rho = brentq(lambda r: r**3 + 1.5 * c * r**2 - 0.5 * c, 0.0, 1.0 / np.sqrt(3.0), xtol=1e-17, rtol=1e-15)
        t = (4.0 / 9.0 - 4.0 / 3.0 * rho**2) / n2
        z = np.sqrt(t) * shape
        phase = np.angle(-np.sum(z * z))
        roots = [rho * np.exp(1j * (phase + 2 * np.pi * k) / 3) for k in range(3)]
        return [BrieskornPoint(r, z) for r in roots]
    if variant == "z0":
        # z0 = lambda u0, (z2, z3) = lambda rest; z1^2 = -(8/9) z0^3 - z2^2 - z3^2
        rest_sq = np.sum(rest * rest)
        nr = float(np.sum(np.abs(rest) ** 2))
        u0 = u[0]

        def h(lam):
            z1sq = -(8.0 / 9.0) * (lam * u0) ** 3 - lam**2 * rest_sq
            return 4.0 / 3.0 * abs(lam * u0) ** 2 + lam**2 * nr + abs(z1sq) - 4.0 / 9.0

        lam = brentq(h, 0.0, 10.0, xtol=1e-16, rtol=1e-15)
        z1sq = -(8.0 / 9.0) * (lam * u0) ** 3 - lam**2 * rest_sq
        if abs(z1sq) < tol:
            return [BrieskornPoint(lam * u0, np.concatenate([[0.0], lam * rest]))]
        r = np.sqrt(z1sq)
        return [BrieskornPoint(lam * u0, np.concatenate([[s * r], lam * rest])) for s in (1, -1)]
    raise ValueError("variant must be 'z1' or 'z0'")


def fiber_count(target, variant: str = "z1") -> int:
    return len(fiber(target, variant))


def rho(r: int, v) -> np.ndarray:
    """(cos t lambda, sin t u) -> (cos t lambda^r, sin t u) on S^1 * S^3 = S^5."""
    if int(r) != r or r <= 0:
        raise ValueError("r must be a positive integer")
    v = np.asarray(v, dtype=complex)
    a = abs(v[0])
    out = v.copy()
    if a > 0:
        lam = v[0] / a
        out[0] = a * lam**r
    return out


def degree_inverse_of_three(m: int) -> int:
    """Positive r with 3 r = 1 mod m (needs 3 not dividing m)."""
    if m % 3 == 0:
        raise ValueError("3 divides m")
    return pow(3, -1, m) if m > 1 else 1


@dataclass(frozen=True)
class LensMetadata:
    m: int
    l5: tuple[int, int, int]
    l7: tuple[int, int, int, int]
    note: str = "homotopy type emitted as metadata; not verified topologically"


def lens_parameters(params: LensActionParams) -> LensMetadata:
    if params.m % 6 == 0:
        raise ValueError("6 divides m: the homotopy lens type is only stated when 6 does not divide m")
    if not is_free(params):
        raise ValueError("the action is not free")
    p, q = params.p, params.q
    return LensMetadata(params.m, (p, 3 * p - q, 3 * p + q), (p, p, 3 * p - q, 3 * p + q))


# ---------------------------------------------------------------------------
# join coordinates for Sigma^7


@dataclass(frozen=True)
class JoinPoint:
    circle: complex
    brieskorn: BrieskornPoint
    t: float

    def __post_init__(self):
        if abs(abs(self.circle) - 1.0) > 1e-9:
            raise ValueError("circle component must be a unit complex number")
        if not (0.0 <= self.t <= np.pi / 2):
            raise ValueError("t must lie in [0, pi/2]")
        self.brieskorn.check()


def sigma5_from_pair(p, w) -> np.ndarray:
    """The Sigma^5 representative gamma_(p, w)(pi/2) of a point of S^5."""
    return sp2.horizontal_lift(p, alg.embed(w), np.pi / 2)


def join_to_sigma7(j: JoinPoint, P: sp2.MetricParams | None = None) -> sp2.Sigma7Point:
    """(zeta, b, t) -> [D(theta) gamma_v(t)] with zeta = e^{i theta}, v = psi^{-1}(D(-theta) b).

    The identification S^5 -> Sigma^5, x -> [gamma_x(pi/2)], intertwines the
    nonlinear rotation by theta with left multiplication by D(theta); untwisting
    b by D(-theta) first makes the t = pi/2 end independent of zeta.  psi is the
    trigonometric version, the one that intertwines the O(2) actions exactly.
    """
    if P is not None and P.mu != 1.0:
        raise ValueError("the geodesic join description needs mu = 1")
    theta = float(np.angle(j.circle))
    untwisted = act(IsometryElement(rotation2(-theta), np.eye(3)), j.brieskorn)
    v = psi_trig_inverse(untwisted.to_real())
    gamma = sp2.horizontal_lift(v.p, alg.embed(v.w), j.t)
    return sp2.Sigma7Point(sp2.matmul(sp2.real_matrix(rotation2(theta)), gamma))


def act_on_join(g: IsometryElement, j: JoinPoint) -> JoinPoint:
    theta, eps = o2_decompose(g.o2_part)
    zeta = np.conj(j.circle) if eps else j.circle
    return JoinPoint(np.exp(1j * theta) * zeta, act(g, j.brieskorn), j.t)


def act_on_sigma7(g: IsometryElement, x: sp2.Sigma7Point, q=None) -> sp2.Sigma7Point:
    """(B, +-q) acting by [A] -> [B A diag(1, conj q)]; q recovered from the SO(3) part if omitted."""
    if q is None:
        q = quaternion_from_rotation(g.rot_part)
    return sp2.Sigma7Point(sp2.bullet_act(g.o2_part, q, x.rep))


def quaternion_from_rotation(a) -> np.ndarray:
    """A unit quaternion q with conj_matrix(q) = a (defined up to sign)."""
    a = np.asarray(a, dtype=float)
    w = np.sqrt(max(0.0, 1.0 + np.trace(a))) / 2
    if w > 1e-6:
        v = np.array([a[2, 1] - a[1, 2], a[0, 2] - a[2, 0], a[1, 0] - a[0, 1]]) / (4 * w)
        return np.concatenate([[w], v])
    # rotation by pi: axis from the symmetric part
    sym = (a + np.eye(3)) / 2
    k = int(np.argmax(np.diag(sym)))
    axis = sym[:, k] / np.sqrt(sym[k, k])
    return np.concatenate([[0.0], axis])
