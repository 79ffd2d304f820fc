"""Registry of numerical checks.

Each check draws its randomness from a stream keyed by (seed, check id), so
running a subset never changes the samples another check sees.  A check
returns an ``Outcome``; whether it passes depends on its ``kind``:

    below    worst < tolerance      (residuals)
    above    worst > tolerance      (structural negatives, displacements)
    at_most  worst <= tolerance     (mismatch counts, exact identities)
"""
from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from fnmatch import fnmatchcase
from typing import Callable, Sequence

import numpy as np

from . import actions, brieskorn as bk, diffeo, quotients, riemann, sp2
from . import algebra as alg
from .config import TOL
from .sp2 import MetricParams

KINDS = ("below", "above", "at_most")


@dataclass(frozen=True)
class CheckContext:
    rng: np.random.Generator
    samples: int
    grid: tuple[MetricParams, ...]
    tolerance: float


@dataclass(frozen=True)
class Outcome:
    worst: float
    samples: int
    detail: str = ""


@dataclass(frozen=True)
class Check:
    id: str
    anchor: str
    func: Callable[[CheckContext], Outcome]
    default_samples: int
    tolerance: float
    kind: str = "below"
    default_grid: tuple[tuple[float, float], ...] = ((0.5, 0.5),)

    def passes(self, worst: float, tolerance: float) -> bool:
        if not np.isfinite(worst):
            return False
        if self.kind == "below":
            return worst < tolerance
        if self.kind == "above":
            return worst > tolerance
        return worst <= tolerance


@dataclass(frozen=True)
class Result:
    check: Check
    outcome: Outcome
    tolerance: float
    passed: bool


REGISTRY: dict[str, Check] = {}


def register(id: str, anchor: str, samples: int, tolerance: float, kind: str = "below",
             grid: Sequence[tuple[float, float]] = ((0.5, 0.5),)):
    if kind not in KINDS:
        raise ValueError(kind)

    def wrap(func):
        if id in REGISTRY:
            raise ValueError(f"duplicate check id {id}")
        REGISTRY[id] = Check(id, anchor, func, samples, tolerance, kind, tuple(grid))
        return func

    return wrap


def stream(seed: int, check_id: str) -> np.random.Generator:
    key = int.from_bytes(hashlib.sha256(check_id.encode()).digest()[:8], "little")
    return np.random.default_rng(np.random.SeedSequence([seed & (2**64 - 1), key]))


def select(patterns: Sequence[str] | None) -> list[Check]:
    """Checks matching any glob, in registration order; KeyError names an unmatched pattern."""
    if not patterns:
        return list(REGISTRY.values())
    for pat in patterns:
        if not any(fnmatchcase(cid, pat) for cid in REGISTRY):
            raise KeyError(pat)
    return [c for cid, c in REGISTRY.items() if any(fnmatchcase(cid, pat) for pat in patterns)]


def run(check: Check, seed: int = 0, samples: int | None = None,
        grid: Sequence[tuple[float, float]] | None = None, tolerance: float | None = None) -> Result:
    tol = check.tolerance if tolerance is None else float(tolerance)
    pairs = check.default_grid if not grid else tuple(grid)
    ctx = CheckContext(
        stream(seed, check.id),
        check.default_samples if samples is None else int(samples),
        tuple(MetricParams(float(m), float(n)) for m, n in pairs),
        tol,
    )
    out = check.func(ctx)
    return Result(check, out, tol, check.passes(out.worst, tol))


def _rel(a: float, b: float) -> float:
    return abs(a - b) / max(abs(b), 1e-12)


def _nus(ctx: CheckContext) -> list[float]:
    return sorted({P.nu for P in ctx.grid})


FIVE = (0.2, 0.5, 1.0, 1.5, 2.0)
GRID_5x5 = tuple((m, n) for m in FIVE for n in FIVE)
GRID_3x3 = tuple((m, n) for m in (0.5, 1.0, 2.0) for n in (0.5, 1.0, 2.0))
FRONTIER_GRID = tuple((m, n) for m in (0.25, 0.5, 0.75, 1.0) for n in (0.25, 0.5, 0.75, 1.0))


# ---------------------------------------------------------------------------
# algebra


@register("algebra.composition", "normed division algebras: |xy| = |x||y|", 1000, 1e-12)
def _composition(ctx):
    worst = 0.0
    for n in (3, 7):
        x = ctx.rng.standard_normal((ctx.samples, n + 1))
        y = ctx.rng.standard_normal((ctx.samples, n + 1))
        lhs = alg.norm(alg.mul(x, y))
        rhs = alg.norm(x) * alg.norm(y)
        worst = max(worst, float(np.max(np.abs(lhs - rhs) / rhs)))
    return Outcome(worst, 2 * ctx.samples, "relative, quaternions and octonions")


@register("algebra.alternative", "octonions are alternative and satisfy the Moufang identity", 1000, 1e-12)
def _alternative(ctx):
    x, y, z = (ctx.rng.standard_normal((ctx.samples, 8)) for _ in range(3))
    m = alg.mul
    left_alt = np.abs(m(m(x, x), y) - m(x, m(x, y))).max()
    moufang = np.abs(m(m(z, m(x, z)), y) - m(z, m(x, m(z, y)))).max()
    scale = float(np.max(alg.norm(x) * alg.norm(z) ** 2 * alg.norm(y)))
    return Outcome(float(max(left_alt, moufang)) / max(scale, 1.0), ctx.samples, "relative to |x||y||z|^2")


@register("algebra.cross_product", "cross products in dimensions 3 and 7: Lagrange identity", 1000, 1e-12)
def _cross(ctx):
    worst = 0.0
    for n in (3, 7):
        x = ctx.rng.standard_normal((ctx.samples, n))
        y = ctx.rng.standard_normal((ctx.samples, n))
        c = alg.cross(x, y)
        lag = alg.dot(c, c) - (alg.dot(x, x) * alg.dot(y, y) - alg.dot(x, y) ** 2)
        orth = np.maximum(np.abs(alg.dot(c, x)), np.abs(alg.dot(c, y)))
        scale = alg.dot(x, x) * alg.dot(y, y)
        worst = max(worst, float(np.max(np.maximum(np.abs(lag), orth) / scale)))
    return Outcome(worst, 2 * ctx.samples)


@register("algebra.trig_quotients", "removable singularities of the trigonometric quotients", 1000, 1e-12)
def _trig(ctx):
    r = ctx.rng.uniform(0.05, 0.95, ctx.samples)
    f1, f2 = alg.safe_trig_quotients(r)
    g = alg.trig_cubic_quotient(r)
    d1 = np.sin(np.pi * r / 2) / r
    d2 = np.cos(np.pi * r / 2) / (1 - r * r)
    dg = (-1 + 4 * r * r + (1 + 2 * r * r) * np.cos(np.pi * r)) / (r * r * (1 - r * r))
    ends = max(abs(float(alg.trig_cubic_quotient(0.0)) - (6 - np.pi**2 / 2)),
               abs(float(alg.trig_cubic_quotient(1.0)) + 2.0))
    worst = max(float(np.abs(f1 - d1).max()), float(np.abs(f2 - d2).max()), float(np.abs(g - dg).max()), ends)
    return Outcome(worst, ctx.samples, "direct formulas away from r = 0, 1; limits at the ends")


# ---------------------------------------------------------------------------
# sp2


@register("sp2.unitarity", "Sp(2) is closed under products and exponentials of sp(2)", 200, TOL.unitarity)
def _unitarity(ctx):
    worst = 0.0
    basis = sp2.sp2_basis()
    for _ in range(ctx.samples):
        a, b = sp2.random_sp2(ctx.rng), sp2.random_sp2(ctx.rng)
        x = sum(c * e for c, e in zip(ctx.rng.standard_normal(10), basis))
        worst = max(worst, sp2.unitarity_residual(sp2.matmul(a, b)), sp2.unitarity_residual(sp2.mat_exp(x)))
    return Outcome(worst, ctx.samples)


@register("sp2.isometric_actions", "the star and bullet actions are isometries of the left-invariant metrics",
          30, 1e-8, grid=GRID_3x3)
def _isometric(ctx):
    worst = 0.0
    basis = sp2.sp2_basis()
    for P in ctx.grid:
        for _ in range(ctx.samples):
            a = sp2.random_sp2(ctx.rng)
            q = sp2.random_unit_quaternion(ctx.rng)
            x, y = (sum(c * e for c, e in zip(ctx.rng.standard_normal(10), basis)) for _ in range(2))
            b = sp2.rotation(ctx.rng.uniform(-np.pi, np.pi))
            worst = max(worst,
                        sp2.action_isometry_residual(P, lambda m: sp2.star_act(q, m), a, x, y),
                        sp2.action_isometry_residual(P, lambda m: sp2.bullet_act(b, q, m), a, x, y))
    return Outcome(worst, ctx.samples * len(ctx.grid), "central differences, step 1e-6")


@register("sp2.horizontal_lift", "the lifted great circles are star-horizontal when mu = 1",
          200, TOL.horizontal, grid=((1.0, 0.3), (1.0, 0.5), (1.0, 1.0)))
def _lift(ctx):
    worst = 0.0
    for nu in _nus(ctx):
        P = MetricParams(1.0, nu)
        for _ in range(ctx.samples):
            p, w = sp2.random_sphere6(ctx.rng)
            t = ctx.rng.uniform(0.0, 2 * np.pi)
            worst = max(worst, sp2.lift_is_horizontal(p, w, t, P), sp2.unitarity_residual(sp2.horizontal_lift(p, w, t)))
    return Outcome(worst, ctx.samples * len(_nus(ctx)), "mu fixed at 1, nu from the grid")


@register("sp2.horizontal_lift_fails", "the same lifts are not horizontal for mu = 2",
          50, TOL.negative_control, kind="above", grid=((2.0, 0.5),))
def _lift_fails(ctx):
    # the structural claim is about a single metric: report the largest defect
    # found along each sampled lift, and the smallest over lifts
    smallest = np.inf
    for nu in _nus(ctx):
        P = MetricParams(2.0, nu)
        for _ in range(ctx.samples):
            p, w = sp2.random_sphere6(ctx.rng)
            defect = max(sp2.lift_is_horizontal(p, w, t, P) for t in (0.4, 1.1, 2.3))
            smallest = min(smallest, defect)
    return Outcome(float(smallest), ctx.samples * len(_nus(ctx)), "min over lifts of the max defect; mu fixed at 2")


@register("sp2.wiedersehen", "for mu = 1 every lift returns to the orbit of -1 at pi and of 1 at 2 pi",
          100, TOL.orbit)
def _wiedersehen(ctx):
    worst = 0.0
    minus, plus = -sp2.identity(), sp2.identity()
    for _ in range(ctx.samples):
        p, w = sp2.random_sphere6(ctx.rng)
        at_pi = sp2.horizontal_lift(p, w, np.pi)
        worst = max(worst,
                    sp2.orbit_residual(at_pi, minus),
                    sp2.orbit_residual(sp2.horizontal_lift(p, w, 2 * np.pi), plus),
                    sp2.orbit_residual(at_pi, sp2.wiedersehen_witness(p, w)))
    return Outcome(worst, ctx.samples, "orbit residual of the star action")


@register("sp2.euler_arnold_alpha", "alpha is a geodesic of every left-invariant metric in the family",
          5, TOL.finite_difference, grid=GRID_5x5)
def _euler_arnold(ctx):
    worst = 0.0
    for P in ctx.grid:
        for s in ctx.rng.uniform(0.0, np.pi, ctx.samples):
            worst = max(worst, sp2.euler_arnold_residual(sp2.normal_geodesic_alpha, P, s),
                        sp2.horizontality_residual(sp2.normal_geodesic_alpha, s, P))
    return Outcome(worst, ctx.samples * len(ctx.grid), "Euler-Arnold and horizontality, central differences")


@register("sp2.euler_arnold_control", "a one-parameter subgroup that is a geodesic only for the biinvariant metric",
          1, 1e-2, kind="above", grid=((1.0, 0.25),))
def _euler_control(ctx):
    x = sp2.diag(sp2.I_Q, 0) + sp2.offdiag(1.0)
    curve = sp2.one_parameter_curve(x)
    bi = sp2.euler_arnold_residual(curve, sp2.BIINVARIANT, 0.4)
    other = min(sp2.euler_arnold_residual(curve, P, 0.4) for P in ctx.grid)
    worst = other if bi < 1e-7 else -np.inf
    return Outcome(float(worst), len(ctx.grid), f"biinvariant residual {bi:.2e}")


@register("sp2.metric_matrix", "closed form of the Killing-field Gram matrix along alpha",
          12, TOL.closed_form, grid=GRID_5x5)
def _metric_matrix(ctx):
    worst = 0.0
    s_values = np.concatenate([[0.0, np.pi / 4, np.pi / 2], ctx.rng.uniform(0.0, np.pi, ctx.samples)])
    for P in ctx.grid:
        for s in s_values:
            worst = max(worst, float(np.abs(sp2.metric_matrix_closed(s, P) - sp2.metric_matrix_direct(s, P)).max()))
    return Outcome(worst, len(s_values) * len(ctx.grid))


@register("sp2.flat_torus", "a flat totally geodesic torus through the star-horizontal directions",
          10, TOL.finite_difference, grid=((0.5, 1.0), (1.0, 0.5), (0.5, 0.5)))
def _flat_torus(ctx):
    worst = 0.0
    off = np.inf
    for P in ctx.grid:
        for a, b in ctx.rng.uniform(0, 2 * np.pi, (ctx.samples, 2)):
            r = sp2.flat_torus_checks(a, b, P)
            worst = max(worst, r.unitarity, r.star_horizontal, r.geodesic)
            off = min(off, r.bullet_horizontal_beta)
    worst = worst if off > 1e-3 else np.inf
    return Outcome(worst, ctx.samples * len(ctx.grid), f"bullet-vertical component of the beta direction >= {off:.3f}")


@register("sp2.fixed_point_sets", "alpha lies in Sigma^5 and the lifts at pi/2 in the +-1 fixed set",
          20, 0.0, kind="at_most")
def _fixed_sets(ctx):
    misses = 0
    for s in ctx.rng.uniform(0.0, 2 * np.pi, ctx.samples):
        misses += not sp2.in_sigma5(sp2.normal_geodesic_alpha(s))
    for _ in range(ctx.samples):
        misses += not sp2.in_sigma6_pm1(sp2.horizontal_lift(*sp2.random_sphere6(ctx.rng), np.pi / 2))
    misses += not sp2.in_sigma1(sp2.identity())
    misses += sp2.in_sigma1(sp2.random_sp2(ctx.rng))
    return Outcome(float(misses), 2 * ctx.samples + 2, "membership failures")


# ---------------------------------------------------------------------------
# brieskorn


@register("brieskorn.action", "O(2) x SO(n) acts on W by a group action", 200, TOL.action_law)
def _bk_action(ctx):
    worst = 0.0
    for n in (3, 7):
        for _ in range(ctx.samples):
            x = bk.random_point(ctx.rng, n)
            g = _random_group_element(ctx.rng, n)
            h = _random_group_element(ctx.rng, n)
            gx = bk.act(g, x)
            worst = max(worst, gx.max_residual(), bk.act(g @ h, x).distance(bk.act(g, bk.act(h, x))))
    return Outcome(worst, 2 * ctx.samples, "on-manifold residual and group law, n = 3 and 7")


def _random_group_element(rng, n: int) -> bk.IsometryElement:
    if n == 3:
        return bk.random_element(rng)
    b = bk.rotation2(rng.uniform(-np.pi, np.pi)) @ (bk.REFLECTION if rng.integers(2) else np.eye(2))
    return bk.IsometryElement(b, bk.g2_sample(rng))


@register("brieskorn.beta_geodesic", "beta is a unit-speed geodesic normal to the orbits",
          100, TOL.geodesic_beta)
def _beta(ctx):
    worst_acc, worst_speed, worst_perp = 0.0, 0.0, 0.0
    for s in ctx.rng.uniform(0.0, 2 * np.pi, ctx.samples):
        r = bk.beta_geodesic_residual(s)
        worst_acc = max(worst_acc, r.tangential_acceleration)
        worst_speed = max(worst_speed, r.speed_error, bk.beta(s).max_residual())
        worst_perp = max(worst_perp, r.orbit_perpendicularity)
    # speed and orthogonality are analytic, so they get the tight tolerance
    ok = worst_speed < TOL.unit_speed and worst_perp < TOL.unit_speed
    return Outcome(worst_acc if ok else np.inf, ctx.samples,
                   f"speed {worst_speed:.1e}, orbit inner products {worst_perp:.1e}")


@register("brieskorn.isotropy_members", "listed isotropy elements fix beta at generic s, s = 0 and s = pi/4",
          3, TOL.isotropy)
def _iso_members(ctx):
    worst = 0.0
    s_values = [0.0, np.pi / 4] + list(ctx.rng.uniform(0.05, np.pi / 4 - 0.05, ctx.samples))
    for s in s_values:
        worst = max(worst, bk.isotropy_verify(s, ctx.rng, samples=1).max_fixed_residual)
    return Outcome(worst, len(s_values), "H, K- and K+ (K+ with +3 theta)")


@register("brieskorn.isotropy_nonmembers", "random group elements move the geodesic points",
          100, TOL.moves, kind="above")
def _iso_nonmembers(ctx):
    moved = np.inf
    for s in (0.3, 0.0, np.pi / 4):
        moved = min(moved, bk.isotropy_verify(s, ctx.rng, samples=ctx.samples).min_random_displacement)
    return Outcome(float(moved), 3 * ctx.samples, "minimum displacement")


@register("brieskorn.g2", "exponentials of octonion derivations are automorphisms", 100, TOL.equivariance_g2)
def _g2(ctx):
    worst = 0.0
    for _ in range(ctx.samples):
        g = bk.g2_sample(ctx.rng)
        worst = max(worst, bk.g2_residual(g, ctx.rng), float(np.abs(g.T @ g - np.eye(7)).max()))
    return Outcome(worst, ctx.samples)


# ---------------------------------------------------------------------------
# diffeo


def _pairs(rng, n: int, count: int):
    v = rng.standard_normal((count, 2 * n))
    v /= np.linalg.norm(v, axis=1, keepdims=True)
    return v[:, :n], v[:, n:]


def _real_residuals(x0, y0, x, y):
    r1 = alg.dot(x, x) - 2 / 9 * (1 - 2 * x0**3 + 6 * x0 * y0**2 - 3 * x0**2 - 3 * y0**2)
    r2 = alg.dot(y, y) - 2 / 9 * (1 + 2 * x0**3 - 6 * x0 * y0**2 - 3 * x0**2 - 3 * y0**2)
    r3 = alg.dot(x, y) - 4 / 9 * y0 * (y0**2 - 3 * x0**2)
    return np.max(np.abs([r1, r2, r3]), axis=0)


@register("diffeo.on_brieskorn", "psi and its trigonometric version land on W", 10000, TOL.brieskorn_psi)
def _on_brieskorn(ctx):
    worst = 0.0
    for n in (3, 7):
        p, w = _pairs(ctx.rng, n, ctx.samples)
        for trig in (False, True):
            worst = max(worst, float(_real_residuals(*diffeo.psi_arrays(p, w, trig)).max()))
    return Outcome(worst, 2 * ctx.samples, "n = 3 and 7, both versions")


@register("diffeo.round_trip", "the frame-system inverse undoes psi", 10000, TOL.round_trip)
def _round_trip(ctx):
    worst = 0.0
    for n in (3, 7):
        for _ in range(ctx.samples):
            x = diffeo.SpherePair.random(ctx.rng, n)
            worst = max(worst, diffeo.psi_inverse(diffeo.psi(x)).distance(x),
                        diffeo.psi_trig_inverse(diffeo.psi_trig(x)).distance(x))
    return Outcome(worst, 2 * ctx.samples, "n = 3 and 7, both versions")


@register("diffeo.determinant_bound", "the frame determinant is at least 256 / (9 (3 - 2 x0)^8)",
          10000, 1e-12)
def _det_bound(ctx):
    worst = -np.inf
    ratio = np.inf
    for n in (3, 7):
        p, w = _pairs(ctx.rng, n, ctx.samples)
        x0 = 0.5 * (alg.dot(w, w) - alg.dot(p, p))
        y0 = -alg.dot(p, w)
        for a, b in zip(x0, y0):
            det = float(np.linalg.det(diffeo.frame_matrix(diffeo.rational_coefficients, a, b)))
            bound = diffeo.determinant_bound(a)
            worst = max(worst, (bound - det) / bound)
            ratio = min(ratio, det / bound)
    return Outcome(float(worst), 2 * ctx.samples, f"largest relative shortfall; min det/bound {ratio:.4f}")


@register("diffeo.equivariance_so3", "psi commutes with the diagonal SO(3) action", 1000, TOL.equivariance_so3)
def _eq_so3(ctx):
    worst = 0.0
    for _ in range(ctx.samples):
        x = diffeo.SpherePair.random(ctx.rng, 3)
        g = alg.conj_matrix(alg.random_unit(ctx.rng, 3))
        worst = max(worst, diffeo.equivariance_check(g, x), diffeo.equivariance_check(g, x, trig=True))
    return Outcome(worst, ctx.samples)


@register("diffeo.equivariance_g2", "psi commutes with the diagonal G2 action", 100, TOL.equivariance_g2)
def _eq_g2(ctx):
    worst = 0.0
    for _ in range(ctx.samples):
        g = bk.g2_sample(ctx.rng)
        for _ in range(5):
            x = diffeo.SpherePair.random(ctx.rng, 7)
            worst = max(worst, diffeo.equivariance_check(g, x), diffeo.equivariance_check(g, x, trig=True))
    return Outcome(worst, ctx.samples, "5 points per automorphism")


@register("diffeo.partial_map", "the cross-product free map lands on W in every dimension", 500, TOL.brieskorn_psi)
def _partial(ctx):
    worst = 0.0
    for n in (2, 3, 5, 9):
        for _ in range(ctx.samples):
            worst = max(worst, diffeo.partial_injective(diffeo.SpherePair.random(ctx.rng, n)).max_residual())
    return Outcome(worst, 4 * ctx.samples, "n = 2, 3, 5, 9")


@register("diffeo.span", "x and y lie in the span of p, w and p x w", 500, TOL.algebraic)
def _span(ctx):
    worst = 0.0
    for n in (3, 7):
        for _ in range(ctx.samples):
            x = diffeo.SpherePair.random(ctx.rng, n)
            worst = max(worst, diffeo.span_residual(x), diffeo.span_residual(x, trig=True))
    return Outcome(worst, 2 * ctx.samples)


# ---------------------------------------------------------------------------
# actions


def _angles(rng, count):
    return rng.uniform(-np.pi, np.pi, (count, 2))


@register("actions.cocycle", "Q(x, theta) Q(x_theta, tau) = Q(x, theta + tau)", 500, TOL.cocycle)
def _cocycle(ctx):
    worst = 0.0
    for n in (3, 7):
        for th, tau in _angles(ctx.rng, ctx.samples):
            x = diffeo.SpherePair.random(ctx.rng, n)
            worst = max(worst, actions.cocycle_residual(x, th, tau))
    return Outcome(worst, 2 * ctx.samples, "n = 3 and 7")


@register("actions.q_expansion", "the four-term expansion of Q agrees with its defining product",
          500, TOL.cocycle)
def _q_raw(ctx):
    worst = 0.0
    for m in (0, 1, 2):
        for th, _ in _angles(ctx.rng, ctx.samples):
            x = diffeo.SpherePair.random(ctx.rng, 3)
            worst = max(worst, float(np.abs(actions.q_map(x, th, m) - actions.q_map_raw(x, th, m)).max()))
    return Outcome(worst, 3 * ctx.samples, "twist m = 0, 1, 2")


@register("actions.action_law", "the nonlinear rotations form an SO(2) action", 500, TOL.action_law)
def _action_law(ctx):
    worst = 0.0
    for n, m in ((3, 0), (7, 0), (3, 1), (3, 2)):
        for th, tau in _angles(ctx.rng, ctx.samples):
            x = diffeo.SpherePair.random(ctx.rng, n)
            y = actions.nonlinear_rotate(x, th, m)
            worst = max(worst, actions.action_law_residual(x, th, tau, m),
                        abs(float(y.vector() @ y.vector()) - 1.0),
                        actions.nonlinear_rotate(x, 2 * np.pi, m).distance(x))
    return Outcome(worst, 4 * ctx.samples, "n = 3, 7 untwisted; n = 3 twisted m = 1, 2")


@register("actions.involution", "the rotation by pi is an involution", 500, TOL.action_law)
def _involution(ctx):
    worst = 0.0
    for n in (3, 7):
        for _ in range(ctx.samples):
            x = diffeo.SpherePair.random(ctx.rng, n)
            worst = max(worst, actions.involution(actions.involution(x)).distance(x))
    return Outcome(worst, 2 * ctx.samples)


@register("actions.dihedral", "with (p, w) -> (p, -w) the rotations generate an O(2) action",
          500, TOL.action_law)
def _dihedral(ctx):
    worst = 0.0
    for n in (3, 7):
        for th, _ in _angles(ctx.rng, ctx.samples):
            worst = max(worst, actions.dihedral_residual(diffeo.SpherePair.random(ctx.rng, n), th))
    return Outcome(worst, 2 * ctx.samples)


@register("actions.equivariance", "the nonlinear rotations commute with SO(3) and G2", 200, TOL.intertwining)
def _act_eq(ctx):
    worst = 0.0
    for th, _ in _angles(ctx.rng, ctx.samples):
        g3 = alg.conj_matrix(alg.random_unit(ctx.rng, 3))
        worst = max(worst, actions.equivariance_residual(diffeo.SpherePair.random(ctx.rng, 3), th, g3),
                    actions.equivariance_residual(diffeo.SpherePair.random(ctx.rng, 7), th, bk.g2_sample(ctx.rng)))
    return Outcome(worst, 2 * ctx.samples)


@register("actions.brieskorn_intertwining", "psi carries the nonlinear O(2) action to the linear one on W",
          500, TOL.intertwining)
def _intertwining(ctx):
    worst = 0.0
    for n in (3, 7):
        for th, _ in _angles(ctx.rng, ctx.samples):
            x = diffeo.SpherePair.random(ctx.rng, n)
            worst = max(worst,
                        actions.brieskorn_equivalence_residual(x, th),
                        actions.brieskorn_equivalence_residual(x, np.pi),
                        actions.reflection_residual(x),
                        actions.calabi_residual(x))
    return Outcome(worst, 2 * ctx.samples, "rotations, theta = pi, reflection and the Calabi involution")


@register("actions.normal_curve", "the normal curve maps onto a rotated copy of beta", 200, TOL.intertwining)
def _normal_curve(ctx):
    rot = actions.normal_curve_identification()
    worst = float(np.abs(rot - actions.NORMAL_CURVE_ROTATION).max())
    for s in ctx.rng.uniform(0.0, np.pi, ctx.samples):
        worst = max(worst, actions.normal_curve_residual(s))
    return Outcome(worst, ctx.samples, "rotation fitted by Procrustes equals diag(-1, 1, -1)")


@register("actions.nonlinear", "the rotation is not linear", 1, TOL.negative_control, kind="above")
def _nonlinear(ctx):
    _, _, gap = actions.nonlinearity_witness()
    return Outcome(gap, 1)


# ---------------------------------------------------------------------------
# riemann


@register("riemann.engine", "curvature engine on model spaces: S^2, S^3, H^2, flat", 5, 1e-6)
def _engine(ctx):
    worst = 0.0
    for _ in range(ctx.samples):
        a, b = ctx.rng.uniform(0.3, 1.2, 2)
        worst = max(worst,
                    abs(riemann.gauss_curvature(riemann.round_sphere2(), [a + 0.3, b]) - 1.0),
                    abs(riemann.gauss_curvature(riemann.hyperbolic_plane(), [b, a]) + 1.0),
                    abs(riemann.scalar(riemann.round_sphere3(), [a, b, 0.0]) - 6.0) / 6.0,
                    abs(riemann.scalar(riemann.euclidean(3), [a, b, 0.0])))
        rm = riemann.riemann_tensor(riemann.round_sphere3(), [a, b, 0.0])
        lo, hi = riemann.sectional_extremes_at(rm, riemann.round_sphere3()([a, b, 0.0]))
        worst = max(worst, abs(lo - 1.0), abs(hi - 1.0), riemann.bianchi_residual(rm))
    return Outcome(worst, ctx.samples)


@register("riemann.sigma2", "Gauss curvature of Sigma^2 at s = 0, pi/4, pi/2", 1, TOL.curvature_rel,
          grid=GRID_3x3)
def _sigma2(ctx):
    worst = 0.0
    for P in ctx.grid:
        closed = riemann.sigma2_curvature_closed(P)
        numeric = riemann.sigma2_curvature_numeric(P)
        worst = max(worst, max(_rel(numeric[k], closed[k]) for k in closed))
    return Outcome(worst, len(ctx.grid), "relative error")


@register("riemann.sigma2_negative", "Sigma^2 has a point of negative curvature for every metric",
          1, 0.0, kind="above", grid=GRID_5x5)
def _sigma2_neg(ctx):
    smallest = np.inf
    for P in ctx.grid:
        k = riemann.gauss_curvature(riemann.sigma2_metric(P), [np.pi / 2, 0.0])
        smallest = min(smallest, -k)
    return Outcome(float(smallest), len(ctx.grid), "min over metrics of -K(pi/2)")


@register("riemann.sigma31", "Sigma^3_1 curvature bounds", 1, TOL.curvature_rel, grid=GRID_3x3)
def _sigma31(ctx):
    worst = 0.0
    ts = np.linspace(0.05, np.pi / 2, 12)
    for P in ctx.grid:
        M = riemann.sigma31_metric(P)
        blo, bhi = riemann.sigma31_bounds(P)

        def extremes(t):
            x = [t, np.pi / 2, 0.0]
            return riemann.sectional_extremes_at(riemann.riemann_tensor(M, x), M(x))

        values = np.array([extremes(t) for t in ts])
        # the minimum is attained at t = pi/2; the supremum is the t -> 0 limit,
        # approached quadratically in t
        top = (4 * extremes(0.01)[1] - extremes(0.02)[1]) / 3
        inside = values.min() >= blo * (1 - TOL.curvature_rel) and values.max() <= bhi * (1 + TOL.curvature_rel)
        worst = max(worst, _rel(values.min(), blo), _rel(top, bhi), 0.0 if inside else np.inf)
    return Outcome(worst, len(ctx.grid), "min at t = pi/2, supremum extrapolated to t -> 0")


@register("riemann.sigma32_scalar", "scalar curvature of Sigma^3_2 for mu = 1 as a function of omega",
          8, TOL.curvature_rel, grid=((1.0, 0.5), (1.0, 1.0), (1.0, 0.25)))
def _sigma32_scalar(ctx):
    worst = 0.0
    for nu in _nus(ctx):
        M = riemann.sigma32_metric(MetricParams(1.0, nu))
        for om, ps in zip(ctx.rng.uniform(0.0, 1.4, ctx.samples), ctx.rng.uniform(0.4, np.pi - 0.4, ctx.samples)):
            x = riemann.hemisphere_point(om, ps)
            num = riemann.scalar(M, x)
            worst = max(worst, _rel(num, riemann.sigma32_scalar_mu1_closed(om, nu)))
    return Outcome(worst, ctx.samples * len(_nus(ctx)), "mu fixed at 1; overall sign corrected")


@register("riemann.sigma32_ambient", "Sigma^3_2 is totally geodesic: intrinsic and ambient curvature agree",
          2, TOL.curvature_rel, grid=((1.0, 0.5),))
def _sigma32_ambient(ctx):
    worst = 0.0
    for P in ctx.grid:
        M = riemann.sigma32_metric(P)
        for om, ps in zip(ctx.rng.uniform(0.2, 1.2, ctx.samples), ctx.rng.uniform(0.5, 2.5, ctx.samples)):
            x = riemann.hemisphere_point(om, ps)
            x[2] = 0.3
            rm, g = riemann.ambient_curvature(P, riemann.sigma32_chart, x)
            worst = max(worst, _rel(riemann.scalar_from(rm, g), riemann.scalar(M, x)))
    return Outcome(worst, ctx.samples * len(ctx.grid), "scalar curvature through a 7-dim chart of Sigma^7")


@register("riemann.sigma32_extremes", "min K of Sigma^3_2 and min/max = 1/145 for mu = nu = 1/2",
          12, TOL.curvature_ratio_rel)
def _sigma32_extremes(ctx):
    worst = 0.0
    notes = []
    for P in ctx.grid:
        lo, hi, _, _ = riemann.min_max_sectional(riemann.sigma32_metric(P), riemann.sigma32_grid(ctx.samples))
        closed = riemann.sigma32_min_k_closed(P)
        worst = max(worst, _rel(lo, closed))
        if P.mu == 0.5 and P.nu == 0.5:
            worst = max(worst, _rel(lo / hi, 1 / 145))
        notes.append(f"({P.mu:g},{P.nu:g}): min {lo:.5f} max {hi:.4f}")
    return Outcome(worst, len(ctx.grid), "; ".join(notes))


@register("riemann.sigma32_frontier", "the sign of min K on Sigma^3_2 follows 12 - 8(mu + nu) - 3 mu nu",
          10, 0.0, kind="at_most", grid=FRONTIER_GRID)
def _frontier(ctx):
    misses = 0
    for P in ctx.grid:
        lo, _, _, _ = riemann.min_max_sectional(riemann.sigma32_metric(P), riemann.sigma32_grid(ctx.samples))
        misses += (lo >= 0) != (riemann.nonnegativity_frontier(P) >= 0)
    return Outcome(float(misses), len(ctx.grid), "sign mismatches")


@register("riemann.sigma32_deck", "the deck map of the Sigma^3_2 chart is an isometry", 200, TOL.algebraic,
          grid=GRID_3x3)
def _deck(ctx):
    worst = 0.0
    for P in ctx.grid:
        for t, th, ph in zip(ctx.rng.uniform(0.2, 2.9, ctx.samples), ctx.rng.uniform(0.2, 2.9, ctx.samples),
                             ctx.rng.uniform(0, 2 * np.pi, ctx.samples)):
            worst = max(worst, riemann.sigma32_deck_residual([t, th, ph], P))
    return Outcome(worst, ctx.samples * len(ctx.grid))


@register("riemann.hemisphere", "curvature of the orbit hemisphere; constant exactly when mu = 1",
          10, TOL.curvature_rel, grid=((1.0, 0.5), (0.5, 0.5), (2.0, 1.0)))
def _hemisphere(ctx):
    worst = 0.0
    for P in ctx.grid:
        H = riemann.hemisphere_metric(P)
        values = []
        for om, ps in zip(ctx.rng.uniform(0.0, 1.4, ctx.samples), ctx.rng.uniform(0.4, np.pi - 0.4, ctx.samples)):
            k = riemann.gauss_curvature(H, riemann.hemisphere_point(om, ps)[:2])
            worst = max(worst, _rel(k, riemann.hemisphere_curvature_closed(om, P.mu)))
            values.append(k)
        spread = (max(values) - min(values)) / max(abs(np.mean(values)), 1e-12)
        if P.mu == 1.0:
            worst = max(worst, spread, _rel(float(np.mean(values)), 1.0))
        elif spread < 1e-2:
            # nonconstant closed form: the sample must show variation
            worst = np.inf
    return Outcome(worst, ctx.samples * len(ctx.grid), "relative to the closed form")


@register("riemann.berger", "Berger extremes of Sigma^3_0, L^3 and P^3", 1, TOL.curvature_rel, grid=GRID_3x3)
def _berger(ctx):
    worst = 0.0
    for P in ctx.grid:
        for entry in riemann.berger_verifications(P):
            worst = max(worst, entry.rel_error)
    return Outcome(worst, len(ctx.grid))


@register("riemann.l3", "L^3 extremes; constant curvature 1 at mu = 1, nu = 1/2", 1, TOL.curvature_rel,
          grid=((1.0, 0.5), (0.5, 0.5)))
def _l3(ctx):
    worst = 0.0
    notes = []
    for P in ctx.grid:
        M = riemann.metric_by_id("l3", P)
        lows, highs = [], []
        for x in riemann.BERGER_POINTS:
            lo, hi = riemann.sectional_extremes_at(riemann.riemann_tensor(M, x), M(x))
            lows.append(lo)
            highs.append(hi)
        clo, chi = riemann.l3_extremes_closed(P)
        lo, hi = min(lows), max(highs)
        worst = max(worst, _rel(lo, clo), _rel(hi, chi))
        if P.mu == 1.0 and P.nu == 0.5:
            worst = max(worst, abs(lo - 1.0), abs(hi - 1.0))
        notes.append(f"({P.mu:g},{P.nu:g}): [{lo:.6f}, {hi:.6f}]")
    return Outcome(worst, len(ctx.grid), "; ".join(notes))


# ---------------------------------------------------------------------------
# quotients


FREENESS_CASES = tuple((m, p, q) for m in range(1, 13) for p in range(-6, 7) for q in range(-6, 7))


@register("quotients.freeness", "the freeness predicate agrees with a fixed-point search",
          len(FREENESS_CASES), 0.0, kind="at_most")
def _freeness(ctx):
    cases = FREENESS_CASES
    if ctx.samples < len(cases):
        idx = np.sort(ctx.rng.choice(len(cases), ctx.samples, replace=False))
        cases = tuple(cases[i] for i in idx)
    misses = []
    for m, p, q in cases:
        params = quotients.LensActionParams(m, p, q)
        if quotients.is_free(params) != quotients.fixed_point_oracle(params):
            misses.append((m, p, q))
    return Outcome(float(len(misses)), len(cases), f"mismatches {misses[:5]}" if misses else "m <= 12, |p|, |q| <= 6")


def _random_params(rng) -> quotients.LensActionParams:
    return quotients.LensActionParams(int(rng.integers(2, 13)), int(rng.integers(-6, 7)), int(rng.integers(-6, 7)))


@register("quotients.phi_equivariance", "phi has unit norm and weights (3p, 3p + q, 3p - q)", 1000, TOL.algebraic)
def _phi_eq(ctx):
    worst = 0.0
    for _ in range(ctx.samples):
        x = bk.random_point(ctx.rng, 3)
        params = _random_params(ctx.rng)
        worst = max(worst, abs(float(np.linalg.norm(quotients.phi(x))) - 1.0),
                    quotients.phi_equivariance_residual(params, x))
    return Outcome(worst, ctx.samples)


@register("quotients.phi_deck", "phi is invariant under z0 -> e^{2 pi i/3} z0", 1000, 0.0, kind="at_most")
def _phi_deck(ctx):
    worst = 0.0
    for _ in range(ctx.samples):
        x = bk.random_point(ctx.rng, 3)
        base = quotients.phi(x)
        for k in (1, 2):
            worst = max(worst, float(np.abs(quotients.phi(bk.deck_rotation(x, k)) - base).max()))
    return Outcome(worst, ctx.samples, "bitwise equality expected")


def _branch_point(rng) -> bk.BrieskornPoint:
    a, b = rng.standard_normal((2, 3))
    a /= np.linalg.norm(a)
    b -= (b @ a) * a
    b /= np.linalg.norm(b)
    return bk.BrieskornPoint(0.0, (2.0 / 3.0) * (a + 1j * b) / np.sqrt(2.0))


@register("quotients.fibers", "phi is 3:1 off the branch locus z0 = 0 and 1:1 on it", 200, 0.0, kind="at_most")
def _fibers(ctx):
    misses = 0
    worst = 0.0
    for _ in range(ctx.samples):
        x = bk.random_point(ctx.rng, 3)
        fib = quotients.fiber(quotients.phi(x))
        misses += len(fib) != 3
        # the inverse of a 3:1 branched cover loses accuracy like eps / |z0|^2 near the branch locus
        conditioning = 4 * np.finfo(float).eps / (3.0 * abs(x.z0) ** 2)
        worst = max(worst, min(x.distance(f) for f in fib) - conditioning)
        worst = max(worst, max(float(np.abs(quotients.phi(f) - quotients.phi(x)).max()) for f in fib))
        y = _branch_point(ctx.rng)
        misses += quotients.fiber_count(quotients.phi(y)) != 1
    misses += worst > TOL.round_trip
    return Outcome(float(misses), 2 * ctx.samples, f"count mismatches; conditioned fiber reconstruction {worst:.1e}")


@register("quotients.join", "join coordinates for Sigma^7 are O(2) x SO(3) equivariant", 100, TOL.intertwining)
def _join(ctx):
    worst = 0.0
    for _ in range(ctx.samples):
        j = quotients.JoinPoint(np.exp(1j * ctx.rng.uniform(-np.pi, np.pi)), bk.random_point(ctx.rng, 3),
                                ctx.rng.uniform(0.0, np.pi / 2))
        g = bk.random_element(ctx.rng)
        a = quotients.act_on_sigma7(g, quotients.join_to_sigma7(j))
        b = quotients.join_to_sigma7(quotients.act_on_join(g, j))
        worst = max(worst, sp2.orbit_residual(a.rep, b.rep))
    return Outcome(worst, ctx.samples, "orbit residual")


@register("quotients.join_ends", "the join collapses the W factor at t = 0 and the circle at t = pi/2",
          50, TOL.intertwining)
def _join_ends(ctx):
    worst = 0.0
    misses = 0
    for _ in range(ctx.samples):
        b1, b2 = bk.random_point(ctx.rng, 3), bk.random_point(ctx.rng, 3)
        z1, z2 = np.exp(1j * ctx.rng.uniform(-np.pi, np.pi, 2))
        start = [quotients.join_to_sigma7(quotients.JoinPoint(z1, b, 0.0)).rep for b in (b1, b2)]
        end = [quotients.join_to_sigma7(quotients.JoinPoint(z, b1, np.pi / 2)) for z in (z1, z2)]
        worst = max(worst, sp2.orbit_residual(*start), sp2.orbit_residual(end[0].rep, end[1].rep))
        misses += not sp2.in_sigma5(end[0].rep)
    return Outcome(worst if misses == 0 else np.inf, ctx.samples)


@register("quotients.rho", "the join map rho has degree r on the circle factor", 200, TOL.algebraic)
def _rho(ctx):
    worst = 0.0
    for _ in range(ctx.samples):
        v = ctx.rng.standard_normal(3) + 1j * ctx.rng.standard_normal(3)
        v /= np.linalg.norm(v)
        r = int(ctx.rng.integers(1, 8))
        out = quotients.rho(r, v)
        lam = v[0] / abs(v[0])
        worst = max(worst, abs(float(np.linalg.norm(out)) - 1.0),
                    abs(out[0] - abs(v[0]) * lam**r), float(np.abs(out[1:] - v[1:]).max()))
    for m in (2, 4, 5, 7, 8, 10, 11):
        worst = max(worst, float((3 * quotients.degree_inverse_of_three(m) - 1) % m))
    return Outcome(worst, ctx.samples)
