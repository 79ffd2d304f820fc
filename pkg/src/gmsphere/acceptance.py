"""The nine acceptance criteria, each a bundle of registered checks run at the
stated sample counts, grids and tolerances."""
from __future__ import annotations

from dataclasses import dataclass

from . import checks


@dataclass(frozen=True)
class Item:
    check_id: str
    samples: int | None = None
    grid: tuple[tuple[float, float], ...] | None = None


@dataclass(frozen=True)
class Criterion:
    number: int
    title: str
    items: tuple[Item, ...]


@dataclass(frozen=True)
class CriterionResult:
    criterion: Criterion
    results: tuple[checks.Result, ...]

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        parts = ", ".join(f"{r.check.id}={r.outcome.worst:.2e}{'' if r.passed else '!'}" for r in self.results)
        return f"criterion {self.criterion.number} {status}: {self.criterion.title} [{parts}]"


CRITERIA = (
    Criterion(1, "diffeomorphism residuals, inverse round trip, determinant bound", (
        Item("diffeo.on_brieskorn", 10_000),
        Item("diffeo.round_trip", 10_000),
        Item("diffeo.determinant_bound", 10_000),
    )),
    Criterion(2, "SO(3) and G2 equivariance of psi", (
        Item("diffeo.equivariance_so3", 1_000),
        Item("diffeo.equivariance_g2", 100),
    )),
    Criterion(3, "Q cocycle, action law, involution, Brieskorn intertwining", (
        Item("actions.cocycle", 1_000),
        Item("actions.action_law", 1_000),
        Item("actions.involution", 1_000),
        Item("actions.brieskorn_intertwining", 1_000),
    )),
    Criterion(4, "geodesics beta and alpha, horizontal lifts, return property", (
        Item("brieskorn.beta_geodesic", 1_000),
        Item("sp2.euler_arnold_alpha", 5, checks.GRID_5x5),
        Item("sp2.horizontal_lift", 1_000),
        Item("sp2.wiedersehen", 100),
    )),
    Criterion(5, "closed-form Killing Gram matrix", (
        Item("sp2.metric_matrix", 12, checks.GRID_5x5),
    )),
    Criterion(6, "isotropy tables", (
        Item("brieskorn.isotropy_members", 10),
        Item("brieskorn.isotropy_nonmembers", 100),
    )),
    Criterion(7, "curvature reproduction", (
        Item("riemann.sigma2", grid=checks.GRID_3x3),
        Item("riemann.sigma32_scalar", 8),
        Item("riemann.sigma32_ambient", 2),
        Item("riemann.sigma32_extremes", 12, ((0.5, 0.5),)),
        Item("riemann.berger", grid=checks.GRID_3x3),
        Item("riemann.l3", grid=((1.0, 0.5), (0.5, 0.5), (2.0, 1.0))),
        Item("riemann.hemisphere", 10),
    )),
    Criterion(8, "freeness predicate, branched covering phi", (
        Item("quotients.freeness"),
        Item("quotients.phi_equivariance", 1_000),
        Item("quotients.phi_deck", 1_000),
        Item("quotients.fibers", 200),
    )),
    Criterion(9, "structural negatives", (
        Item("sp2.horizontal_lift_fails", 100),
        Item("riemann.sigma2_negative", grid=checks.GRID_5x5),
        Item("riemann.sigma32_frontier", 10, checks.FRONTIER_GRID),
    )),
)


def run_criterion(c: Criterion, seed: int = 0) -> CriterionResult:
    results = tuple(
        checks.run(checks.REGISTRY[item.check_id], seed=seed, samples=item.samples, grid=item.grid)
        for item in c.items
    )
    return CriterionResult(c, results)


def run_all(seed: int = 0) -> list[CriterionResult]:
    return [run_criterion(c, seed) for c in CRITERIA]
