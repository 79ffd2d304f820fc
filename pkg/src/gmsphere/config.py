"""Central tolerance record shared by the library, the checks and the tests."""
from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class Tolerances:
    algebraic: float = 1e-12
    unitarity: float = 1e-12
    unit_input: float = 1e-9
    orbit: float = 1e-10
    moves: float = 1e-6
    closed_form: float = 1e-11
    finite_difference: float = 1e-7
    horizontal: float = 1e-8
    negative_control: float = 1e-3
    manifold: float = 1e-10
    brieskorn_psi: float = 1e-12
    brieskorn_trig: float = 1e-11
    round_trip: float = 1e-9
    equivariance_so3: float = 1e-12
    equivariance_g2: float = 1e-9
    cocycle: float = 1e-11
    action_law: float = 1e-10
    intertwining: float = 1e-9
    geodesic_beta: float = 1e-5
    unit_speed: float = 1e-9
    curvature_rel: float = 1e-3
    curvature_ratio_rel: float = 2e-2
    isotropy: float = 1e-12


TOL = Tolerances()
