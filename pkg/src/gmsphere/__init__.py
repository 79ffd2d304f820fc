"""Numerical companion to the Gromoll-Meyer sphere: Sp(2) and its biquotient,
Brieskorn spheres, explicit equivariant diffeomorphisms, nonlinear circle
actions, curvature of fixed point sets and free cyclic quotients."""

__version__ = "0.1.0"
