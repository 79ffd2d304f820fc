"""Hypothesis strategies shared by the property tests."""
import numpy as np
from hypothesis import strategies as st

finite = st.floats(-1.0, 1.0, allow_nan=False, allow_infinity=False)
angles = st.floats(-np.pi, np.pi, allow_nan=False)
seeds = st.integers(0, 2**32 - 1)


def vectors(n, lo=-1.0, hi=1.0):
    return st.lists(st.floats(lo, hi, allow_nan=False), min_size=n, max_size=n).map(np.array)


def unit_vectors(n):
    # away from the origin so normalization is well conditioned
    return vectors(n).filter(lambda v: np.linalg.norm(v) > 0.1).map(lambda v: v / np.linalg.norm(v))


def sphere_pairs(n):
    from gmsphere.diffeo import SpherePair

    return unit_vectors(2 * n).map(lambda v: SpherePair(v[:n], v[n:]))


metric_params = st.tuples(st.floats(0.2, 2.0), st.floats(0.2, 2.0))
