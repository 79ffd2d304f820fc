"""Quaternion and octonion arithmetic on numpy arrays.

Elements are float arrays whose last axis holds the components, scalar part
first: length 4 for quaternions, length 8 for octonions.  All functions
broadcast over leading axes.  Octonions are built from pairs of quaternions
by Cayley-Dickson doubling with

    (a, b)(c, d) = (ac - conj(d) b,  d a + b conj(c)).

Imaginary vectors (``ImVec``) are plain arrays of length 3 or 7; ``embed``
puts them into the algebra with zero scalar part.
"""
from __future__ import annotations

import numpy as np

UNIT_TOL = 1e-9


def qmul(a, b):
    """Hamilton product of quaternion arrays (..., 4)."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    a0, a1, a2, a3 = np.moveaxis(a, -1, 0)
    b0, b1, b2, b3 = np.moveaxis(b, -1, 0)
    return np.stack(
        [
            a0 * b0 - a1 * b1 - a2 * b2 - a3 * b3,
            a0 * b1 + a1 * b0 + a2 * b3 - a3 * b2,
            a0 * b2 - a1 * b3 + a2 * b0 + a3 * b1,
            a0 * b3 + a1 * b2 - a2 * b1 + a3 * b0,
        ],
        axis=-1,
    )


def conj(a):
    a = np.asarray(a, dtype=float)
    out = -a
    out[..., 0] = a[..., 0]
    return out


def omul(x, y):
    """Octonion product of arrays (..., 8) by Cayley-Dickson doubling."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    a, b = x[..., :4], x[..., 4:]
    c, d = y[..., :4], y[..., 4:]
    return np.concatenate(
        [qmul(a, c) - qmul(conj(d), b), qmul(d, a) + qmul(b, conj(c))], axis=-1
    )


def mul(a, b):
    """Product in whichever algebra the trailing axis selects (4 or 8)."""
    a = np.asarray(a, dtype=float)
    n = a.shape[-1]
    if n == 4:
        return qmul(a, b)
    if n == 8:
        return omul(a, b)
    raise ValueError(f"expected 4 or 8 components, got {n}")


def mul_chain(*factors):
    """Left-to-right product ``((f0 f1) f2) ...``.

    Only use on factors from a subalgebra generated by two elements, where
    Artin's theorem makes the bracketing irrelevant for octonions too.
    """
    out = factors[0]
    for f in factors[1:]:
        out = mul(out, f)
    return out


def norm(a):
    return np.linalg.norm(np.asarray(a, dtype=float), axis=-1)


def inv(a):
    a = np.asarray(a, dtype=float)
    return conj(a) / np.sum(a * a, axis=-1, keepdims=True)


def real(a):
    return np.asarray(a, dtype=float)[..., 0]


def imag(a):
    return np.asarray(a, dtype=float)[..., 1:]


def embed(v):
    """Imaginary vector (..., 3|7) -> algebra element (..., 4|8)."""
    v = np.asarray(v, dtype=float)
    if v.shape[-1] not in (3, 7):
        raise ValueError(f"imaginary vectors have 3 or 7 components, got {v.shape[-1]}")
    zero = np.zeros(v.shape[:-1] + (1,))
    return np.concatenate([zero, v], axis=-1)


def one(n: int):
    """Unit element of the algebra with imaginary dimension ``n``."""
    e = np.zeros(n + 1)
    e[0] = 1.0
    return e


def basis(n: int, k: int):
    """k-th imaginary unit (1-based) of the algebra with imaginary dimension n."""
    e = np.zeros(n + 1)
    e[k] = 1.0
    return e


def dot(a, b):
    return np.sum(np.asarray(a, dtype=float) * np.asarray(b, dtype=float), axis=-1)


def cross(a, b):
    """Cross product on R^3 or R^7: the imaginary part of the product of a and b."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape[-1] != b.shape[-1]:
        raise ValueError("cross product needs vectors of the same dimension")
    return imag(mul(embed(a), embed(b)))


def sphere_exp(p, t=1.0):
    """``cos(t|p|) + (p/|p|) sin(t|p|)`` for an imaginary vector p.

    The p = 0 limit is the unit element; no division by |p| occurs.
    """
    p = np.asarray(p, dtype=float)
    t = np.asarray(t, dtype=float)
    r = np.linalg.norm(p, axis=-1)
    angle = t * r
    scale = t * np.sinc(angle / np.pi)  # sin(t r) / r
    out = embed(p * scale[..., None])
    out[..., 0] = np.cos(angle)
    return out


def safe_trig_quotients(r):
    """Return ``(sin(pi r/2)/r, cos(pi r/2)/(1 - r^2))`` for r in [0, 1].

    Both quotients have removable singularities (r = 0 and r = 1).  They are
    rewritten through ``np.sinc`` so no cancellation happens anywhere on the
    interval: ``cos(pi r/2) = sin(pi (1-r)/2)`` and ``1 - r^2 = (1-r)(1+r)``.
    """
    r = np.asarray(r, dtype=float)
    if np.any(r < 0.0) or np.any(r > 1.0):
        raise ValueError("safe_trig_quotients needs 0 <= r <= 1")
    f1 = 0.5 * np.pi * np.sinc(0.5 * r)
    e = 1.0 - r
    f2 = 0.5 * np.pi * np.sinc(0.5 * e) / (1.0 + r)
    return f1, f2


def trig_cubic_quotient(r):
    """``(-1 + 4r^2 + (1 + 2r^2) cos(pi r)) / (r^2 (1 - r^2))`` on [0, 1].

    Limits: 6 - pi^2/2 at r = 0 and -2 at r = 1.  Near 0 it is written via
    sin(pi r/2)/r, near 1 via sin(pi(1-r)/2)/(1-r), each cancellation-free.
    """
    r = np.asarray(r, dtype=float)
    if np.any(r < 0.0) or np.any(r > 1.0):
        raise ValueError("trig_cubic_quotient needs 0 <= r <= 1")
    f1, _ = safe_trig_quotients(r)
    low = (6.0 - 2.0 * (1.0 + 2.0 * r * r) * f1 * f1) / (1.0 - np.minimum(r, 0.5) ** 2)
    e = 1.0 - r
    rs = np.maximum(r, 0.5)
    sinc_e = 0.5 * np.pi * np.sinc(0.5 * e)  # sin(pi e/2)/e
    high = -2.0 / rs**2 + 2.0 * (1.0 + 2.0 * rs**2) * e * sinc_e**2 / (rs**2 * (1.0 + rs))
    return np.where(r < 0.5, low, high)


def check_unit(q, what="element"):
    if np.any(np.abs(norm(q) - 1.0) > UNIT_TOL):
        raise ValueError(f"{what} must have unit norm")


def random_unit(rng, n: int, size=None):
    """Haar-random unit element(s) of the algebra with imaginary dimension n."""
    shape = (n + 1,) if size is None else (size, n + 1)
    x = rng.standard_normal(shape)
    return x / np.linalg.norm(x, axis=-1, keepdims=True)


def conj_matrix(q):
    """3x3 rotation x -> q x conj(q) on imaginary quaternions (columns q e_k q̄)."""
    q = np.asarray(q, dtype=float)
    cols = [imag(qmul(qmul(q, basis(3, k)), conj(q))) for k in (1, 2, 3)]
    return np.stack(cols, axis=-1)


class _AlgebraElement:
    """Immutable value wrapper; arithmetic delegates to the array functions."""

    size = 0

    __slots__ = ("components",)

    def __init__(self, components):
        c = np.array(components, dtype=float)
        if c.shape != (self.size,):
            raise ValueError(f"{type(self).__name__} needs {self.size} components")
        c.flags.writeable = False
        object.__setattr__(self, "components", c)

    def __setattr__(self, name, value):
        raise AttributeError("algebra elements are immutable")

    def __mul__(self, other):
        if isinstance(other, type(self)):
            return type(self)(mul(self.components, other.components))
        return type(self)(self.components * float(other))

    __rmul__ = __mul__

    def __add__(self, other):
        return type(self)(self.components + other.components)

    def __sub__(self, other):
        return type(self)(self.components - other.components)

    def __neg__(self):
        return type(self)(-self.components)

    def __eq__(self, other):
        return type(self) is type(other) and np.array_equal(self.components, other.components)

    def __hash__(self):
        return hash((type(self).__name__, self.components.tobytes()))

    def __abs__(self):
        return float(norm(self.components))

    def __repr__(self):
        return f"{type(self).__name__}({self.components.tolist()})"

    def conj(self):
        return type(self)(conj(self.components))

    def inverse(self):
        return type(self)(inv(self.components))

    @property
    def real(self) -> float:
        return float(self.components[0])

    @property
    def imag(self):
        return self.components[1:].copy()

    @classmethod
    def from_imag(cls, v):
        return cls(embed(v))


class Quaternion(_AlgebraElement):
    size = 4
    __slots__ = ()


class Octonion(_AlgebraElement):
    size = 8
    __slots__ = ()
