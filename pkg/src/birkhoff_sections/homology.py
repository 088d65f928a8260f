"""Integer first-homology classes on the 2-torus.

The first coordinate counts the horizontal generator, the second the
vertical one.  Classes are exact integers; flow directions are floats.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence, Tuple

DEFAULT_TOL = 1e-9


class ZeroClassError(ValueError):
    """Raised when a (0, 0) class is used where a transverse curve is needed."""


@dataclass(frozen=True, eq=False)
class HomologyClass:
    p: int
    q: int

    def __eq__(self, other):
        if isinstance(other, (HomologyClass, tuple)) and len(other) == 2:
            return (self.p, self.q) == tuple(other)
        return NotImplemented

    def __hash__(self):
        return hash((self.p, self.q))

    def __lt__(self, other):
        return (self.p, self.q) < tuple(other)

    def __post_init__(self):
        if not (isinstance(self.p, int) and isinstance(self.q, int)):
            object.__setattr__(self, "p", _as_int(self.p))
            object.__setattr__(self, "q", _as_int(self.q))

    def __iter__(self):
        yield self.p
        yield self.q

    def __add__(self, other):
        return HomologyClass(self.p + other[0], self.q + other[1])

    def __sub__(self, other):
        return HomologyClass(self.p - other[0], self.q - other[1])

    def __neg__(self):
        return HomologyClass(-self.p, -self.q)

    def __mul__(self, k: int):
        return HomologyClass(k * self.p, k * self.q)

    __rmul__ = __mul__

    def __getitem__(self, i):
        return (self.p, self.q)[i]

    def __len__(self):
        return 2

    def is_zero(self) -> bool:
        return self.p == 0 and self.q == 0

    def as_list(self) -> list:
        return [self.p, self.q]

    def __repr__(self):
        return f"({self.p},{self.q})"


@dataclass(frozen=True, eq=False, repr=False)
class PrimitiveOrbitClass(HomologyClass):
    """Class of the simple periodic orbits filling a rational torus."""

    def __post_init__(self):
        super().__post_init__()
        if self.is_zero() or math.gcd(self.p, self.q) != 1:
            raise ValueError(f"orbit class {self!r} is not primitive")


def _as_int(x) -> int:
    if isinstance(x, bool):
        raise TypeError("boolean is not a homology coefficient")
    if isinstance(x, int):
        return x
    if float(x) != int(x):
        raise TypeError(f"non-integer homology coefficient {x!r}")
    return int(x)


def as_class(c) -> HomologyClass:
    if isinstance(c, HomologyClass):
        return c
    p, q = c
    return HomologyClass(_as_int(p), _as_int(q))


def as_orbit(c) -> PrimitiveOrbitClass:
    if isinstance(c, PrimitiveOrbitClass):
        return c
    p, q = c
    return PrimitiveOrbitClass(_as_int(p), _as_int(q))


def det(u: Sequence[float], v: Sequence[float]) -> float:
    """Determinant of the 2x2 matrix with rows ``u`` and ``v``."""
    return u[0] * v[1] - u[1] * v[0]


def gcd_components(c) -> Tuple[int, HomologyClass]:
    """Split a class into ``count`` parallel copies of a primitive class.

    An embedded transverse curve of class ``c`` has exactly ``count``
    components, each of class ``primitive``.
    """
    c = as_class(c)
    if c.is_zero():
        raise ZeroClassError("no transverse curve of (0,0)-type")
    count = math.gcd(c.p, c.q)
    return count, HomologyClass(c.p // count, c.q // count)


def cross(v: Sequence[float], c) -> float:
    """``a*q - b*p`` for direction ``v = (a, b)`` and class ``c = (p, q)``."""
    return v[0] * c[1] - v[1] * c[0]


def normalized_det(c, v: Sequence[float]) -> float:
    """``det[c; v] / (|c| |v|)``, the sine of the angle from ``c`` to ``v``."""
    nc = math.hypot(c[0], c[1])
    nv = math.hypot(v[0], v[1])
    if nc == 0 or nv == 0:
        return 0.0
    return det(c, v) / (nc * nv)


def admits_transverse_curve(c, v: Sequence[float], tol: float = DEFAULT_TOL) -> bool:
    """True iff some orientation of a curve of class ``c`` crosses the linear flow ``v``."""
    c = as_class(c)
    if c.is_zero():
        return False
    return abs(normalized_det(c, v)) > tol


def is_positively_transverse(c, v: Sequence[float], tol: float = 0.0) -> bool:
    """True iff ``det[c; v] > 0``: the flow crosses the oriented curve positively."""
    c = as_class(c)
    if c.is_zero():
        return False
    if tol == 0.0:
        return det(c, v) > 0
    return normalized_det(c, v) > tol


def is_multiple_of(c, orbit) -> bool:
    """True iff ``c`` is an integer multiple (possibly zero) of the primitive ``orbit``."""
    return det(c, orbit) == 0


def decompose_in_section_basis(c, orbit, h) -> Tuple[int, int]:
    """Coordinates ``(alpha, beta)`` of ``c = alpha*h + beta*orbit``.

    ``{h, orbit}`` must be a unimodular basis.  ``alpha`` only depends on
    ``c`` and ``orbit`` up to the sign of the basis determinant.
    """
    c, orbit, h = as_class(c), as_class(orbit), as_class(h)
    d = det(h, orbit)
    if abs(d) != 1:
        raise ValueError(f"basis {h!r}, {orbit!r} is not unimodular (det={d})")
    alpha = det(c, orbit) * d
    beta = det(h, c) * d
    return alpha, beta


def horizontal_complement(orbit) -> HomologyClass:
    """Some class ``h`` with ``det[h; orbit] = 1`` (extended Euclid)."""
    P, Q = as_orbit(orbit)
    # h = (x, y) with x*Q - y*P = 1
    g, s, t = _egcd(Q, -P)
    if g < 0:
        s, t = -s, -t
    return HomologyClass(s, t)


def _egcd(a: int, b: int):
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r != 0:
        k = old_r // r
        old_r, r = r, old_r - k * r
        old_s, s = s, old_s - k * s
        old_t, t = t, old_t - k * t
    return old_r, old_s, old_t
