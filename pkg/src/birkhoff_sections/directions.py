"""Flow directions met along a family of invariant tori.

A family either carries an ordered list of sampled directions, interpolated
along the shorter arc between neighbours, or the symbolic open first
quadrant used for separable Hamiltonians.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import List, Optional, Sequence

import numpy as np

from .homology import DEFAULT_TOL, HomologyClass, det

QUADRANT = "open-first-quadrant"


class DirectionError(ValueError):
    pass


@dataclass(frozen=True)
class DirectionSet:
    """Directions of the linear flow along a family, indexed by a parameter.

    ``params`` strictly increase; ``vectors`` has one row per parameter.
    When ``symbolic`` is set the two arrays are empty and the family is
    only known to move in the open first quadrant.
    """

    params: np.ndarray = field(default_factory=lambda: np.zeros(0))
    vectors: np.ndarray = field(default_factory=lambda: np.zeros((0, 2)))
    symbolic: Optional[str] = None

    def __post_init__(self):
        if self.symbolic is not None:
            if self.symbolic != QUADRANT:
                raise DirectionError(f"unknown symbolic direction set {self.symbolic!r}")
            return
        params = np.asarray(self.params, dtype=float).reshape(-1)
        vectors = np.asarray(self.vectors, dtype=float).reshape(-1, 2)
        if len(params) == 0 or len(params) != len(vectors):
            raise DirectionError("direction samples must be non-empty and match their parameters")
        if np.any(np.diff(params) <= 0):
            raise DirectionError("direction parameters must be strictly increasing")
        if np.any(np.hypot(vectors[:, 0], vectors[:, 1]) == 0):
            raise DirectionError("zero flow direction in samples")
        object.__setattr__(self, "params", params)
        object.__setattr__(self, "vectors", vectors)

    @classmethod
    def quadrant(cls) -> "DirectionSet":
        return cls(symbolic=QUADRANT)

    @classmethod
    def constant(cls, v: Sequence[float], s_lo: float = 0.0, s_hi: float = 1.0) -> "DirectionSet":
        return cls(np.array([s_lo, s_hi]), np.array([v, v], dtype=float))

    @property
    def is_symbolic(self) -> bool:
        return self.symbolic is not None

    def __len__(self):
        return len(self.params)

    # -- angle bookkeeping ------------------------------------------------

    def signed_angles(self) -> np.ndarray:
        """Unwrapped angles, consecutive samples joined along the shorter arc."""
        self._require_samples()
        return np.unwrap(np.arctan2(self.vectors[:, 1], self.vectors[:, 0]))

    def projective_angles(self) -> np.ndarray:
        """Unwrapped angles modulo pi (directions up to sign)."""
        self._require_samples()
        theta = np.arctan2(self.vectors[:, 1], self.vectors[:, 0])
        return np.unwrap(2.0 * theta) / 2.0

    def _require_samples(self):
        if self.is_symbolic:
            raise DirectionError("operation needs sampled directions")

    def direction_at(self, s: float) -> np.ndarray:
        """Unit flow direction at parameter ``s`` (symbolic sets return the diagonal)."""
        if self.is_symbolic:
            return np.array([1.0, 1.0]) / math.sqrt(2.0)
        theta = np.interp(s, self.params, self.signed_angles())
        return np.array([math.cos(theta), math.sin(theta)])

    def restrict(self, s_lo: float, s_hi: float) -> "DirectionSet":
        """Directions met for parameters in the closed window ``[s_lo, s_hi]``."""
        if self.is_symbolic:
            return self
        if s_hi < s_lo:
            raise DirectionError("empty restriction window")
        theta = self.signed_angles()
        inner = (self.params > s_lo) & (self.params < s_hi)
        ps = [s_lo] + list(self.params[inner])
        ts = [np.interp(s_lo, self.params, theta)] + list(theta[inner])
        if s_hi > s_lo:
            ps.append(s_hi)
            ts.append(np.interp(s_hi, self.params, theta))
        ts = np.array(ts)
        return DirectionSet(np.array(ps), np.column_stack([np.cos(ts), np.sin(ts)]))

    def crossings(self, w: Sequence[float]) -> List[float]:
        """Parameters where the direction becomes parallel (up to sign) to ``w``."""
        theta = self.signed_angles()
        target = math.atan2(w[1], w[0])
        out: List[float] = []

        def add(s):
            if not out or abs(out[-1] - s) > 1e-12:
                out.append(float(s))

        if len(theta) == 1:
            if _hits(theta[0], theta[0], target):
                add(self.params[0])
            return out
        for i in range(len(theta) - 1):
            a, b = theta[i], theta[i + 1]
            lo, hi = min(a, b), max(a, b)
            n_lo = math.ceil((lo - target) / math.pi - 1e-12)
            n_hi = math.floor((hi - target) / math.pi + 1e-12)
            for n in range(n_lo, n_hi + 1):
                x = target + n * math.pi
                t = 0.0 if b == a else min(1.0, max(0.0, (x - a) / (b - a)))
                add(self.params[i] + t * (self.params[i + 1] - self.params[i]))
        return out

    def hits_direction(self, w: Sequence[float], s_lo: float, s_hi: float,
                       tol: float = DEFAULT_TOL) -> bool:
        """True iff the interpolated direction is parallel to ``w`` somewhere in ``[s_lo, s_hi]``."""
        if self.is_symbolic:
            # the open quadrant meets every direction strictly inside it
            a, b = w
            return a * b > 0
        theta = self.restrict(s_lo, s_hi).signed_angles()
        target = math.atan2(w[1], w[0])
        if len(theta) == 1:
            return _hits(theta[0] - tol, theta[0] + tol, target)
        return any(_hits(min(a, b) - tol, max(a, b) + tol, target)
                   for a, b in zip(theta[:-1], theta[1:]))


def _hits(lo: float, hi: float, target: float) -> bool:
    n = math.ceil((lo - target) / math.pi)
    return target + n * math.pi <= hi


@dataclass(frozen=True)
class ClassCone:
    """Open convex cone of classes positively transverse to a whole direction set.

    Membership is ``det[c; lo] > 0`` and ``det[c; hi] > 0`` where ``lo`` and
    ``hi`` are the extreme flow directions; ``closed`` relaxes both to ``>= 0``
    (used for the open-quadrant flow, whose extremes are never attained).
    """

    empty: bool
    lo: tuple = (1.0, 0.0)
    hi: tuple = (1.0, 0.0)
    closed: bool = False

    def contains(self, c, tol: float = DEFAULT_TOL) -> bool:
        if self.empty:
            return False
        p, q = c
        if p == 0 and q == 0:
            return False
        if self.closed:
            return det(c, self.lo) >= 0 and det(c, self.hi) >= 0
        n = math.hypot(p, q)
        return det(c, self.lo) / n > tol and det(c, self.hi) / n > tol

    def margin(self, c) -> float:
        """Smallest normalized determinant against the two extreme directions."""
        if self.empty:
            return -1.0
        n = math.hypot(*c)
        return min(det(c, self.lo), det(c, self.hi)) / n


def admissible_cone(d: DirectionSet) -> ClassCone:
    """Classes whose curves are positively transverse to every direction in ``d``."""
    if d.is_symbolic:
        return ClassCone(False, (1.0, 0.0), (0.0, 1.0), closed=True)
    theta = d.signed_angles()
    i_lo, i_hi = int(np.argmin(theta)), int(np.argmax(theta))
    if theta[i_hi] - theta[i_lo] >= math.pi - 1e-12:
        return ClassCone(True)
    u = d.vectors[i_lo] / np.hypot(*d.vectors[i_lo])
    w = d.vectors[i_hi] / np.hypot(*d.vectors[i_hi])
    return ClassCone(False, (float(u[0]), float(u[1])), (float(w[0]), float(w[1])))


def integer_points_in_cone(k: ClassCone, bound: int) -> List[HomologyClass]:
    """All classes with ``max(|p|, |q|) <= bound`` inside ``k``, sorted."""
    if bound < 1:
        raise ValueError("bound must be >= 1")
    if k.empty:
        return []
    return [HomologyClass(p, q)
            for p in range(-bound, bound + 1)
            for q in range(-bound, bound + 1)
            if k.contains((p, q))]


def covers_all_directions(d: DirectionSet, tol: float = DEFAULT_TOL) -> bool:
    """True iff the directions sweep all of RP^1 (a half turn of the signed path)."""
    theta = d.signed_angles()
    return theta.max() - theta.min() >= math.pi - tol


def coverage_windows(d: DirectionSet, tol: float = DEFAULT_TOL) -> List[tuple]:
    """Greedy disjoint parameter windows ``(s_start, s_end)`` each sweeping all of RP^1.

    A window opens at a sample and closes at the first sample where the
    swept angle reaches a half turn; the next one opens at the following
    sample.
    """
    theta = d.signed_angles()
    out = []
    start = None
    for i, x in enumerate(theta):
        if start is None:
            start, lo, hi = i, x, x
            continue
        lo, hi = min(lo, x), max(hi, x)
        if hi - lo >= math.pi - tol:
            out.append((float(d.params[start]), float(d.params[i])))
            start = None
    return out


def count_disjoint_coverage_windows(d: DirectionSet, tol: float = DEFAULT_TOL) -> int:
    """Number of greedy disjoint windows each sweeping all of RP^1.

    Every such window forces a boundary orbit of any Birkhoff section, so the
    count is a lower bound on the number of boundary orbits.
    """
    return len(coverage_windows(d, tol))
