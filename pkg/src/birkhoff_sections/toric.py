"""Boundaries of toric domains in C^2, described by a curve in the moment plane.

The curve runs from ``(0, a)`` to ``(b, 0)``.  The torus over the curve point
at parameter ``s`` carries the linear flow along the outward normal there;
the circle over ``(0, a)`` is the vertical orbit ``(0, 1)`` and the circle
over ``(b, 0)`` the horizontal orbit ``(1, 0)``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .directions import DirectionSet, admissible_cone, count_disjoint_coverage_windows
from .foliation import FoliatedManifold, RationalLocus, TorusEnd, TorusFamily
from .homology import DEFAULT_TOL, HomologyClass, as_orbit, det, normalized_det
from .sections import BoundaryOrbit, Segment, SectionPlan

FAMILY_ID = "T"


class CurveError(ValueError):
    pass


@dataclass(frozen=True)
class ToricBoundaryCurve:
    """Polyline in the closed first quadrant with outward unit normals per segment.

    ``params`` are the normalized arclength positions of the sample points,
    ``mid_params`` those of the segment midpoints where the normals live.
    """

    points: np.ndarray
    normals: np.ndarray
    params: np.ndarray
    mid_params: np.ndarray

    @property
    def a(self) -> float:
        return float(self.points[0, 1])

    @property
    def b(self) -> float:
        return float(self.points[-1, 0])

    def directions(self) -> DirectionSet:
        return DirectionSet(self.mid_params, self.normals)

    def point_at(self, s: float) -> np.ndarray:
        return np.array([np.interp(s, self.params, self.points[:, 0]),
                         np.interp(s, self.params, self.points[:, 1])])

    def normal_at(self, s: float) -> np.ndarray:
        return self.directions().direction_at(s)


def load_curve(points) -> ToricBoundaryCurve:
    pts = np.asarray(points, dtype=float)
    if pts.ndim != 2 or pts.shape[1] != 2:
        raise CurveError("curve must be a list of (x, y) pairs")
    if len(pts) < 3:
        raise CurveError("curve needs at least 3 points")
    if np.any(pts < 0):
        raise CurveError("curve leaves the closed first quadrant")
    if pts[0, 0] != 0 or pts[0, 1] <= 0:
        raise CurveError(f"first point {tuple(pts[0])} is not (0, a) with a > 0")
    if pts[-1, 1] != 0 or pts[-1, 0] <= 0:
        raise CurveError(f"last point {tuple(pts[-1])} is not (b, 0) with b > 0")
    if np.any(np.all(pts[1:-1] == 0, axis=1)):
        raise CurveError("interior sample at the origin")
    seg = np.diff(pts, axis=0)
    length = np.hypot(seg[:, 0], seg[:, 1])
    if np.any(length == 0):
        i = int(np.argmin(length))
        raise CurveError(f"duplicate consecutive points at index {i}")
    # signed area of the region closed up through the origin; negative means clockwise
    closed = np.vstack([pts, [0.0, 0.0]])
    x, y = closed[:, 0], closed[:, 1]
    area = 0.5 * np.sum(x * np.roll(y, -1) - np.roll(x, -1) * y)
    if area == 0:
        raise CurveError("curve encloses no area with the axes")
    t = seg / length[:, None]
    if area < 0:
        normals = np.column_stack([-t[:, 1], t[:, 0]])
    else:
        normals = np.column_stack([t[:, 1], -t[:, 0]])
    cum = np.concatenate([[0.0], np.cumsum(length)])
    params = cum / cum[-1]
    mids = 0.5 * (params[:-1] + params[1:])
    return ToricBoundaryCurve(pts, normals, params, mids)


# -- classification ----------------------------------------------------------

@dataclass(frozen=True)
class DomainClass:
    monotone: bool
    strictly_monotone: bool
    convex: bool
    concave: bool
    star_shaped: bool

    def as_dict(self) -> dict:
        return dict(monotone=self.monotone, strictly_monotone=self.strictly_monotone,
                    convex=self.convex, concave=self.concave, star_shaped=self.star_shaped)


def _turns(pts: np.ndarray) -> np.ndarray:
    d = np.diff(pts, axis=0)
    return d[:-1, 0] * d[1:, 1] - d[:-1, 1] * d[1:, 0]


def classify_domain(c: ToricBoundaryCurve, tol: float = 1e-9) -> DomainClass:
    n = c.normals
    monotone = bool(np.all(n >= -tol))
    strictly = bool(np.all(n > tol))
    # Omega traversed clockwise: convex iff it never turns left, origin corner included
    poly = np.vstack([[0.0, 0.0], c.points, [0.0, 0.0], c.points[:1]])
    convex = bool(np.all(_turns(poly) <= tol * np.max(np.abs(c.points)) ** 2))
    concave = monotone and bool(np.all(_turns(c.points) >= -tol * np.max(np.abs(c.points)) ** 2))
    mids = 0.5 * (c.points[:-1] + c.points[1:])
    star = bool(np.all(np.sum(mids * n, axis=1) > tol))
    return DomainClass(monotone, strictly, convex, concave, star)


# -- the toric foliation -----------------------------------------------------

def primitive_directions(bound: int) -> List[HomologyClass]:
    """One representative per projective class of primitive vectors with entries up to ``bound``."""
    out = []
    for p in range(0, bound + 1):
        for q in range(-bound, bound + 1):
            if math.gcd(p, q) == 1 and (p > 0 or q == 1):
                out.append(HomologyClass(p, q))
    return sorted(out, key=lambda c: (max(abs(c.p), abs(c.q)), c.p, c.q))


def rational_loci(c: ToricBoundaryCurve, bound: int) -> List[RationalLocus]:
    """Rational tori whose orbit class has entries up to ``bound``, orbit oriented along the flow.

    On a stretch where the normal stays parallel to one orbit class only the
    first torus of the stretch is kept.
    """
    d = c.directions()
    found = []
    for w in primitive_directions(bound):
        prev = None
        for s in d.crossings(w):
            if prev is not None and abs(normalized_det(w, d.direction_at(0.5 * (prev + s)))) < 1e-12:
                continue
            prev = s
            v = d.direction_at(s)
            o = w if w.p * v[0] + w.q * v[1] > 0 else -w
            found.append(RationalLocus(float(s), as_orbit(o)))
    found.sort(key=lambda l: l.s)
    out: List[RationalLocus] = []
    for l in found:
        if out and abs(out[-1].s - l.s) < 1e-12:
            continue
        out.append(l)
    return out


def toric_model(c: ToricBoundaryCurve, loci_bound: int = 2,
                extra_loci: Sequence[Tuple[float, Sequence[int]]] = ()) -> FoliatedManifold:
    """Single-family foliation of the hypersurface over ``c``."""
    loci = rational_loci(c, loci_bound) if loci_bound > 0 else []
    for s, o in extra_loci:
        if not any(abs(l.s - s) < 1e-9 for l in loci):
            loci.append(RationalLocus(float(s), as_orbit(o)))
    loci.sort(key=lambda l: l.s)
    fam = TorusFamily(FAMILY_ID, 0.0, 1.0, c.directions(), TorusEnd.vertical(),
                      TorusEnd.horizontal(), tuple(loci))
    return FoliatedManifold((fam,))


# -- the four clauses --------------------------------------------------------

def disk_section_at_end(c: ToricBoundaryCurve, end: int, tol: float = DEFAULT_TOL) -> bool:
    """Disk-type section bounded by the orbit over ``f(0)`` (``end=0``) or ``f(1)`` (``end=1``)."""
    if end not in (0, 1):
        raise ValueError("end must be 0 or 1")
    axis = (0.0, 1.0) if end == 0 else (1.0, 0.0)
    return not c.directions().hits_direction(axis, 0.0, 1.0, tol)


def _annulus_candidates(bound: int, gss: bool) -> List[HomologyClass]:
    if gss:
        return [HomologyClass(1, -1), HomologyClass(1, 1)]
    cands = [HomologyClass(p, q) for p in range(1, bound + 1) for q in range(-bound, bound + 1)
             if q != 0 and math.gcd(p, abs(q)) == 1]
    return sorted(cands, key=lambda h: (h.q > 0, max(abs(h.p), abs(h.q)), abs(h.p) + abs(h.q), h.p, h.q))


def annulus_section(c: ToricBoundaryCurve, gss: bool = False, bound: int = 12,
                    tol: float = DEFAULT_TOL) -> Optional[HomologyClass]:
    """A class with both entries nonzero never parallel to the flow, oriented positively.

    Projective check; classes are tried with ``p > 0, q < 0`` first and then
    by size.  With ``gss`` only classes with ``|p| = |q| = 1`` are tried.
    """
    d = c.directions()
    for h in _annulus_candidates(bound, gss):
        if d.hits_direction(h, 0.0, 1.0, tol):
            continue
        return h if det(h, d.vectors[0]) > 0 else -h
    return None


def annulus_is_signed_transverse(c: ToricBoundaryCurve, h) -> bool:
    """Signed check: ``h`` lies in the admissible cone of all normals."""
    return admissible_cone(c.directions()).contains(h)


def parallel_parameters(c: ToricBoundaryCurve, orbit) -> List[float]:
    """Parameters where the normal is parallel to ``orbit``."""
    return c.directions().crossings(as_orbit(orbit))


def interior_orbit_section(c: ToricBoundaryCurve, s0: float, orbit, k: int = 1,
                           tol: float = 1e-6) -> Optional[SectionPlan]:
    """Section bounded ``k`` times by an orbit on the rational torus at ``s0``.

    Classes are ``(kP, 0)`` before ``s0`` and ``(0, -kQ)`` after it, signs
    adjusted so both are positively transverse.  Validate against
    ``toric_model(c, extra_loci=[(s0, orbit)])``.
    """
    if k < 1:
        raise ValueError("k must be positive")
    d = c.directions()
    v = d.direction_at(s0)
    orbit = as_orbit(orbit)
    if abs(normalized_det(orbit, v)) > tol:
        raise ValueError(f"normal at s0={s0} is not parallel to {orbit!r}")
    if orbit.p * v[0] + orbit.q * v[1] < 0:
        orbit = as_orbit(-orbit)
    P, Q = orbit
    if P == 0 or Q == 0:
        return None
    if d.hits_direction((1.0, 0.0), 0.0, s0, DEFAULT_TOL) or d.hits_direction((0.0, 1.0), s0, 1.0, DEFAULT_TOL):
        return None
    sigma = 1 if P * Q > 0 else -1
    c_minus = HomologyClass(sigma * k * P, 0)
    c_plus = HomologyClass(0, -sigma * k * Q)
    segs = (Segment(FAMILY_ID, 0.0, float(s0), c_minus, lo_end=TorusEnd.vertical(), hi_orbit=orbit),
            Segment(FAMILY_ID, float(s0), 1.0, c_plus, lo_orbit=orbit, hi_end=TorusEnd.horizontal()))
    bounds = (BoundaryOrbit.at_junction(FAMILY_ID, s0, orbit, k),)
    return SectionPlan(segs, bounds, objective="constructed: one junction on the rational torus")


def boundary_orbit_lower_bound(c: ToricBoundaryCurve, tol: float = DEFAULT_TOL) -> int:
    return count_disjoint_coverage_windows(c.directions(), tol)


# -- capacity ----------------------------------------------------------------

def inscribed_triangle_capacity(c: ToricBoundaryCurve) -> Tuple[float, float]:
    """Largest ``r`` with the triangle ``x + y <= r`` inside the domain, and where it touches."""
    if not classify_domain(c).monotone:
        raise ValueError("capacity formula needs a monotone toric domain")
    sums = c.points.sum(axis=1)
    i = int(np.argmin(sums))
    return float(sums[i]), float(c.params[i])


# -- curve generators --------------------------------------------------------

def ellipsoid_curve(a: float, b: float, n: int = 181) -> ToricBoundaryCurve:
    """Moment image of the ellipsoid ``E(a, b)``: the segment ``x/a + y/b = 1`` from ``(0, b)`` to ``(a, 0)``."""
    t = np.linspace(0.0, 1.0, n)
    pts = np.column_stack([a * t, b * (1 - t)])
    pts[0, 0] = pts[-1, 1] = 0.0
    return load_curve(pts)


def round_sphere_curve(n: int = 3) -> ToricBoundaryCurve:
    return ellipsoid_curve(1.0, 1.0, n)


def _arc(center, radius, th0, th1, step):
    n = max(2, int(math.ceil(abs(th1 - th0) / step)) + 1)
    th = np.linspace(th0, th1, n)
    return np.column_stack([center[0] + radius * np.cos(th), center[1] + radius * np.sin(th)])


def polydisk_curve(a: float, b: float, corner: float = 0.02, step_deg: float = 0.5) -> ToricBoundaryCurve:
    """Rectangle ``[0, a] x [0, b]`` with its outer corner rounded by a quarter circle.

    Runs from ``(0, b)`` along the top edge, around the corner, down to ``(a, 0)``.
    """
    if not 0 < corner < min(a, b):
        raise ValueError("corner radius must be positive and smaller than both sides")
    step = math.radians(step_deg)
    corner_pts = _arc((a - corner, b - corner), corner, math.pi / 2, 0.0, step)
    pts = np.vstack([[0.0, b], corner_pts, [a, 0.0]])
    return load_curve(pts)


def quarter_circle_curve(radius: float = 1.0, step_deg: float = 0.5) -> ToricBoundaryCurve:
    pts = _arc((0.0, 0.0), radius, math.pi / 2, 0.0, math.radians(step_deg))
    pts[0] = (0.0, radius)
    pts[-1] = (radius, 0.0)
    return load_curve(pts)


def make_k_semicircle_curve(k: int, step_deg: float = 0.5, margin_deg: float = 5.0) -> ToricBoundaryCurve:
    """Unit quarter circle carrying ``k`` outward bulges over disjoint sectors.

    Each sector is an isosceles triangle with apex at the origin; the bulge
    over its base is a circular arc of angle ``pi + 2*eps`` (slightly more
    than a semicircle) so the polyline normals provably sweep a full half
    turn even after sampling.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    step = math.radians(step_deg)
    margin = math.radians(margin_deg)
    width = (math.pi / 2 - 2 * margin) / k
    delta = 0.35 * width
    eps = min(delta / 2, math.radians(2.0))
    if 2 * eps <= step:
        raise ValueError("sampling step too coarse for this many bulges")
    pieces = []
    theta = math.pi / 2
    for j in range(k):
        phi = math.pi / 2 - margin - (j + 0.5) * width
        arc = _arc((0.0, 0.0), 1.0, theta, phi + delta, step)
        pieces.append(arc if j == 0 else arc[1:])
        u = np.array([math.cos(phi), math.sin(phi)])
        h = math.sin(delta)
        rho = h / math.cos(eps)
        center = math.cos(delta) * u + h * math.tan(eps) * u
        pieces.append(_arc(center, rho, phi + math.pi / 2 + eps, phi - math.pi / 2 - eps, step)[1:])
        theta = phi - delta
    pieces.append(_arc((0.0, 0.0), 1.0, theta, 0.0, step)[1:])
    pts = np.vstack(pieces)
    pts[0] = (0.0, 1.0)
    pts[-1] = (1.0, 0.0)
    return load_curve(pts)
