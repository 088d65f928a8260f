"""Birkhoff-section plans: per-segment classes plus boundary-orbit records.

A plan assigns one homology class to every segment of every family
(families are cut at the rational tori where the class jumps) and lists the
boundary orbits those choices force.
"""
from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass, field, replace
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .directions import admissible_cone
from .foliation import (BROKEN, HORIZONTAL, MINUS, PLUS, VERTICAL, Diagnostic,
                        FoliatedManifold, InvalidTransitionError, TorusEnd,
                        broken_balance_check, broken_edge_assignment,
                        end_boundary_multiplicity, junction_multiplicity)
from .homology import (HomologyClass, PrimitiveOrbitClass, as_class, as_orbit,
                       det, gcd_components, normalized_det)

ORBIT_END = "orbit-end"
JUNCTION = "rational-junction"
BROKEN_ORBIT = "broken-orbit"

S_TOL = 1e-9


class PlanError(ValueError):
    pass


@dataclass(frozen=True)
class BoundaryOrbit:
    kind: str
    multiplicity: int
    family: Optional[str] = None
    which: Optional[str] = None
    s: Optional[float] = None
    orbit: Optional[PrimitiveOrbitClass] = None
    broken: Optional[str] = None
    vertex: Optional[str] = None

    @classmethod
    def at_end(cls, family: str, which: str, multiplicity: int):
        return cls(ORBIT_END, multiplicity, family=family, which=which)

    @classmethod
    def at_junction(cls, family: str, s: float, orbit, multiplicity: int):
        return cls(JUNCTION, multiplicity, family=family, s=float(s), orbit=as_orbit(orbit))

    @classmethod
    def at_broken(cls, broken: str, vertex: str, multiplicity: int = 1):
        return cls(BROKEN_ORBIT, multiplicity, broken=broken, vertex=vertex)

    def key(self):
        if self.kind == ORBIT_END:
            return (self.kind, self.family, self.which)
        if self.kind == JUNCTION:
            return (self.kind, self.family, round(self.s, 9))
        return (self.kind, self.broken, self.vertex)


@dataclass(frozen=True)
class Segment:
    """A maximal parameter window of one family carrying a single class.

    ``lo_end``/``hi_end`` are set when the window reaches the family's end;
    ``lo_orbit``/``hi_orbit`` when it stops at a rational torus instead.
    """

    family: str
    s_lo: float
    s_hi: float
    cls: HomologyClass
    lo_end: Optional[TorusEnd] = None
    hi_end: Optional[TorusEnd] = None
    lo_orbit: Optional[PrimitiveOrbitClass] = None
    hi_orbit: Optional[PrimitiveOrbitClass] = None


@dataclass(frozen=True)
class SectionPlan:
    segments: Tuple[Segment, ...]
    boundaries: Tuple[BoundaryOrbit, ...]
    bound: Optional[int] = None
    complete: bool = True
    objective: str = ""

    @property
    def n_boundary(self) -> int:
        return len(self.boundaries)

    @property
    def total_multiplicity(self) -> int:
        return sum(b.multiplicity for b in self.boundaries)

    def family_segments(self, family: str) -> List[Segment]:
        return sorted((s for s in self.segments if s.family == family), key=lambda s: s.s_lo)

    def classes(self) -> List[HomologyClass]:
        return [s.cls for s in self.segments]

    def uses_broken_tori(self) -> bool:
        return any(e is not None and e.kind == BROKEN
                   for seg in self.segments for e in (seg.lo_end, seg.hi_end))


# -- validity --------------------------------------------------------------

def _end_class(plan: SectionPlan, family: str, which: str) -> HomologyClass:
    segs = plan.family_segments(family)
    if not segs:
        raise KeyError(f"plan has no segment for family {family!r}")
    return segs[0].cls if which == "lo" else segs[-1].cls


def plan_is_valid(m: FoliatedManifold, plan: SectionPlan, tol: float = S_TOL) -> Tuple[bool, List[Diagnostic]]:
    """Check every segment, end, junction and broken torus of ``plan`` against ``m``."""
    diags: List[Diagnostic] = []
    fam_ids = {f.id for f in m.families}
    for seg in plan.segments:
        if seg.family not in fam_ids:
            raise KeyError(f"segment names unknown family {seg.family!r}")
    recorded = {}
    for b in plan.boundaries:
        if b.kind in (ORBIT_END, JUNCTION) and b.family not in fam_ids:
            raise KeyError(f"boundary names unknown family {b.family!r}")
        if b.kind == BROKEN_ORBIT:
            bt = m.broken_torus(b.broken)
            if b.vertex not in bt.vertices:
                raise KeyError(f"boundary names unknown vertex {b.vertex!r} of {b.broken!r}")
        if b.key() in recorded:
            diags.append(Diagnostic(str(b.key()), "boundary orbit recorded twice"))
        recorded[b.key()] = b
    expected = set()

    for fam in m.families:
        segs = plan.family_segments(fam.id)
        loc = f"family {fam.id}"
        if not segs:
            diags.append(Diagnostic(loc, "no segment covers this family"))
            continue
        if abs(segs[0].s_lo - fam.s_lo) > tol or abs(segs[-1].s_hi - fam.s_hi) > tol:
            diags.append(Diagnostic(loc, "segments do not reach both ends"))
        for a, b in zip(segs[:-1], segs[1:]):
            if abs(a.s_hi - b.s_lo) > tol:
                diags.append(Diagnostic(loc, f"gap or overlap between segments at s={a.s_hi}"))
        # (a) transversality
        for seg in segs:
            if seg.cls.is_zero():
                diags.append(Diagnostic(loc, "clause transversality: (0,0) class"))
                continue
            cone = admissible_cone(fam.directions.restrict(seg.s_lo, seg.s_hi))
            if not cone.contains(seg.cls):
                diags.append(Diagnostic(
                    f"{loc} [{seg.s_lo:.6g},{seg.s_hi:.6g}]",
                    f"clause transversality: class {seg.cls!r} not positively transverse to the flow"))
        # (b) orbit ends
        for which, seg in (("lo", segs[0]), ("hi", segs[-1])):
            end = fam.end(which)
            if end.kind == BROKEN:
                continue
            mult = end_boundary_multiplicity(end, seg.cls)
            clause = "clause vertical-end" if end.kind == VERTICAL else "clause horizontal-end"
            key = (ORBIT_END, fam.id, which)
            rec = recorded.get(key)
            if mult:
                expected.add(key)
                if rec is None:
                    diags.append(Diagnostic(f"{loc} {which} end", f"{clause}: boundary of multiplicity {mult} not recorded"))
                elif rec.multiplicity != mult:
                    diags.append(Diagnostic(f"{loc} {which} end",
                                            f"{clause}: multiplicity {rec.multiplicity} recorded, {mult} required"))
            elif rec is not None:
                diags.append(Diagnostic(f"{loc} {which} end", f"{clause}: boundary recorded but class {seg.cls!r} extends transversely"))
        # (c) junctions
        loci = {round(l.s, 9): l for l in fam.loci}
        for a, b in zip(segs[:-1], segs[1:]):
            s = a.s_hi
            locus = loci.get(round(s, 9))
            jloc = f"{loc} s={s:.6g}"
            if locus is None:
                diags.append(Diagnostic(jloc, "clause junction: class split away from a rational torus"))
                continue
            key = (JUNCTION, fam.id, round(s, 9))
            try:
                k = junction_multiplicity(locus.orbit, a.cls, b.cls)
            except InvalidTransitionError as exc:
                diags.append(Diagnostic(jloc, f"clause junction: {exc}"))
                continue
            rec = recorded.get(key)
            if k is None:
                if rec is not None:
                    diags.append(Diagnostic(jloc, "clause junction: removable boundary recorded"))
                continue
            expected.add(key)
            if rec is None:
                diags.append(Diagnostic(jloc, f"clause junction: junction boundary of multiplicity {abs(k)} not recorded"))
            elif rec.multiplicity != abs(k):
                diags.append(Diagnostic(jloc, f"clause junction: multiplicity {rec.multiplicity} recorded, {abs(k)} required"))
    # (d) broken tori
    for bt in m.broken:
        clause = "clause vertical-broken-torus" if bt.orientation == VERTICAL else "clause horizontal-broken-torus"
        try:
            classes = {f.id: _face_class(m, plan, bt.id, f) for f in bt.faces}
        except KeyError as exc:
            diags.append(Diagnostic(f"broken {bt.id}", str(exc)))
            continue
        balanced = broken_balance_check(bt, classes)
        recs = [k for k in recorded if k[0] == BROKEN_ORBIT and k[1] == bt.id]
        if balanced and recs:
            diags.append(Diagnostic(f"broken {bt.id}", f"{clause}: balanced yet boundary recorded"))
        if not balanced:
            if not recs:
                diags.append(Diagnostic(f"broken {bt.id}", f"{clause}: balance equations fail and no boundary recorded"))
            expected.update(recs)
    for key in recorded:
        if key[0] != BROKEN_ORBIT and key not in expected:
            if not any(d.message.startswith(("clause vertical-end", "clause horizontal-end", "clause junction")) and str(key[1]) in d.location for d in diags):
                diags.append(Diagnostic(str(key), "boundary record matches no forced boundary"))
    return not diags, diags


def _face_class(m: FoliatedManifold, plan: SectionPlan, broken_id: str, face) -> HomologyClass:
    fam = m.family(face.family)
    for which in ("lo", "hi"):
        end = fam.end(which)
        if end.kind == BROKEN and end.broken_id == broken_id and end.face_id == face.id:
            return _end_class(plan, fam.id, which)
    raise KeyError(f"family {fam.id!r} does not end on face {face.id!r}")


# -- topology of the section -----------------------------------------------

def _junction_pairs(plan: SectionPlan):
    by_fam = defaultdict(list)
    for i, seg in enumerate(plan.segments):
        by_fam[seg.family].append(i)
    for fam, idx in by_fam.items():
        idx.sort(key=lambda i: plan.segments[i].s_lo)
        for a, b in zip(idx[:-1], idx[1:]):
            yield a, b


def euler_characteristic_of_plan(plan: SectionPlan, m: Optional[FoliatedManifold] = None) -> Optional[int]:
    """Euler characteristic of the section, or ``None`` if a broken torus carries a boundary.

    Computed additively over the pieces of the manifold.  Each family of
    tori meets the section in circles and contributes nothing.  A transverse
    orbit end adds one point per crossing.  A junction on a rational torus
    adds the boundary orbit with transverse loops attached to it, minus one
    per loop.  A transverse broken torus adds ``|p0| (V - E)`` (vertical;
    ``|q0|`` for horizontal), since each of its ``V`` orbits is met in
    ``|p0|`` points and each of its ``E`` annuli in ``|p0|`` arcs.  Plans that
    reach broken tori need ``m``.
    """
    if any(b.kind == BROKEN_ORBIT for b in plan.boundaries):
        return None
    chi = 0
    for seg in plan.segments:
        for end in (seg.lo_end, seg.hi_end):
            if end is None or end.kind == BROKEN:
                continue
            if end_boundary_multiplicity(end, seg.cls) == 0:
                chi += abs(seg.cls.p) if end.kind == VERTICAL else abs(seg.cls.q)
    for a, b in _junction_pairs(plan):
        orbit = plan.segments[a].hi_orbit
        if orbit is None:
            raise PlanError("consecutive segments without a rational torus between them")
        if plan.segments[a].cls != plan.segments[b].cls:
            chi -= abs(det(plan.segments[a].cls, orbit))
    if plan.uses_broken_tori():
        if m is None:
            raise PlanError("plan crosses broken tori; pass the manifold to count them")
        for bt in m.broken:
            face = bt.faces[0]
            c = _face_class(m, plan, bt.id, face)
            common = abs(c.p) if bt.orientation == VERTICAL else abs(c.q)
            chi += common * (len(bt.vertices) - len(bt.edges))
    return chi


def boundary_circle_count(plan: SectionPlan) -> int:
    """Number of boundary circles of the abstract surface."""
    total = 0
    for b in plan.boundaries:
        if b.kind == ORBIT_END:
            seg = plan.family_segments(b.family)[0 if b.which == "lo" else -1]
            total += gcd_components(seg.cls)[0]
        else:
            total += b.multiplicity
    return total


def component_count(plan: SectionPlan, m: Optional[FoliatedManifold] = None) -> int:
    """Connected components of the section, gluing parallel sheets of each segment.

    A segment of class ``c`` is ``gcd(c)`` parallel sheets.  Across a
    junction or a transverse broken torus, sheets are joined in
    ``gcd`` residue classes of the classes meeting there.
    """
    parent: Dict[Tuple[int, int], Tuple[int, int]] = {}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(x, y):
        rx, ry = find(x), find(y)
        if rx != ry:
            parent[max(rx, ry)] = min(rx, ry)

    sheets = []
    for i, seg in enumerate(plan.segments):
        g = gcd_components(seg.cls)[0]
        sheets.append(g)
        for j in range(g):
            parent[(i, j)] = (i, j)

    def join(members: Sequence[int], g0: int):
        for r in range(g0):
            nodes = [(i, j) for i in members for j in range(r, sheets[i], g0)]
            for x in nodes[1:]:
                union(nodes[0], x)

    for a, b in _junction_pairs(plan):
        ca, cb = plan.segments[a].cls, plan.segments[b].cls
        join([a, b], math.gcd(sheets[a], sheets[b]) if ca != cb else sheets[a])
    if m is not None:
        index = {(s.family, "lo"): i for i, s in enumerate(plan.segments) if s.lo_end is not None}
        index.update({(s.family, "hi"): i for i, s in enumerate(plan.segments) if s.hi_end is not None})
        for bt in m.broken:
            members = []
            for f in bt.faces:
                fam = m.family(f.family)
                for which in ("lo", "hi"):
                    end = fam.end(which)
                    if end.kind == BROKEN and end.broken_id == bt.id and end.face_id == f.id:
                        members.append(index[(fam.id, which)])
            classes = {f.id: plan.segments[i].cls for f, i in zip(bt.faces, members)}
            if broken_balance_check(bt, classes):
                cls = _broken_class(bt, classes)
                join(members, math.gcd(cls.p, cls.q))
            else:
                join(members, 1)
    return len({find(x) for x in parent})


def _broken_class(bt, classes) -> HomologyClass:
    minus = [classes[f.id] for f in bt.side(MINUS)]
    if bt.orientation == VERTICAL:
        return HomologyClass(minus[0].p, sum(c.q for c in minus))
    return HomologyClass(sum(c.p for c in minus), minus[0].q)


def genus_of_plan(plan: SectionPlan, m: Optional[FoliatedManifold] = None) -> Optional[int]:
    """Total genus summed over the components of the section.

    Uses ``chi = sum(2 - 2 g_i - b_i)``; ``None`` when the Euler
    characteristic is undetermined.
    """
    chi = euler_characteristic_of_plan(plan, m)
    if chi is None:
        return None
    n = component_count(plan, m)
    b = boundary_circle_count(plan)
    twice = 2 * n - b - chi
    if twice % 2 or twice < 0:
        raise PlanError(f"inconsistent plan: chi={chi}, boundary circles={b}, components={n}")
    return twice // 2


# -- numerical re-check ----------------------------------------------------

def verify_plan_numeric(m: FoliatedManifold, plan: SectionPlan, samples_per_segment: int = 100,
                        tol: float = S_TOL) -> dict:
    """Sample each segment and report the worst normalized determinant ``det[c; v]``."""
    if samples_per_segment < 1:
        raise ValueError("samples_per_segment must be positive")
    report = {"segments": [], "junctions": [], "ok": True, "tolerance": tol}
    for seg in plan.segments:
        fam = m.family(seg.family)
        d = fam.directions
        n = samples_per_segment
        if d.is_symbolic:
            theta = (np.arange(n) + 0.5) / n * (math.pi / 2)
            vs = np.column_stack([np.cos(theta), np.sin(theta)])
        else:
            ss = seg.s_lo + (np.arange(n) + 0.5) / n * (seg.s_hi - seg.s_lo)
            vs = np.array([d.direction_at(s) for s in ss])
        margins = (seg.cls.p * vs[:, 1] - seg.cls.q * vs[:, 0]) / (
            math.hypot(*seg.cls) * np.hypot(vs[:, 0], vs[:, 1]))
        worst = float(margins.min())
        ok = worst > tol
        report["segments"].append({"family": seg.family, "s_lo": seg.s_lo, "s_hi": seg.s_hi,
                                   "class": seg.cls.as_list(), "min_margin": worst, "ok": ok})
        report["ok"] &= ok
    for a, b in _junction_pairs(plan):
        sa = plan.segments[a]
        if sa.hi_orbit is None:
            continue
        fam = m.family(sa.family)
        v = fam.directions.direction_at(sa.s_hi) if not fam.directions.is_symbolic else np.array(sa.hi_orbit, float)
        report["junctions"].append({"family": sa.family, "s": sa.s_hi, "orbit": sa.hi_orbit.as_list(),
                                    "orbit_det": float(normalized_det(sa.hi_orbit, v))})
    return report


def plan_to_dict(plan: SectionPlan, m: Optional[FoliatedManifold] = None) -> dict:
    """JSON-ready view of a plan with its derived topology."""
    chi = euler_characteristic_of_plan(plan, m)
    return {
        "segments": [{"family": s.family, "s_lo": round(s.s_lo, 9), "s_hi": round(s.s_hi, 9),
                      "class": s.cls.as_list()} for s in plan.segments],
        "boundaries": [_boundary_to_dict(b) for b in plan.boundaries],
        "n_boundary": plan.n_boundary,
        "total_multiplicity": plan.total_multiplicity,
        "euler_characteristic": chi,
        "genus": genus_of_plan(plan, m) if chi is not None else None,
        "bound": plan.bound,
        "complete_within_bound": plan.complete,
        "objective": plan.objective,
    }


def _boundary_to_dict(b: BoundaryOrbit) -> dict:
    out = {"kind": b.kind, "multiplicity": b.multiplicity}
    if b.kind == ORBIT_END:
        out.update(family=b.family, end=b.which)
    elif b.kind == JUNCTION:
        out.update(family=b.family, s=round(b.s, 9), orbit=b.orbit.as_list())
    else:
        out.update(broken=b.broken, vertex=b.vertex)
    return out
