"""Search for the simplest section plan of a foliated manifold.

The choice of one class per segment, of the junctions used and of the broken
tori left non-transverse is encoded as a small integer program and solved
with HiGHS (via ``scipy.optimize.milp``).  Priorities are applied one after
the other, each stage fixing the optimum of the previous ones, so the result
is exact within the class bound and independent of solver tie-breaking
order up to the final "smallest classes" stage.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

import numpy as np
from scipy.optimize import Bounds, LinearConstraint, milp
from scipy.sparse import lil_matrix

from .directions import admissible_cone, integer_points_in_cone
from .foliation import (BROKEN, MINUS, VERTICAL, FoliatedManifold, broken_balance_check,
                        end_boundary_multiplicity, junction_multiplicity)
from .homology import HomologyClass
from .sections import BoundaryOrbit, Segment, SectionPlan, plan_is_valid

OBJECTIVE_NOTE = ("fewest boundary orbits, then least total multiplicity, then fewest "
                  "non-transverse broken tori, then largest Euler characteristic, then "
                  "smallest classes (a design choice, not canonical)")


@dataclass(frozen=True)
class SynthesisObjective:
    bound: int = 12
    time_limit: float = 60.0

    def __post_init__(self):
        if self.bound < 1:
            raise ValueError("class search bound must be >= 1")


class _Program:
    def __init__(self):
        self.lb: List[float] = []
        self.ub: List[float] = []
        self.integral: List[int] = []
        self.rows: List[Tuple[Dict[int, float], float, float]] = []

    def var(self, lb, ub, integral=True) -> int:
        self.lb.append(lb)
        self.ub.append(ub)
        self.integral.append(1 if integral else 0)
        return len(self.lb) - 1

    def binary(self) -> int:
        return self.var(0, 1)

    def row(self, coeffs: Dict[int, float], lo=-np.inf, hi=np.inf):
        self.rows.append((coeffs, lo, hi))

    def solve(self, objective: Dict[int, float], time_limit: float):
        n = len(self.lb)
        a = lil_matrix((len(self.rows), n))
        lo = np.empty(len(self.rows))
        hi = np.empty(len(self.rows))
        for i, (coeffs, l, h) in enumerate(self.rows):
            for j, v in coeffs.items():
                a[i, j] += v
            lo[i], hi[i] = l, h
        c = np.zeros(n)
        for j, v in objective.items():
            c[j] += v
        res = milp(c, constraints=LinearConstraint(a.tocsr(), lo, hi),
                   integrality=np.array(self.integral), bounds=Bounds(self.lb, self.ub),
                   options={"time_limit": time_limit, "mip_rel_gap": 0.0})
        return res


def _cuts(fam) -> List[float]:
    return [fam.s_lo] + [l.s for l in fam.loci] + [fam.s_hi]


def _lattice_rays(cone, B: int):
    """Extreme primitive lattice directions among the cone's classes with entries in ``[-B, B]``.

    The box points between the two rays are exactly the box points of the
    cone, so the rays give an integer description of the same candidate set.
    """
    pts = integer_points_in_cone(cone, B)
    if not pts:
        return None, None
    # the cone opens less than a half turn, so angles relative to any member stay ordered
    ang = [math.atan2(c.q, c.p) for c in pts]
    rel = [((a - ang[0] + math.pi) % (2 * math.pi)) - math.pi for a in ang]
    i_lo = min(range(len(pts)), key=lambda i: rel[i])
    i_hi = max(range(len(pts)), key=lambda i: rel[i])
    prim = []
    for i in (i_lo, i_hi):
        g = math.gcd(pts[i].p, pts[i].q)
        prim.append((pts[i].p // g, pts[i].q // g))
    return prim[0], prim[1]


def _milp_component(families, brokens_in, obj: SynthesisObjective):
    """Integer program for families coupled through broken tori.

    Returns per-family interval classes and a completeness flag, or ``None``.
    """
    B = obj.bound
    prog = _Program()
    cls_vars: Dict[str, List[Tuple[int, int]]] = {}
    cones = {}
    boundary, mult, undet, neg_chi, size = {}, {}, {}, {}, {}

    for fam in families:
        cuts = _cuts(fam)
        vs = []
        fam_cones = []
        for a, b in zip(cuts[:-1], cuts[1:]):
            cone = admissible_cone(fam.directions.restrict(a, b))
            if cone.empty:
                return None
            fam_cones.append(cone)
            p, q = prog.var(-B, B), prog.var(-B, B)
            vs.append((p, q))
            r_lo, r_hi = _lattice_rays(cone, B)
            if r_lo is None:
                return None
            # integer rows: the solver's feasibility tolerance cannot let a tangent class in
            if r_lo == r_hi:
                prog.row({p: r_lo[1], q: -r_lo[0]}, 0, 0)
                prog.row({p: r_lo[0], q: r_lo[1]}, lo=1)
            else:
                prog.row({p: -r_lo[1], q: r_lo[0]}, lo=0)
                prog.row({p: r_hi[1], q: -r_hi[0]}, lo=0)
                prog.row({p: r_hi[1] - r_lo[1], q: r_lo[0] - r_hi[0]}, lo=1)
            for x in (p, q):
                ax = prog.var(0, B)
                prog.row({ax: 1, x: -1}, lo=0)
                prog.row({ax: 1, x: 1}, lo=0)
                size[ax] = 1
        cls_vars[fam.id] = vs
        cones[fam.id] = fam_cones

        for j, locus in enumerate(fam.loci):
            P, Q = locus.orbit
            K = (2 * B) // max(abs(P), abs(Q))
            (p0, q0), (p1, q1) = vs[j], vs[j + 1]
            k, z, kabs = prog.var(-K, K), prog.binary(), prog.var(0, K)
            prog.row({p1: 1, p0: -1, k: -P}, 0, 0)
            prog.row({q1: 1, q0: -1, k: -Q}, 0, 0)
            prog.row({k: 1, z: -K}, hi=0)
            prog.row({k: -1, z: -K}, hi=0)
            prog.row({kabs: 1, k: -1}, lo=0)
            prog.row({kabs: 1, k: 1}, lo=0)
            Md = B * (abs(P) + abs(Q))
            dabs = prog.var(0, Md)
            # dabs >= |det(c_minus, orbit)| when the junction is used
            prog.row({p0: Q, q0: -P, z: Md, dabs: -1}, hi=Md)
            prog.row({p0: -Q, q0: P, z: Md, dabs: -1}, hi=Md)
            boundary[z] = 1
            mult[kabs] = 1
            neg_chi[dabs] = 1

        for which, idx in (("lo", 0), ("hi", len(vs) - 1)):
            end = fam.end(which)
            if end.kind == BROKEN:
                continue
            p, q = vs[idx]
            # the coordinate that must vanish for a transverse end, and the one counted in chi
            killed, counted = (q, p) if end.kind == VERTICAL else (p, q)
            axis = (1, 0) if end.kind == VERTICAL else (0, 1)
            z, a = prog.binary(), prog.var(0, B)
            prog.row({killed: 1, z: -B}, hi=0)
            prog.row({killed: -1, z: -B}, hi=0)
            prog.row({a: 1, killed: -1}, lo=0)
            prog.row({a: 1, killed: 1}, lo=0)
            cone = cones[fam.id][idx]
            sign = 1 if cone.contains(axis) else (-1 if cone.contains((-axis[0], -axis[1])) else 0)
            w = prog.var(0, B if sign else 0)
            if sign:
                prog.row({w: 1, counted: -sign, z: -B}, hi=0)
                prog.row({w: 1, z: B}, hi=B)
            boundary[z] = 1
            mult[a] = 1
            neg_chi[w] = -1

    face_vars = {}
    for fam in families:
        for which, idx in (("lo", 0), ("hi", len(cls_vars[fam.id]) - 1)):
            end = fam.end(which)
            if end.kind == BROKEN:
                face_vars[(end.broken_id, end.face_id)] = cls_vars[fam.id][idx]
    for bt in brokens_in:
        u = prog.binary()
        common, summed = (0, 1) if bt.orientation == VERTICAL else (1, 0)
        faces = [f.id for f in bt.faces]
        ref = face_vars[(bt.id, faces[0])][common]
        for fid in faces[1:]:
            x = face_vars[(bt.id, fid)][common]
            prog.row({x: 1, ref: -1, u: -2 * B}, hi=0)
            prog.row({x: -1, ref: 1, u: -2 * B}, hi=0)
        M = B * len(faces)
        sums: Dict[int, float] = {u: -M}
        for f in bt.faces:
            x = face_vars[(bt.id, f.id)][summed]
            sums[x] = sums.get(x, 0) + (1 if f.side == MINUS else -1)
        prog.row(sums, hi=0)
        prog.row({**{k: -v for k, v in sums.items() if k != u}, u: -M}, hi=0)
        sigma = prog.binary()
        prog.row({ref: 1, u: B + 1, sigma: B + 1}, lo=1)
        prog.row({ref: 1, u: -(B + 1), sigma: B + 1}, hi=B)
        boundary[u] = 1
        mult[u] = 1
        undet[u] = 1

    stages = [boundary, mult, undet, neg_chi, size]
    complete = True
    x = None
    for stage in stages:
        res = prog.solve(stage, obj.time_limit)
        if res.x is None:
            if x is None:
                # infeasible, or the time limit hit before any plan was found
                return None
            complete = False
            break
        x = res.x
        if res.status != 0:
            complete = False
        best = sum(v * x[j] for j, v in stage.items())
        prog.row(dict(stage), hi=math.floor(best + 0.5) + 1e-6)
    val = lambda j: int(round(x[j]))
    classes = {fid: [(val(p), val(q)) for p, q in vs] for fid, vs in cls_vars.items()}
    return classes, complete


def _chain_dp(fam, obj: SynthesisObjective):
    """Exact optimum for a family whose two ends are orbits, by dynamic programming.

    States are the classes allowed on each interval between rational tori.
    The lexicographic cost is packed into one integer with weights large
    enough that no lower priority can outweigh a higher one.
    """
    B = obj.bound
    cuts = _cuts(fam)
    cands = []
    for a, b in zip(cuts[:-1], cuts[1:]):
        cone = admissible_cone(fam.directions.restrict(a, b))
        pts = integer_points_in_cone(cone, B)
        if not pts:
            return None
        cands.append(np.array([c.as_list() for c in pts], dtype=np.int64))
    n_int = len(cands)
    span = 2 * B + 1
    size_w = 1
    chi_w = size_w * (2 * B * n_int + 1)
    chi_max = 2 * B + sum(B * (abs(l.orbit.p) + abs(l.orbit.q)) for l in fam.loci)
    mult_w = chi_w * (2 * chi_max + 1)
    mult_max = 2 * B + sum((2 * B) // max(abs(l.orbit.p), abs(l.orbit.q)) for l in fam.loci)
    bnd_w = mult_w * (mult_max + 1)
    if bnd_w * (n_int + 2) >= 2 ** 62:
        raise OverflowError("instance too large for packed costs")

    def end_cost(which, c):
        end = fam.end(which)
        killed, counted = (c[:, 1], c[:, 0]) if end.kind == VERTICAL else (c[:, 0], c[:, 1])
        forced = killed != 0
        return np.where(forced, bnd_w + mult_w * np.abs(killed), -chi_w * np.abs(counted))

    def size(c):
        return size_w * (np.abs(c[:, 0]) + np.abs(c[:, 1]))

    cost = end_cost("lo", cands[0]) + size(cands[0])
    back = []
    for j, locus in enumerate(fam.loci):
        nxt = cands[j + 1]
        lookup = np.full(span * span, -1, dtype=np.int64)
        lookup[(nxt[:, 0] + B) * span + nxt[:, 1] + B] = np.arange(len(nxt))
        best = np.full(len(nxt), np.iinfo(np.int64).max, dtype=np.int64)
        arg = np.full(len(nxt), -1, dtype=np.int64)
        cur = cands[j]
        P, Q = locus.orbit
        K = (2 * B) // max(abs(P), abs(Q))
        djump = np.abs(cur[:, 0] * Q - cur[:, 1] * P)
        for k in sorted(range(-K, K + 1), key=lambda k: (abs(k), k)):
            tgt = cur + k * np.array([P, Q])
            ok = np.all(np.abs(tgt) <= B, axis=1)
            idx = np.where(ok, lookup[np.clip((tgt[:, 0] + B) * span + tgt[:, 1] + B, 0, span * span - 1)], -1)
            ok &= idx >= 0
            step = cost.copy() if k == 0 else cost + bnd_w + mult_w * abs(k) + chi_w * djump
            src = np.nonzero(ok)[0]
            order = np.lexsort((src, step[src]))
            src = src[order]
            dst = idx[src]
            # first occurrence per destination is the cheapest (ties: smallest source index)
            _, first = np.unique(dst, return_index=True)
            src, dst = src[first], dst[first]
            better = step[src] < best[dst]
            best[dst[better]] = step[src[better]]
            arg[dst[better]] = src[better]
        reach = arg >= 0
        cost = np.where(reach, best + size(nxt), np.iinfo(np.int64).max // 2)
        back.append(arg)
    total = np.where(cost < np.iinfo(np.int64).max // 2, cost + end_cost("hi", cands[-1]), np.iinfo(np.int64).max)
    i = int(np.argmin(total))
    if total[i] == np.iinfo(np.int64).max:
        return None
    path = [i]
    for arg in reversed(back):
        path.append(int(arg[path[-1]]))
    path.reverse()
    return [tuple(int(v) for v in cands[j][i]) for j, i in enumerate(path)]


def _components(m: FoliatedManifold):
    """Groups of families coupled through broken tori, with their broken tori."""
    groups = {f.id: {f.id} for f in m.families}
    for bt in m.broken:
        fams = {f.family for f in bt.faces}
        merged = set().union(*(groups[f] for f in fams))
        for f in merged:
            groups[f] = merged
    seen, out = set(), []
    for fam in m.families:
        if fam.id in seen:
            continue
        ids = groups[fam.id]
        seen |= ids
        out.append(([f for f in m.families if f.id in ids],
                    [b for b in m.broken if any(f.family in ids for f in b.faces)]))
    return out


def synthesize_section(m: FoliatedManifold, obj: Optional[SynthesisObjective] = None) -> Optional[SectionPlan]:
    """Optimal plan among those with every class entry bounded by ``obj.bound``.

    Families coupled through broken tori are solved together; the objective
    is additive, so independent groups can be optimized one at a time.
    Returns ``None`` when no plan exists within the bound.
    """
    obj = obj or SynthesisObjective()
    classes = {}
    complete = True
    for fams, brokens in _components(m):
        if not brokens and len(fams) == 1:
            got = _chain_dp(fams[0], obj)
            if got is None:
                return None
            classes[fams[0].id] = got
        else:
            got = _milp_component(fams, brokens, obj)
            if got is None:
                return None
            classes.update(got[0])
            complete &= got[1]
    return plan_from_interval_classes(m, classes, bound=obj.bound, complete=complete,
                                      objective=OBJECTIVE_NOTE)


def plan_from_interval_classes(m: FoliatedManifold, classes, bound=None, complete=True,
                               objective="") -> SectionPlan:
    """Assemble a plan from one class per interval between consecutive rational tori.

    Boundary orbits are derived from the classes: orbit ends, used
    junctions, and broken tori whose balance equations fail.
    """
    segments: List[Segment] = []
    bounds: List[BoundaryOrbit] = []
    for fam in m.families:
        cuts = _cuts(fam)
        cls = [HomologyClass(*c) for c in classes[fam.id]]
        if len(cls) != len(cuts) - 1:
            raise ValueError(f"family {fam.id!r} needs {len(cuts) - 1} interval classes")
        start = 0
        for i in range(1, len(cls) + 1):
            if i < len(cls) and cls[i] == cls[start]:
                continue
            segments.append(Segment(
                fam.id, cuts[start], cuts[i], cls[start],
                lo_end=fam.end_lo if start == 0 else None,
                hi_end=fam.end_hi if i == len(cls) else None,
                lo_orbit=fam.loci[start - 1].orbit if start > 0 else None,
                hi_orbit=fam.loci[i - 1].orbit if i < len(cls) else None))
            if i < len(cls):
                k = junction_multiplicity(fam.loci[i - 1].orbit, cls[start], cls[i])
                bounds.append(BoundaryOrbit.at_junction(fam.id, cuts[i], fam.loci[i - 1].orbit, abs(k)))
            start = i
        for which, c in (("lo", cls[0]), ("hi", cls[-1])):
            end = fam.end(which)
            if end.kind != BROKEN and end_boundary_multiplicity(end, c):
                bounds.append(BoundaryOrbit.at_end(fam.id, which, end_boundary_multiplicity(end, c)))
    for bt in m.broken:
        face_cls = {}
        for f in bt.faces:
            fam = m.family(f.family)
            is_lo = fam.end_lo.kind == BROKEN and fam.end_lo.broken_id == bt.id and fam.end_lo.face_id == f.id
            face_cls[f.id] = HomologyClass(*classes[fam.id][0 if is_lo else -1])
        if not broken_balance_check(bt, face_cls):
            bounds.append(BoundaryOrbit.at_broken(bt.id, sorted(bt.vertices)[0], 1))
    bounds.sort(key=lambda b: (b.kind, b.family or b.broken or "", b.s if b.s is not None else -1.0, b.which or ""))
    plan = SectionPlan(tuple(segments), tuple(bounds), bound=bound, complete=complete, objective=objective)
    ok, diags = plan_is_valid(m, plan)
    if not ok:
        raise RuntimeError("assembled plan failed validation: " + "; ".join(map(str, diags)))
    return plan
