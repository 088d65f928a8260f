"""Energy levels of separable Hamiltonians H = H1 + H2 with H_i = x^2/2 + g_i(y).

Only the critical points of the two profiles matter.  The circles of
``H1 = s`` correspond to components of ``{g1 <= s}``, so the tori of the level
``H = c`` are indexed by pairs of merge-tree arcs of the two profiles.

Homology convention: the ``H1`` circle is the horizontal generator and the
``H2`` circle the vertical one.  At a minimum of ``g1`` the ``H1`` circle
collapses and the torus ends on a vertical orbit; a saddle of ``g1`` gives a
broken torus made of vertical orbits.  Dually for ``g2``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .directions import DirectionSet
from .foliation import (HORIZONTAL, MINUS, PLUS, VERTICAL, FoliatedManifold, RationalLocus,
                        TorusEnd, TorusFamily, figure_eight)
from .homology import PrimitiveOrbitClass
from .sections import SectionPlan
from .synthesis import SynthesisObjective, synthesize_section

MIN = "min"
MAX = "max"
LEVEL_TOL = 1e-12


class ProfileError(ValueError):
    pass


class SingularLevelError(ValueError):
    """``pair`` holds the critical values ``(v1, v2)`` with ``v1 + v2 = c`` when known."""

    def __init__(self, msg, pair=None):
        super().__init__(msg)
        self.pair = pair


@dataclass(frozen=True)
class CriticalPoint:
    y: float
    value: float
    kind: str


@dataclass(frozen=True)
class Profile1D:
    """Critical points of ``g`` in increasing ``y``; ``g`` tends to infinity at both ends."""

    points: Tuple[CriticalPoint, ...]

    def __post_init__(self):
        pts = tuple(p if isinstance(p, CriticalPoint) else CriticalPoint(*p) for p in self.points)
        object.__setattr__(self, "points", pts)
        if not pts:
            raise ProfileError("profile needs at least one critical point")
        if any(p.kind not in (MIN, MAX) for p in pts):
            raise ProfileError("critical point kind must be 'min' or 'max'")
        ys = [p.y for p in pts]
        if any(b <= a for a, b in zip(ys, ys[1:])):
            raise ProfileError("critical points must have strictly increasing y")
        if pts[0].kind != MIN or pts[-1].kind != MIN:
            raise ProfileError("outermost critical points must be minima (g grows at both ends)")
        if any(a.kind == b.kind for a, b in zip(pts, pts[1:])):
            raise ProfileError("minima and maxima must alternate")
        for i, p in enumerate(pts):
            if p.kind == MAX and not (p.value > pts[i - 1].value and p.value > pts[i + 1].value):
                raise ProfileError(f"maximum at y={p.y} is not above its neighbouring minima")
        mins = [p.value for p in pts if p.kind == MIN]
        if min(mins) != 0 or mins.count(0) != 1:
            raise ProfileError("need a unique global minimum with value 0")
        # three sublevel pieces joining at one value would need a multi-saddle broken torus
        flat = [a for a in merge_tree(self) if a.lo == a.hi]
        if flat:
            ys = sorted({pts[a.start].y for a in flat} | {pts[a.end].y for a in flat})
            raise ProfileError(f"maxima at y={ys} merge sublevel components at the same value {flat[0].lo}; "
                               "perturb one of them")

    @classmethod
    def from_dicts(cls, items: Sequence[dict]) -> "Profile1D":
        return cls(tuple(CriticalPoint(float(d["y"]), float(d["value"]), str(d["kind"]).lower())
                         for d in items))

    def as_dicts(self) -> List[dict]:
        return [{"y": p.y, "value": p.value, "kind": p.kind} for p in self.points]

    def values(self, kind: Optional[str] = None) -> List[float]:
        return [p.value for p in self.points if kind is None or p.kind == kind]

    def merge_tree(self) -> List["Arc"]:
        return merge_tree(self)


@dataclass(frozen=True)
class SeparableSystem:
    g1: Profile1D
    g2: Profile1D


@dataclass(frozen=True)
class Arc:
    """A family of circles of ``{H_i = s}`` for ``s`` in ``(lo, hi)``.

    ``start`` is the index of the critical point where the arc is born (a
    minimum, or the maximum where two arcs merge); ``end`` the maximum where
    it dies, or ``None`` for the arc that lives forever.
    """

    id: str
    lo: float
    hi: float
    start: int
    end: Optional[int]
    children: Tuple[str, ...] = ()


def merge_tree(g: Profile1D) -> List[Arc]:
    """Arcs of the join tree of ``g``, children before parents."""
    pts = g.points
    parent = list(range(len(pts)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    current: Dict[int, dict] = {}
    done: List[dict] = []
    for i, p in enumerate(pts):
        if p.kind == MIN:
            current[i] = dict(id=f"m{i}", lo=p.value, start=i, children=())
    for i in sorted((i for i, p in enumerate(pts) if p.kind == MAX), key=lambda i: (pts[i].value, i)):
        left, right = find(i - 1), find(i + 1)
        kids = []
        for r in (left, right):
            arc = current.pop(r)
            arc.update(hi=pts[i].value, end=i)
            done.append(arc)
            kids.append(arc["id"])
        parent[left] = parent[right] = parent[i] = i
        current[i] = dict(id=f"M{i}", lo=pts[i].value, start=i, children=tuple(kids))
    (root,) = current.values()
    root.update(hi=math.inf, end=None)
    done.append(root)
    return [Arc(**a) for a in done]


def sublevel_component_count(g: Profile1D, s: float) -> int:
    """Connected components of ``{g <= s}`` (and of ``{H_i <= s}``)."""
    if any(abs(v - s) <= LEVEL_TOL for v in g.values()):
        raise SingularLevelError(f"singular level s={s}")
    return sum(1 for v in g.values(MIN) if v < s) - sum(1 for v in g.values(MAX) if v < s)


def is_regular_level(sys: SeparableSystem, c: float) -> bool:
    if c <= 0:
        raise ValueError("level must be positive")
    return all(abs(v1 + v2 - c) > LEVEL_TOL for v1 in sys.g1.values() for v2 in sys.g2.values())


def singular_pairs(sys: SeparableSystem, c: float) -> List[Tuple[float, float]]:
    """Critical value pairs with ``v1 + v2 = c``."""
    return [(v1, v2) for v1 in sys.g1.values() for v2 in sys.g2.values() if abs(v1 + v2 - c) <= LEVEL_TOL]


def _require_regular(sys, c):
    if not is_regular_level(sys, c):
        v1, v2 = singular_pairs(sys, c)[0]
        raise SingularLevelError(f"H = {c} is a singular level: v1 + v2 = {v1} + {v2}", (v1, v2))


def build_level_foliation(sys: SeparableSystem, c: float, near_axis_order: int = 3,
                          locus_offset: float = 0.01) -> FoliatedManifold:
    """Toric foliation of the regular level ``H = c``.

    Each family carries the symbolic open-quadrant flow.  Next to a broken
    torus the flow becomes nearly parallel to its invariant orbits, so a
    rational torus of class ``(1, N)`` (vertical broken torus) or ``(N, 1)``
    (horizontal) is placed a fraction ``locus_offset`` of the family's
    interval away from it, with ``N = near_axis_order``.
    """
    _require_regular(sys, c)
    if near_axis_order < 1:
        raise ValueError("near_axis_order must be >= 1")
    arcs1, arcs2 = merge_tree(sys.g1), merge_tree(sys.g2)
    by_id1 = {a.id: a for a in arcs1}
    by_id2 = {a.id: a for a in arcs2}
    p1, p2 = sys.g1.points, sys.g2.points
    fams = []
    # broken torus key -> {"singles": [...], "double": fam id}
    vert: Dict[Tuple[int, str], dict] = {}
    horiz: Dict[Tuple[str, int], dict] = {}
    for a in arcs1:
        for b in arcs2:
            lo = max(a.lo, c - b.hi)
            hi = min(a.hi, c - b.lo)
            if not lo < hi:
                continue
            fid = f"F[{a.id}x{b.id}]"
            ends, loci = {}, []
            # low end: either the g1 arc is born, or the g2 arc dies
            if a.lo > c - b.hi:
                if p1[a.start].kind == MIN:
                    ends["lo"] = TorusEnd.vertical()
                else:
                    key = (a.start, b.id)
                    vert.setdefault(key, {"singles": []})["double"] = fid
                    ends["lo"] = TorusEnd.face(_vid(key), "plus")
                    loci.append(RationalLocus(lo + locus_offset * (hi - lo), PrimitiveOrbitClass(1, near_axis_order)))
            else:
                key = (a.id, b.end)
                horiz.setdefault(key, {"singles": []})["singles"].append(fid)
                ends["lo"] = TorusEnd.face(_hid(key), f"plus-{b.id}")
                loci.append(RationalLocus(lo + locus_offset * (hi - lo), PrimitiveOrbitClass(near_axis_order, 1)))
            # high end: either the g1 arc dies, or the g2 arc is born
            if a.hi < c - b.lo:
                key = (a.end, b.id)
                vert.setdefault(key, {"singles": []})["singles"].append(fid)
                ends["hi"] = TorusEnd.face(_vid(key), f"minus-{a.id}")
                loci.append(RationalLocus(hi - locus_offset * (hi - lo), PrimitiveOrbitClass(1, near_axis_order)))
            else:
                if p2[b.start].kind == MIN:
                    ends["hi"] = TorusEnd.horizontal()
                else:
                    key = (a.id, b.start)
                    horiz.setdefault(key, {"singles": []})["double"] = fid
                    ends["hi"] = TorusEnd.face(_hid(key), "minus")
                    loci.append(RationalLocus(hi - locus_offset * (hi - lo), PrimitiveOrbitClass(near_axis_order, 1)))
            loci.sort(key=lambda l: l.s)
            fams.append(TorusFamily(fid, float(lo), float(hi), DirectionSet.quadrant(),
                                    ends["lo"], ends["hi"], tuple(loci)))
    broken = []
    for key in sorted(vert, key=str):
        d = vert[key]
        singles = [(f"minus-{_arc_of(fid, 0)}", fid) for fid in d["singles"]]
        broken.append(figure_eight(_vid(key), VERTICAL, singles, ("plus", d["double"]), singles_side=MINUS))
    for key in sorted(horiz, key=str):
        d = horiz[key]
        singles = [(f"plus-{_arc_of(fid, 1)}", fid) for fid in d["singles"]]
        broken.append(figure_eight(_hid(key), HORIZONTAL, singles, ("minus", d["double"]), singles_side=PLUS))
    return FoliatedManifold(tuple(fams), tuple(broken))


def _vid(key) -> str:
    return f"V[c{key[0]}|{key[1]}]"


def _hid(key) -> str:
    return f"H[{key[0]}|c{key[1]}]"


def _arc_of(fid: str, which: int) -> str:
    return fid[2:-1].split("x")[which]


# -- the disk criterion ------------------------------------------------------

@dataclass(frozen=True)
class DiskDecision:
    answer: bool
    witness: Optional[float] = None
    violated_clause: Optional[str] = None
    A: float = 0.0
    B: float = 0.0


def disk_gss_decision(sys: SeparableSystem, c: float) -> DiskDecision:
    """Whether ``H = c`` has a disk-like global surface of section.

    Both sublevel sets must be connected and the largest critical values
    ``A`` of ``g1`` and ``B`` of ``g2`` below ``c`` must satisfy ``A + B < c``;
    the witness ``c0`` splits the gap evenly.
    """
    _require_regular(sys, c)
    A = max(v for v in sys.g1.values() if v < c)
    B = max(v for v in sys.g2.values() if v < c)
    if sublevel_component_count(sys.g1, c) != 1:
        return DiskDecision(False, violated_clause="sublevel set of H1 is not connected", A=A, B=B)
    if sublevel_component_count(sys.g2, c) != 1:
        return DiskDecision(False, violated_clause="sublevel set of H2 is not connected", A=A, B=B)
    if not A + B < c:
        return DiskDecision(False, violated_clause="A + B < c fails", A=A, B=B)
    return DiskDecision(True, witness=A + (c - A - B) / 2, A=A, B=B)


def always_has_section(sys: SeparableSystem, c: float,
                       obj: Optional[SynthesisObjective] = None) -> SectionPlan:
    plan = synthesize_section(build_level_foliation(sys, c), obj)
    if plan is None:
        raise RuntimeError(f"no section found on H = {c} within the class bound")
    return plan


# -- profiles ----------------------------------------------------------------

def two_well_profile(low: float = 0.2, barrier: float = 0.3) -> Profile1D:
    """Global minimum 0, a second well at ``low`` and a barrier at ``barrier`` between them."""
    return Profile1D((CriticalPoint(0.0, 0.0, MIN), CriticalPoint(1.0, barrier, MAX),
                      CriticalPoint(2.0, low, MIN)))


def single_well_profile() -> Profile1D:
    return Profile1D((CriticalPoint(0.0, 0.0, MIN),))


def random_profile(rng: np.random.Generator, max_wells: int = 3, decimals: int = 2) -> Profile1D:
    """Random Morse profile with up to ``max_wells`` minima; values rounded to ``decimals``.

    Draws that merge two sublevel pieces into a third at the same value are
    discarded and redrawn.
    """
    while True:
        try:
            return _draw_profile(rng, max_wells, decimals)
        except ProfileError:
            continue


def _draw_profile(rng, max_wells, decimals):
    n = int(rng.integers(1, max_wells + 1))
    step = 10.0 ** -decimals
    zero = int(rng.integers(0, n))
    mins = [0.0 if i == zero else round(float(rng.uniform(0.05, 1.0)), decimals) for i in range(n)]
    pts = []
    for i, v in enumerate(mins):
        pts.append(CriticalPoint(float(2 * i), v, MIN))
        if i + 1 < n:
            top = max(v, mins[i + 1]) + max(step, round(float(rng.uniform(0.05, 0.6)), decimals))
            pts.append(CriticalPoint(float(2 * i + 1), round(top, decimals), MAX))
    return Profile1D(tuple(pts))


def random_regular_level(rng: np.random.Generator, sys: SeparableSystem, hi: float = 2.0) -> float:
    """A regular level drawn uniformly from ``(0, hi)`` at a resolution finer than the profile values."""
    while True:
        c = round(float(rng.uniform(0.01, hi)), 3) + 0.0005
        if is_regular_level(sys, c):
            return c
