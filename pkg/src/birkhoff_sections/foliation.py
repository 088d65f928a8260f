"""Combinatorial model of a 3-manifold with a regular invariant toric foliation.

Families of invariant tori are glued along broken tori (directed graphs of
periodic orbits and invariant annuli) and end on periodic orbits.  One
global homology basis is used for every family.
"""
from __future__ import annotations

import itertools
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

import numpy as np
from scipy.optimize import Bounds, LinearConstraint, milp

from .directions import DirectionSet
from .homology import (HomologyClass, PrimitiveOrbitClass, as_class, as_orbit,
                       det, is_multiple_of)

VERTICAL = "vertical"
HORIZONTAL = "horizontal"
BROKEN = "broken"
MINUS = "minus"
PLUS = "plus"


class InvalidTransitionError(ValueError):
    """Classes on the two sides of a rational torus cannot belong to one section."""


@dataclass(frozen=True)
class TorusEnd:
    """Where a family of tori degenerates: a periodic orbit or one face of a broken torus."""

    kind: str
    broken_id: Optional[str] = None
    face_id: Optional[str] = None

    def __post_init__(self):
        if self.kind not in (VERTICAL, HORIZONTAL, BROKEN):
            raise ValueError(f"unknown end kind {self.kind!r}")
        if (self.kind == BROKEN) != (self.broken_id is not None and self.face_id is not None):
            raise ValueError("a broken-face end names exactly one broken torus and face")

    @classmethod
    def vertical(cls):
        return cls(VERTICAL)

    @classmethod
    def horizontal(cls):
        return cls(HORIZONTAL)

    @classmethod
    def face(cls, broken_id: str, face_id: str):
        return cls(BROKEN, broken_id, face_id)

    @property
    def is_orbit(self) -> bool:
        return self.kind != BROKEN


@dataclass(frozen=True)
class RationalLocus:
    s: float
    orbit: PrimitiveOrbitClass


@dataclass(frozen=True)
class TorusFamily:
    id: str
    s_lo: float
    s_hi: float
    directions: DirectionSet
    end_lo: TorusEnd
    end_hi: TorusEnd
    loci: Tuple[RationalLocus, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "loci", tuple(
            l if isinstance(l, RationalLocus) else RationalLocus(float(l[0]), as_orbit(l[1]))
            for l in self.loci))

    def end(self, which: str) -> TorusEnd:
        return self.end_lo if which == "lo" else self.end_hi


@dataclass(frozen=True)
class Face:
    id: str
    side: str
    edges: Tuple[str, ...]
    family: str


@dataclass(frozen=True)
class BrokenTorusGraph:
    """Periodic orbits (vertices) and invariant annuli (directed edges) of a broken torus.

    Each face is the limit of one adjacent family of tori; faces split into
    a minus side and a plus side.
    """

    id: str
    orientation: str
    vertices: Tuple[str, ...]
    edges: Mapping[str, Tuple[str, str]]
    faces: Tuple[Face, ...]

    def face(self, face_id: str) -> Face:
        for f in self.faces:
            if f.id == face_id:
                return f
        raise KeyError(f"broken torus {self.id!r} has no face {face_id!r}")

    def side(self, side: str) -> List[Face]:
        return [f for f in self.faces if f.side == side]


@dataclass(frozen=True)
class FoliatedManifold:
    families: Tuple[TorusFamily, ...]
    broken: Tuple[BrokenTorusGraph, ...] = ()

    def family(self, family_id: str) -> TorusFamily:
        for f in self.families:
            if f.id == family_id:
                return f
        raise KeyError(f"no family {family_id!r}")

    def broken_torus(self, broken_id: str) -> BrokenTorusGraph:
        for b in self.broken:
            if b.id == broken_id:
                return b
        raise KeyError(f"no broken torus {broken_id!r}")


@dataclass(frozen=True)
class Diagnostic:
    location: str
    message: str

    def __str__(self):
        return f"{self.location}: {self.message}"


def figure_eight(broken_id: str, orientation: str, single_faces: Sequence[Tuple[str, str]],
                 double_face: Tuple[str, str], singles_side: str = MINUS) -> BrokenTorusGraph:
    """Broken torus of one orbit and two annuli: two one-edge faces against one two-edge face.

    ``single_faces`` and ``double_face`` are ``(face_id, family_id)`` pairs.
    """
    other = PLUS if singles_side == MINUS else MINUS
    (fa, fam_a), (fb, fam_b) = single_faces
    fc, fam_c = double_face
    return BrokenTorusGraph(
        broken_id, orientation, ("o",), {"e1": ("o", "o"), "e2": ("o", "o")},
        (Face(fa, singles_side, ("e1",), fam_a), Face(fb, singles_side, ("e2",), fam_b),
         Face(fc, other, ("e1", "e2"), fam_c)))


def validate_manifold(m: FoliatedManifold, strict: bool = True, tol: float = 1e-6) -> List[Diagnostic]:
    """One diagnostic per violated structural invariant; empty when the model is sound."""
    out: List[Diagnostic] = []
    fam_ids = [f.id for f in m.families]
    for fid, n in Counter(fam_ids).items():
        if n > 1:
            out.append(Diagnostic(f"family {fid}", "duplicate family id"))
    broken_by_id = {b.id: b for b in m.broken}
    claims: Dict[Tuple[str, str], List[str]] = defaultdict(list)

    for fam in m.families:
        loc = f"family {fam.id}"
        if not fam.s_lo < fam.s_hi:
            out.append(Diagnostic(loc, "empty parameter interval"))
        ss = [l.s for l in fam.loci]
        if ss != sorted(ss) or len(set(ss)) != len(ss):
            out.append(Diagnostic(loc, "rational loci not strictly sorted"))
        for l in fam.loci:
            if not fam.s_lo < l.s < fam.s_hi:
                out.append(Diagnostic(loc, f"rational locus at s={l.s} outside the family"))
                continue
            if fam.directions.is_symbolic:
                if not (l.orbit.p > 0 and l.orbit.q > 0):
                    out.append(Diagnostic(loc, f"orbit {l.orbit!r} outside the open quadrant"))
            else:
                v = fam.directions.direction_at(l.s)
                if abs(det(l.orbit, v)) / np.hypot(*l.orbit) > tol:
                    out.append(Diagnostic(loc, f"orbit {l.orbit!r} not parallel to the flow at s={l.s}"))
        for which in ("lo", "hi"):
            end = fam.end(which)
            if end.kind != BROKEN:
                continue
            claims[(end.broken_id, end.face_id)].append(fam.id)
            b = broken_by_id.get(end.broken_id)
            if b is None:
                out.append(Diagnostic(loc, f"{which} end names missing broken torus {end.broken_id!r}"))
                continue
            try:
                face = b.face(end.face_id)
            except KeyError:
                out.append(Diagnostic(loc, f"{which} end names missing face {end.face_id!r} of {b.id!r}"))
                continue
            if face.family != fam.id:
                out.append(Diagnostic(loc, f"face {face.id!r} of {b.id!r} names family {face.family!r}"))

    for key, fams in claims.items():
        if len(fams) > 1:
            out.append(Diagnostic(f"broken {key[0]} face {key[1]}", f"claimed by several families {fams}"))

    for b in m.broken:
        out.extend(_validate_broken(b, fam_ids, claims, strict))
    return out


def _validate_broken(b: BrokenTorusGraph, fam_ids, claims, strict: bool) -> List[Diagnostic]:
    out: List[Diagnostic] = []
    loc = f"broken {b.id}"
    if b.orientation not in (VERTICAL, HORIZONTAL):
        out.append(Diagnostic(loc, f"unknown orientation {b.orientation!r}"))
    verts = set(b.vertices)
    degree: Counter = Counter()
    for e, (tail, head) in b.edges.items():
        if tail not in verts or head not in verts:
            out.append(Diagnostic(f"{loc} edge {e}", "endpoint is not a vertex"))
            continue
        degree[tail] += 1
        degree[head] += 1
    for v in b.vertices:
        if degree[v] % 2:
            out.append(Diagnostic(f"{loc} vertex {v}", "odd degree"))
    if not _connected(b):
        out.append(Diagnostic(loc, "graph is not connected"))

    uses = {MINUS: Counter(), PLUS: Counter()}
    for f in b.faces:
        floc = f"{loc} face {f.id}"
        if f.side not in uses:
            out.append(Diagnostic(floc, f"unknown side {f.side!r}"))
            continue
        if not f.edges:
            out.append(Diagnostic(floc, "face has no edges"))
        for e in f.edges:
            if e not in b.edges:
                out.append(Diagnostic(floc, f"unknown edge {e!r}"))
        faces_per_edge = Counter(f.edges)
        if strict and any(n > 1 for n in faces_per_edge.values()):
            out.append(Diagnostic(floc, "edge repeated within one face"))
        for e in faces_per_edge:
            uses[f.side][e] += 1
        if f.family not in fam_ids:
            out.append(Diagnostic(floc, f"names missing family {f.family!r}"))
        elif f.family not in claims.get((b.id, f.id), []):
            out.append(Diagnostic(floc, f"family {f.family!r} does not end on this face"))
    for e in b.edges:
        for side in (MINUS, PLUS):
            n = uses[side][e]
            if n != 1:
                out.append(Diagnostic(f"{loc} edge {e}", f"lies in {n} {side}-side faces (expected 1)"))
    return out


def _connected(b: BrokenTorusGraph) -> bool:
    if not b.vertices:
        return False
    adj = defaultdict(set)
    for tail, head in b.edges.values():
        adj[tail].add(head)
        adj[head].add(tail)
    seen = {b.vertices[0]}
    stack = [b.vertices[0]]
    while stack:
        v = stack.pop()
        for w in adj[v] - seen:
            seen.add(w)
            stack.append(w)
    return seen >= set(b.vertices)


def broken_balance_check(b: BrokenTorusGraph, classes: Mapping[str, HomologyClass]) -> bool:
    """Whether a section can cross ``b`` transversely given the adjacent families' classes.

    Vertical orbits: one common nonzero ``p`` and equal sums of ``q`` on the
    two sides.  Horizontal orbits: the transposed condition.
    """
    missing = [f.id for f in b.faces if f.id not in classes]
    if missing:
        raise KeyError(f"no class for faces {missing} of broken torus {b.id!r}")
    cls = {f.id: as_class(classes[f.id]) for f in b.faces}
    common, summed = (0, 1) if b.orientation == VERTICAL else (1, 0)
    shared = {c[common] for c in cls.values()}
    if len(shared) != 1 or 0 in shared:
        return False
    sums = [sum(cls[f.id][summed] for f in b.side(side)) for side in (MINUS, PLUS)]
    return sums[0] == sums[1]


def broken_edge_assignment(b: BrokenTorusGraph, face_values: Mapping[str, int]) -> Optional[Dict[str, int]]:
    """Integers on annuli so each face value is the sum over its edges, or ``None``.

    Faces with a single remaining edge are peeled first (their edge value is
    forced); the rest is an integer linear system.  Among all solutions the
    one with the smallest largest magnitude is returned, ties broken
    lexicographically in sorted edge order.
    """
    missing = [f.id for f in b.faces if f.id not in face_values]
    if missing:
        raise KeyError(f"no value for faces {missing} of broken torus {b.id!r}")
    rows = {f.id: Counter(f.edges) for f in b.faces}
    rhs = {f.id: int(face_values[f.id]) for f in b.faces}
    fixed: Dict[str, int] = {}

    # each annulus once on either side: both sides must carry the same total
    side_use = {MINUS: Counter(), PLUS: Counter()}
    for f in b.faces:
        side_use[f.side].update(f.edges)
    if side_use[MINUS] == side_use[PLUS]:
        totals = [sum(rhs[f.id] for f in b.side(side)) for side in (MINUS, PLUS)]
        if totals[0] != totals[1]:
            return None

    changed = True
    while changed:
        changed = False
        for fid in sorted(rows):
            row = rows[fid]
            if len(row) == 1:
                (e, mult), = row.items()
                if rhs[fid] % mult:
                    return None
                fixed[e] = rhs[fid] // mult
                _substitute(rows, rhs, b, e, fixed[e])
                changed = True
                break

    for fid, row in rows.items():
        if not row and rhs[fid] != 0:
            return None
    free = sorted({e for row in rows.values() for e in row})
    if not free:
        return {e: fixed[e] for e in sorted(b.edges)}
    solved = _solve_unique(rows, rhs, free)
    if solved is False:
        solved = _solve_min_maxabs_lex(rows, rhs, free)
    if solved is None:
        return None
    fixed.update(solved)
    return {e: fixed[e] for e in sorted(b.edges)}


def _substitute(rows, rhs, b: BrokenTorusGraph, edge: str, value: int):
    for f in b.faces:
        n = Counter(f.edges)[edge]
        if n:
            rhs[f.id] -= n * value
            rows[f.id].pop(edge, None)


def _solve_unique(rows, rhs, free: List[str]):
    """Integer solution when the system has full column rank, ``None`` if it has none.

    Returns ``False`` when the rank is deficient and an optimisation is needed.
    """
    active = [fid for fid in sorted(rows) if rows[fid]]
    idx = {e: i for i, e in enumerate(free)}
    A = np.zeros((len(active), len(free)), dtype=np.int64)
    for r, fid in enumerate(active):
        for e, mult in rows[fid].items():
            A[r, idx[e]] = mult
    if np.linalg.matrix_rank(A) < len(free):
        return False
    rhs_vec = np.array([rhs[fid] for fid in active], dtype=np.int64)
    x = np.rint(np.linalg.lstsq(A.astype(float), rhs_vec.astype(float), rcond=None)[0]).astype(np.int64)
    # exact integer check: rounding a non-solution never passes
    if not np.array_equal(A @ x, rhs_vec):
        return None
    return {e: int(x[i]) for i, e in enumerate(free)}


_LEX_ENUM_LIMIT = 50_000


def _solve_min_maxabs_lex(rows, rhs, free: List[str]) -> Optional[Dict[str, int]]:
    active = [fid for fid in sorted(rows) if rows[fid]]
    n = len(free)
    idx = {e: i for i, e in enumerate(free)}
    A = np.zeros((len(active), n + 1))
    b_eq = np.zeros(len(active))
    for r, fid in enumerate(active):
        for e, mult in rows[fid].items():
            A[r, idx[e]] = mult
        b_eq[r] = rhs[fid]
    # |x_i| <= z  as  x_i - z <= 0 and -x_i - z <= 0
    box = np.zeros((2 * n, n + 1))
    for i in range(n):
        box[2 * i, i], box[2 * i, n] = 1, -1
        box[2 * i + 1, i], box[2 * i + 1, n] = -1, -1
    big = 1 + sum(abs(v) for v in rhs.values())
    constraints = [LinearConstraint(A, b_eq, b_eq), LinearConstraint(box, -np.inf, 0)]
    bounds = Bounds(np.r_[-big * np.ones(n), 0], np.r_[big * np.ones(n), big])
    integrality = np.ones(n + 1)
    cost = np.zeros(n + 1)
    cost[n] = 1
    res = milp(cost, constraints=constraints, bounds=bounds, integrality=integrality)
    if not res.success:
        return None
    zstar = round(res.x[n])
    if (2 * zstar + 1) ** n <= _LEX_ENUM_LIMIT:
        # small box: the lexicographic minimum is the first solution in ij order
        rng = np.arange(-zstar, zstar + 1)
        grid = np.stack(np.meshgrid(*([rng] * n), indexing="ij"), axis=-1).reshape(-1, n)
        hit = np.flatnonzero(np.all(grid @ A[:, :n].T.astype(np.int64) == b_eq.astype(np.int64), axis=1))
        return {free[i]: int(v) for i, v in enumerate(grid[hit[0]])}
    lo = np.r_[-zstar * np.ones(n), zstar]
    hi = np.r_[zstar * np.ones(n), zstar]
    values: Dict[str, int] = {}
    for i in range(n):
        cost = np.zeros(n + 1)
        cost[i] = 1
        res = milp(cost, constraints=constraints, bounds=Bounds(lo, hi), integrality=integrality)
        xi = round(res.x[i])
        values[free[i]] = xi
        lo[i] = hi[i] = xi
    return values


def end_boundary_multiplicity(end: TorusEnd, c) -> int:
    """Covering multiplicity of the section boundary on an orbit end (0: no boundary)."""
    c = as_class(c)
    if end.kind == VERTICAL:
        return abs(c.q)
    if end.kind == HORIZONTAL:
        return abs(c.p)
    raise ValueError("a broken-face end is not a periodic-orbit end")


def junction_multiplicity(orbit, c_minus, c_plus) -> Optional[int]:
    """Signed multiplicity ``k`` with ``c_plus - c_minus = k * orbit``.

    ``None`` means the section crosses the rational torus without boundary.
    """
    orbit, c_minus, c_plus = as_orbit(orbit), as_class(c_minus), as_class(c_plus)
    if is_multiple_of(c_plus, orbit):
        raise InvalidTransitionError(f"class {c_plus!r} is a multiple of the orbit class {orbit!r}")
    diff = c_plus - c_minus
    if diff.is_zero():
        return None
    if not is_multiple_of(diff, orbit):
        raise InvalidTransitionError(f"difference {diff!r} is not parallel to orbit {orbit!r}")
    k = diff.p // orbit.p if orbit.p else diff.q // orbit.q
    return k
