"""JSON and CSV readers/writers for manifolds, curves, profiles and plans."""
from __future__ import annotations

import csv
import io as _io
import json
from pathlib import Path
from typing import Any, List, Optional

import numpy as np

from .directions import QUADRANT, DirectionSet
from .foliation import (BROKEN, BrokenTorusGraph, Face, FoliatedManifold, RationalLocus,
                        TorusEnd, TorusFamily)
from .homology import HomologyClass, as_orbit
from .sections import (BROKEN_ORBIT, JUNCTION, ORBIT_END, BoundaryOrbit, Segment, SectionPlan)
from .separable import Profile1D
from .toric import ToricBoundaryCurve, load_curve

SCHEMA_VERSION = 1
FLOAT_DIGITS = 9


class InputError(ValueError):
    """Malformed input file; the message carries the location."""


def rounded(obj: Any, digits: int = FLOAT_DIGITS):
    """Recursively round floats so emitted JSON is stable across platforms."""
    if isinstance(obj, float):
        if not np.isfinite(obj):
            return None
        r = round(obj, digits)
        return 0.0 if r == 0 else r
    if isinstance(obj, (np.floating,)):
        return rounded(float(obj), digits)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    if isinstance(obj, dict):
        return {str(k): rounded(v, digits) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [rounded(v, digits) for v in obj]
    if isinstance(obj, HomologyClass):
        return obj.as_list()
    return obj


def dumps(report: dict) -> str:
    """Deterministic JSON text: sorted keys, fixed float precision, LF, trailing newline."""
    return json.dumps(rounded(report), sort_keys=True, indent=2, ensure_ascii=False) + "\n"


# -- manifolds ---------------------------------------------------------------

def _end_to_dict(e: TorusEnd) -> dict:
    if e.kind == BROKEN:
        return {"kind": e.kind, "broken_id": e.broken_id, "face_id": e.face_id}
    return {"kind": e.kind}


def _end_from_dict(d: dict, where: str) -> TorusEnd:
    try:
        return TorusEnd(d["kind"], d.get("broken_id"), d.get("face_id"))
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"{where}: bad end {d!r} ({exc})") from None


def manifold_to_dict(m: FoliatedManifold) -> dict:
    fams = []
    for f in m.families:
        if f.directions.is_symbolic:
            dirs: Any = f.directions.symbolic
        else:
            dirs = {"params": f.directions.params.tolist(), "vectors": f.directions.vectors.tolist()}
        fams.append({"id": f.id, "s_lo": f.s_lo, "s_hi": f.s_hi, "directions": dirs,
                     "end_lo": _end_to_dict(f.end_lo), "end_hi": _end_to_dict(f.end_hi),
                     "loci": [{"s": l.s, "orbit": l.orbit.as_list()} for l in f.loci]})
    broken = [{"id": b.id, "orientation": b.orientation, "vertices": list(b.vertices),
               "edges": {k: list(v) for k, v in b.edges.items()},
               "faces": [{"id": fc.id, "side": fc.side, "edges": list(fc.edges), "family": fc.family}
                         for fc in b.faces]}
              for b in m.broken]
    return {"schema_version": SCHEMA_VERSION, "families": fams, "broken": broken}


def manifold_from_dict(d: dict) -> FoliatedManifold:
    if not isinstance(d, dict) or "families" not in d:
        raise InputError("manifold JSON needs a 'families' list")
    fams = []
    for i, f in enumerate(d["families"]):
        where = f"families[{i}]"
        try:
            dirs = f["directions"]
            if dirs == QUADRANT:
                ds = DirectionSet.quadrant()
            else:
                ds = DirectionSet(np.array(dirs["params"], float), np.array(dirs["vectors"], float))
            loci = tuple(RationalLocus(float(l["s"]), as_orbit(l["orbit"])) for l in f.get("loci", []))
            fams.append(TorusFamily(str(f["id"]), float(f["s_lo"]), float(f["s_hi"]), ds,
                                    _end_from_dict(f["end_lo"], where), _end_from_dict(f["end_hi"], where),
                                    loci))
        except InputError:
            raise
        except (KeyError, TypeError, ValueError) as exc:
            raise InputError(f"{where}: {exc}") from None
    broken = []
    for i, b in enumerate(d.get("broken", [])):
        try:
            faces = tuple(Face(str(fc["id"]), fc["side"], tuple(fc["edges"]), str(fc["family"]))
                          for fc in b["faces"])
            broken.append(BrokenTorusGraph(str(b["id"]), b["orientation"], tuple(b["vertices"]),
                                           {k: tuple(v) for k, v in b["edges"].items()}, faces))
        except (KeyError, TypeError, ValueError) as exc:
            raise InputError(f"broken[{i}]: {exc}") from None
    return FoliatedManifold(tuple(fams), tuple(broken))


# -- plans -------------------------------------------------------------------

def plan_from_dict(d: dict, m: FoliatedManifold) -> SectionPlan:
    """Read a user plan: segments with classes plus boundary records."""
    segs = []
    by_fam = {}
    for i, s in enumerate(d.get("segments", [])):
        try:
            by_fam.setdefault(s["family"], []).append(
                (float(s["s_lo"]), float(s["s_hi"]), HomologyClass(*s["class"])))
        except (KeyError, TypeError, ValueError) as exc:
            raise InputError(f"segments[{i}]: {exc}") from None
    for fid, items in by_fam.items():
        fam = m.family(fid)
        items.sort()
        loci = {round(l.s, 9): l.orbit for l in fam.loci}
        for j, (lo, hi, c) in enumerate(items):
            segs.append(Segment(fid, lo, hi, c,
                                lo_end=fam.end_lo if j == 0 else None,
                                hi_end=fam.end_hi if j == len(items) - 1 else None,
                                lo_orbit=loci.get(round(lo, 9)) if j > 0 else None,
                                hi_orbit=loci.get(round(hi, 9)) if j < len(items) - 1 else None))
    bounds = []
    for i, b in enumerate(d.get("boundaries", [])):
        try:
            kind = b["kind"]
            if kind == ORBIT_END:
                bounds.append(BoundaryOrbit.at_end(b["family"], b["end"], int(b["multiplicity"])))
            elif kind == JUNCTION:
                bounds.append(BoundaryOrbit.at_junction(b["family"], float(b["s"]), b["orbit"],
                                                        int(b["multiplicity"])))
            elif kind == BROKEN_ORBIT:
                bounds.append(BoundaryOrbit.at_broken(b["broken"], b["vertex"], int(b.get("multiplicity", 1))))
            else:
                raise ValueError(f"unknown boundary kind {kind!r}")
        except (KeyError, TypeError, ValueError) as exc:
            raise InputError(f"boundaries[{i}]: {exc}") from None
    return SectionPlan(tuple(segs), tuple(bounds))


# -- curves and profiles -----------------------------------------------------

def parse_curve_text(text: str, name: str = "<curve>") -> ToricBoundaryCurve:
    """Curve from a JSON list of ``[x, y]`` pairs or from two-column CSV (header optional)."""
    stripped = text.lstrip()
    if stripped.startswith("[") or stripped.startswith("{"):
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise InputError(f"{name}: line {exc.lineno}: {exc.msg}") from None
        if isinstance(data, dict):
            data = data.get("points", data)
        pts = data
    else:
        pts = []
        for lineno, row in enumerate(csv.reader(_io.StringIO(text)), start=1):
            if not row or all(not c.strip() for c in row) or row[0].lstrip().startswith("#"):
                continue
            try:
                x, y = float(row[0]), float(row[1])
            except (ValueError, IndexError):
                if not pts:
                    continue  # header line
                raise InputError(f"{name}: line {lineno}: expected two numbers, got {row!r}") from None
            pts.append((x, y))
    try:
        return load_curve(pts)
    except ValueError as exc:
        raise InputError(f"{name}: {exc}") from None


def read_curve(path) -> ToricBoundaryCurve:
    p = Path(path)
    return parse_curve_text(p.read_text(encoding="utf-8"), str(p))


def curve_to_json(c: ToricBoundaryCurve) -> str:
    return dumps({"schema_version": SCHEMA_VERSION, "points": c.points.tolist()})


def read_profiles(path):
    """``{"g1": [...], "g2": [...]}`` or a single list used for both summands."""
    p = Path(path)
    try:
        data = json.loads(p.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise InputError(f"{p}: line {exc.lineno}: {exc.msg}") from None
    try:
        if isinstance(data, list):
            g = Profile1D.from_dicts(data)
            return g, g
        return Profile1D.from_dicts(data["g1"]), Profile1D.from_dicts(data["g2"])
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"{p}: {exc}") from None


def read_json(path) -> dict:
    p = Path(path)
    try:
        return json.loads(p.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise InputError(f"{p}: line {exc.lineno}: {exc.msg}") from None
