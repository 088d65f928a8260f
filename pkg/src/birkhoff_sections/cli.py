"""Command line entry point: ``birkhoff-sections <subcommand> ...``.

Every subcommand prints (or writes with ``--out``) one JSON report carrying
``schema_version``.  Exit status is 0 iff the report has no errors.
"""
from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import List, Optional

import numpy as np

from . import io as bio
from .foliation import validate_manifold
from .sections import (PlanError, genus_of_plan, plan_is_valid, plan_to_dict,
                       verify_plan_numeric)
from .separable import (SeparableSystem, SingularLevelError, build_level_foliation,
                        disk_gss_decision, sublevel_component_count)
from .synthesis import SynthesisObjective, synthesize_section
from .toric import (FAMILY_ID, annulus_is_signed_transverse, annulus_section,
                    boundary_orbit_lower_bound, classify_domain, disk_section_at_end,
                    inscribed_triangle_capacity, interior_orbit_section, make_k_semicircle_curve,
                    toric_model)

EXIT_OK = 0
EXIT_ERRORS = 1


@dataclass(frozen=True)
class RunConfig:
    subcommand: str
    input: Optional[str] = None
    output: Optional[str] = None
    bound: int = 12
    tol: float = 1e-9
    svg: Optional[str] = None
    seed: Optional[int] = None
    level: Optional[float] = None
    plan: Optional[str] = None
    k: int = 1
    loci_bound: int = 2

    def __post_init__(self):
        if self.bound < 1:
            raise ValueError("--bound must be at least 1")
        if not self.tol > 0:
            raise ValueError("--tol must be positive")


def _error(kind: str, message: str, **extra) -> dict:
    out = {"type": kind, "message": message}
    out.update(extra)
    return out


def _report(subcommand: str, errors: List[dict], **body) -> dict:
    return {"schema_version": bio.SCHEMA_VERSION, "subcommand": subcommand,
            "ok": not errors, "errors": errors, **body}


def _plan_block(m, plan, tol):
    if plan is None:
        return None
    out = plan_to_dict(plan, m)
    check = verify_plan_numeric(m, plan, tol=tol)
    out["numeric_check"] = {"ok": check["ok"],
                            "min_margin": min((s["min_margin"] for s in check["segments"]), default=None)}
    return out


# -- subcommands -------------------------------------------------------------

def cmd_analyze_toric(cfg: RunConfig) -> dict:
    try:
        c = bio.read_curve(cfg.input)
    except (bio.InputError, OSError) as exc:
        return _report(cfg.subcommand, [_error("input", str(exc))])
    dom = classify_domain(c)
    gss_cls = annulus_section(c, gss=True, bound=cfg.bound, tol=cfg.tol)
    ann = annulus_section(c, bound=cfg.bound, tol=cfg.tol)
    m = toric_model(c, loci_bound=cfg.loci_bound)

    interior = []
    for locus in m.family(FAMILY_ID).loci:
        if locus.orbit.p == 0 or locus.orbit.q == 0:
            continue
        p = interior_orbit_section(c, locus.s, locus.orbit)
        if p is None:
            continue
        # the constructed plan lives on the model with this torus marked
        interior.append({"s0": locus.s, "orbit": locus.orbit.as_list(),
                         "genus": genus_of_plan(p)})

    report = {
        "domain": dom.as_dict(),
        "clauses": {
            "disk_at_end_0": disk_section_at_end(c, 0, cfg.tol),
            "disk_at_end_1": disk_section_at_end(c, 1, cfg.tol),
            "annulus": None if ann is None else {
                "class": ann.as_list(), "signed_transverse": annulus_is_signed_transverse(c, ann)},
            "annulus_gss": None if gss_cls is None else gss_cls.as_list(),
            "interior_orbit": interior,
        },
        "boundary_orbit_lower_bound": boundary_orbit_lower_bound(c, cfg.tol),
        "curve": {"n_points": len(c.points), "a": c.a, "b": c.b},
    }
    if dom.monotone:
        r, s_star = inscribed_triangle_capacity(c)
        report["capacity"] = {"r": r, "s_star": s_star, "touch_point": c.point_at(s_star).tolist(),
                              "c_B": r, "c_Z": r, "disk_section_area": r}
    else:
        report["capacity"] = None
    plan = synthesize_section(m, SynthesisObjective(bound=cfg.bound))
    report["plan"] = _plan_block(m, plan, cfg.tol)
    if cfg.svg:
        from .plots import toric_svg
        toric_svg(c, cfg.svg)
    return _report(cfg.subcommand, [], **report)


def cmd_analyze_separable(cfg: RunConfig) -> dict:
    try:
        g1, g2 = bio.read_profiles(cfg.input)
    except (bio.InputError, OSError) as exc:
        return _report(cfg.subcommand, [_error("input", str(exc))])
    sys_ = SeparableSystem(g1, g2)
    c = cfg.level
    try:
        m = build_level_foliation(sys_, c)
        dec = disk_gss_decision(sys_, c)
    except SingularLevelError as exc:
        v1, v2 = exc.pair if exc.pair else (None, None)
        return _report(cfg.subcommand, [_error("singular-level", str(exc), c=c, v1=v1, v2=v2)],
                       regular=False)
    except ValueError as exc:
        return _report(cfg.subcommand, [_error("input", str(exc))])
    plan = synthesize_section(m, SynthesisObjective(bound=cfg.bound))
    report = {
        "level": c,
        "regular": True,
        "sublevel_components": {"g1": sublevel_component_count(g1, c),
                                "g2": sublevel_component_count(g2, c)},
        "foliation": {"families": [f.id for f in m.families],
                      "broken_tori": [b.id for b in m.broken]},
        "disk_gss": {"answer": dec.answer, "witness": dec.witness,
                     "violated_clause": dec.violated_clause, "A": dec.A, "B": dec.B},
        "plan": _plan_block(m, plan, cfg.tol),
    }
    if cfg.svg:
        from .plots import separable_svg
        separable_svg(sys_, c, cfg.svg)
    return _report(cfg.subcommand, [], **report)


def cmd_analyze_foliation(cfg: RunConfig) -> dict:
    try:
        m = bio.manifold_from_dict(bio.read_json(cfg.input))
    except (bio.InputError, OSError) as exc:
        return _report(cfg.subcommand, [_error("input", str(exc))])
    diags = validate_manifold(m)
    if diags:
        return _report(cfg.subcommand,
                       [_error("manifold", d.message, location=d.location) for d in diags])
    errors: List[dict] = []
    plan = synthesize_section(m, SynthesisObjective(bound=cfg.bound))
    report = {"plan": _plan_block(m, plan, cfg.tol),
              "feasible_within_bound": plan is not None}
    if cfg.plan:
        try:
            user = bio.plan_from_dict(bio.read_json(cfg.plan), m)
            ok, pd = plan_is_valid(m, user)
        except (bio.InputError, OSError, KeyError) as exc:
            errors.append(_error("plan-input", str(exc)))
        else:
            report["user_plan"] = {"valid": ok,
                                   "diagnostics": [{"location": d.location, "message": d.message}
                                                   for d in pd]}
            if ok:
                try:
                    report["user_plan"]["topology"] = plan_to_dict(user, m)
                except PlanError as exc:
                    report["user_plan"]["topology_error"] = str(exc)
            else:
                errors.extend(_error("plan", d.message, location=d.location) for d in pd)
    if cfg.svg:
        from .plots import plan_svg
        plan_svg(m, plan, cfg.svg)
    return _report(cfg.subcommand, errors, **report)


def cmd_gen_semicircle(cfg: RunConfig) -> dict:
    if cfg.k < 1:
        return _report(cfg.subcommand, [_error("input", "k must be positive")])
    c = make_k_semicircle_curve(cfg.k)
    if cfg.svg:
        from .plots import toric_svg
        toric_svg(c, cfg.svg)
    return {"schema_version": bio.SCHEMA_VERSION, "points": c.points.tolist()}


COMMANDS = {
    "analyze-toric": cmd_analyze_toric,
    "analyze-separable": cmd_analyze_separable,
    "analyze-foliation": cmd_analyze_foliation,
    "gen-semicircle": cmd_gen_semicircle,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--bound", type=int, default=12, help="search bound B on class entries")
    common.add_argument("--tol", type=float, default=1e-9, help="tolerance on normalized determinants")
    common.add_argument("--svg", metavar="PATH", help="also write an SVG figure")
    common.add_argument("--out", metavar="PATH", help="write the JSON report here instead of stdout")
    common.add_argument("--seed", type=int, help="seed for corpus generators")

    ap = argparse.ArgumentParser(prog="birkhoff-sections",
                                 description="Decide and build surfaces of section on foliated 3-manifolds.")
    sub = ap.add_subparsers(dest="subcommand", required=True)
    t = sub.add_parser("analyze-toric", parents=[common], help="boundary curve of a toric domain")
    t.add_argument("input", help="curve file: JSON list of [x, y] or two-column CSV")
    t.add_argument("--loci-bound", type=int, default=2, help="largest entry of rational tori marked on the curve")
    s = sub.add_parser("analyze-separable", parents=[common], help="separable Hamiltonian H1 + H2")
    s.add_argument("input", help='profiles JSON: {"g1": [...], "g2": [...]}')
    s.add_argument("--c", type=float, required=True, dest="level", help="energy level")
    f = sub.add_parser("analyze-foliation", parents=[common], help="foliated manifold JSON")
    f.add_argument("input")
    f.add_argument("--plan", help="user plan JSON to validate")
    g = sub.add_parser("gen-semicircle", parents=[common], help="star-shaped curve forcing k boundary orbits")
    g.add_argument("k", type=int)
    return ap


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = RunConfig(args.subcommand, getattr(args, "input", None), args.out, args.bound, args.tol,
                        args.svg, args.seed, getattr(args, "level", None), getattr(args, "plan", None),
                        getattr(args, "k", 1), getattr(args, "loci_bound", 2))
    except ValueError as exc:
        report = _report(args.subcommand, [_error("config", str(exc))])
    else:
        if cfg.seed is not None:
            np.random.seed(cfg.seed)
        report = COMMANDS[cfg.subcommand](cfg)
    text = bio.dumps(report)
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8", newline="\n")
    else:
        sys.stdout.write(text)
    return EXIT_OK if not report.get("errors") else EXIT_ERRORS


if __name__ == "__main__":
    sys.exit(main())
