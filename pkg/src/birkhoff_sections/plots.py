"""SVG figures for the CLI.  Presentation only; nothing here feeds a decision."""
from __future__ import annotations

import math
from typing import Optional

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from .directions import coverage_windows  # noqa: E402
from .foliation import FoliatedManifold  # noqa: E402
from .sections import SectionPlan  # noqa: E402
from .separable import SeparableSystem  # noqa: E402
from .toric import ToricBoundaryCurve, classify_domain, inscribed_triangle_capacity  # noqa: E402

# fixed metadata keeps the SVG bytes stable between runs
_SVG_META = {"Date": None, "Creator": None}


def _save(fig, path):
    plt.rcParams["svg.hashsalt"] = "birkhoff"
    fig.savefig(path, format="svg", metadata=_SVG_META)
    plt.close(fig)


def toric_svg(c: ToricBoundaryCurve, path, max_arrows: int = 60):
    """Domain, outward normals, coverage windows and (when monotone) the inscribed triangle."""
    fig, ax = plt.subplots(figsize=(5, 5))
    pts = c.points
    poly = np.vstack([[0, 0], pts, [0, 0]])
    ax.fill(poly[:, 0], poly[:, 1], color="#dde8f5", lw=0)
    ax.plot(pts[:, 0], pts[:, 1], color="#1f4e79", lw=1.5)
    mids = 0.5 * (pts[:-1] + pts[1:])
    step = max(1, len(mids) // max_arrows)
    scale = 0.06 * max(c.a, c.b)
    ax.quiver(mids[::step, 0], mids[::step, 1], c.normals[::step, 0], c.normals[::step, 1],
              angles="xy", scale_units="xy", scale=1 / scale, width=0.003, color="#c0504d")
    for i, (s0, s1) in enumerate(coverage_windows(c.directions())):
        sel = (c.mid_params >= s0) & (c.mid_params <= s1)
        ax.plot(mids[sel, 0], mids[sel, 1], lw=4, alpha=0.35, color="#9bbb59",
                label="full normal sweep" if i == 0 else None)
    if classify_domain(c).monotone:
        r, s_star = inscribed_triangle_capacity(c)
        ax.plot([0, r, 0, 0], [0, 0, r, 0], ls="--", color="#4f4f4f", label=f"triangle r={r:.4g}")
        touch = c.point_at(s_star)
        ax.plot([touch[0]], [touch[1]], "o", color="#4f4f4f")
    ax.set_aspect("equal")
    ax.set_xlim(0, None)
    ax.set_ylim(0, None)
    ax.set_xlabel("pi |z1|^2")
    ax.set_ylabel("pi |z2|^2")
    if ax.get_legend_handles_labels()[0]:
        ax.legend(loc="upper right", fontsize=8)
    _save(fig, path)


def separable_svg(sys_: SeparableSystem, c: float, path):
    """Critical values of both profiles against the level ``c``."""
    fig, axes = plt.subplots(1, 2, figsize=(8, 3.5), sharey=True)
    for ax, g, name in zip(axes, (sys_.g1, sys_.g2), ("g1", "g2")):
        ys = [p.y for p in g.points]
        vs = [p.value for p in g.points]
        pad = 1.0
        xs = [ys[0] - pad] + ys + [ys[-1] + pad]
        top = max(vs + [c]) * 1.3 + 0.1
        ax.plot(xs, [top] + vs + [top], color="#1f4e79")
        for p in g.points:
            ax.plot([p.y], [p.value], "v" if p.kind == "min" else "^", color="#c0504d")
        ax.axhline(c, ls="--", color="#4f4f4f", lw=1)
        ax.set_title(f"{name} (critical points, level c={c:g})", fontsize=9)
    _save(fig, path)


def plan_svg(m: FoliatedManifold, plan: Optional[SectionPlan], path):
    """One row per family: segments labelled by class, boundary orbits marked."""
    fams = list(m.families)
    fig, ax = plt.subplots(figsize=(7, 0.5 + 0.45 * len(fams)))
    for row, fam in enumerate(fams):
        ax.plot([fam.s_lo, fam.s_hi], [row, row], color="#bbbbbb", lw=6, solid_capstyle="butt")
        for l in fam.loci:
            ax.plot([l.s], [row], "|", color="#9bbb59", ms=12)
        if plan is None:
            continue
        for seg in plan.family_segments(fam.id):
            ax.plot([seg.s_lo, seg.s_hi], [row, row], lw=6, solid_capstyle="butt", alpha=0.6)
            ax.text(0.5 * (seg.s_lo + seg.s_hi), row + 0.18, repr(seg.cls), ha="center", fontsize=7)
    if plan is not None:
        rows = {f.id: i for i, f in enumerate(fams)}
        for b in plan.boundaries:
            if b.family is None:
                continue
            fam = m.family(b.family)
            s = b.s if b.s is not None else (fam.s_lo if b.which == "lo" else fam.s_hi)
            ax.plot([s], [rows[b.family]], "o", color="#c0504d")
    ax.set_yticks(range(len(fams)))
    ax.set_yticklabels([f.id for f in fams], fontsize=7)
    ax.set_xlabel("s")
    ax.set_ylim(-0.7, len(fams) - 0.3)
    _save(fig, path)
