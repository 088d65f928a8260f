"""Curves whose normals sweep more than a full turn need more boundary orbits.

Each extra semicircular bulge adds one complete sweep of the normal and
so forces one more boundary component.  The synthesized plan meets that
lower bound.

    python3 demos/semicircle_boundaries.py [K_MAX]
"""
import sys

from birkhoff_sections import (boundary_orbit_lower_bound, make_k_semicircle_curve,
                               synthesize_section, toric_model)

k_max = int(sys.argv[1]) if len(sys.argv) > 1 else 4
print(f"{'k':>2} {'lower bound':>12} {'plan boundary':>14}  classes")
for k in range(1, k_max + 1):
    c = make_k_semicircle_curve(k)
    plan = synthesize_section(toric_model(c))
    classes = sorted({repr(s.cls) for s in plan.segments})
    print(f"{k:>2} {boundary_orbit_lower_bound(c):>12} {plan.n_boundary:>14}  {', '.join(classes)}")
