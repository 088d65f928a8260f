"""Energy levels of a separable two-well Hamiltonian H = g(x) + g(y).

Below the barrier each factor splits into two intervals and the level set
breaks up.  A disk-like section exists exactly when a one-boundary plan is
found, and the two sides of that statement are computed independently
here.

    python3 demos/two_well.py
"""
from birkhoff_sections import (SeparableSystem, build_level_foliation, disk_gss_decision,
                               is_regular_level, synthesize_section, two_well_profile)
from birkhoff_sections.separable import sublevel_component_count

g = two_well_profile()
sys_ = SeparableSystem(g, g)
print("critical points:", [(p.y, p.value, p.kind) for p in g.points])

for c in (0.1, 0.25, 0.35, 0.5, 0.7, 1.2):
    if not is_regular_level(sys_, c):
        print(f"c={c}: singular level, skipped")
        continue
    m = build_level_foliation(sys_, c)
    dec = disk_gss_decision(sys_, c)
    plan = synthesize_section(m)
    nb = None if plan is None else plan.n_boundary
    why = dec.violated_clause or f"witness {dec.witness:.4g}"
    print(f"c={c}: sublevel pieces={sublevel_component_count(g, c)}, "
          f"families={len(m.families)}, broken tori={len(m.broken)}, "
          f"disk section={dec.answer} ({why}), plan boundaries={nb}")
