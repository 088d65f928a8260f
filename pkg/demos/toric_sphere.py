"""Walk through the round sphere as a toric domain.

The boundary of the standard ball in C^2 is a straight segment in the
moment image.  Its outward normal never turns, so disks at both ends exist
and the synthesized section is a single disk bounded by one orbit.

    python3 demos/toric_sphere.py
"""
from birkhoff_sections import (annulus_section, boundary_orbit_lower_bound, classify_domain,
                               disk_section_at_end, genus_of_plan, inscribed_triangle_capacity,
                               round_sphere_curve, synthesize_section, toric_model)
from birkhoff_sections.sections import plan_to_dict

c = round_sphere_curve()
print("domain:", classify_domain(c).as_dict())

# which local models are available
print("disk at end 0:", disk_section_at_end(c, 0))
print("disk at end 1:", disk_section_at_end(c, 1))
print("annulus class:", annulus_section(c))
print("boundary orbits needed (lower bound):", boundary_orbit_lower_bound(c))

r, s_star = inscribed_triangle_capacity(c)
print(f"largest inscribed triangle: r={r:.6g} touching at s={s_star:.4f}")

m = toric_model(c)
plan = synthesize_section(m)
d = plan_to_dict(plan, m)
print("segments:", d["segments"])
print("boundary orbits:", d["boundaries"])
print("genus:", genus_of_plan(plan, m))
