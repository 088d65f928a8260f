"""Sections bounded by a (p, q) torus-knot orbit inside the ball.

Mark the rational torus where the boundary normal is parallel to (p, q)
and let the section end on that orbit k times.  Euler characteristic and
genus come out as k(p + q - pq) and k(p - 1)(q - 1)/2.

    python3 demos/torus_knots.py
"""
from birkhoff_sections import (euler_characteristic_of_plan, genus_of_plan,
                               interior_orbit_section, quarter_circle_curve)
from birkhoff_sections.toric import parallel_parameters

c = quarter_circle_curve()
print(f"{'(p,q)':>7} {'k':>2} {'chi':>5} {'genus':>6}")
for p, q in [(1, 1), (2, 3), (3, 4), (2, 5), (3, 5)]:
    s0 = parallel_parameters(c, (p, q))[0]
    for k in (1, 2):
        plan = interior_orbit_section(c, s0, (p, q), k)
        print(f"{str((p, q)):>7} {k:>2} {euler_characteristic_of_plan(plan):>5} {genus_of_plan(plan):>6}")
