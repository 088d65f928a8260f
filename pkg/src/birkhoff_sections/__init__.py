"""Global surfaces of section for flows on foliated 3-manifolds.

Torus families carry a normal-direction field; a section is a choice of
homology class per interval, glued at rational tori and broken tori.  The
toric and separable frontends build such models from a moment-curve or from
two 1D potentials.
"""
from .homology import HomologyClass, PrimitiveOrbitClass, det, is_positively_transverse
from .directions import DirectionSet, admissible_cone, count_disjoint_coverage_windows
from .foliation import (BrokenTorusGraph, FoliatedManifold, RationalLocus, TorusEnd, TorusFamily,
                        broken_edge_assignment, figure_eight, validate_manifold)
from .sections import (BoundaryOrbit, Segment, SectionPlan, euler_characteristic_of_plan,
                       genus_of_plan, plan_is_valid, verify_plan_numeric)
from .synthesis import SynthesisObjective, synthesize_section
from .toric import (ToricBoundaryCurve, annulus_section, boundary_orbit_lower_bound, classify_domain,
                    disk_section_at_end, inscribed_triangle_capacity, interior_orbit_section, load_curve,
                    make_k_semicircle_curve, quarter_circle_curve, round_sphere_curve, toric_model)
from .separable import (Profile1D, SeparableSystem, build_level_foliation, disk_gss_decision,
                        is_regular_level, two_well_profile)

__version__ = "0.1.0"
