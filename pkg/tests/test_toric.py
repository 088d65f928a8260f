import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from birkhoff_sections.homology import HomologyClass, det
from birkhoff_sections.sections import genus_of_plan, plan_is_valid
from birkhoff_sections.toric import (CurveError, annulus_is_signed_transverse, annulus_section,
                                     boundary_orbit_lower_bound, classify_domain,
                                     disk_section_at_end, ellipsoid_curve,
                                     inscribed_triangle_capacity, interior_orbit_section, load_curve,
                                     make_k_semicircle_curve, parallel_parameters, polydisk_curve,
                                     quarter_circle_curve, rational_loci, round_sphere_curve,
                                     toric_model)


def test_line_normals_are_constant():
    c = ellipsoid_curve(1, 2)
    n = c.normals / c.normals[:, :1]
    assert np.allclose(n, [1.0, 0.5])


def test_quarter_circle_normals_point_outward():
    c = quarter_circle_curve()
    mids = 0.5 * (c.points[:-1] + c.points[1:])
    mids /= np.hypot(mids[:, 0], mids[:, 1])[:, None]
    assert np.allclose(c.normals, mids, atol=1e-12)


@pytest.mark.parametrize("pts", [[(0.1, 1), (0.5, 0.5), (1, 0)], [(0, 1), (1, 0)],
                                 [(0, 1), (0.5, 0.5), (0.5, 0.5), (1, 0)], [(0, 1), (0.5, 0.5), (1, 0.1)],
                                 [(0, 1), (-0.1, 0.5), (1, 0)]])
def test_bad_curves_rejected(pts):
    with pytest.raises(CurveError):
        load_curve(pts)


def test_classification_examples():
    e = classify_domain(ellipsoid_curve(1, 2))
    assert e.monotone and e.strictly_monotone and e.convex and e.star_shaped
    p = classify_domain(polydisk_curve(1, 2))
    assert p.monotone and not p.strictly_monotone and p.convex
    s = classify_domain(make_k_semicircle_curve(3))
    assert s.star_shaped and not s.monotone


def test_disk_clauses():
    e = ellipsoid_curve(1, 2)
    assert disk_section_at_end(e, 0) and disk_section_at_end(e, 1)
    assert not disk_section_at_end(polydisk_curve(1, 2), 0)
    sph = round_sphere_curve()
    assert disk_section_at_end(sph, 0) and disk_section_at_end(sph, 1)


def test_annulus_clauses():
    assert annulus_section(round_sphere_curve()) == HomologyClass(1, -1)
    assert annulus_section(make_k_semicircle_curve(1)) is None
    h = annulus_section(ellipsoid_curve(1, 2), gss=True)
    assert abs(h.p) == abs(h.q) == 1 and det(h, (1, 0.5)) != 0
    assert annulus_is_signed_transverse(ellipsoid_curve(1, 2), h)


def test_interior_orbit_on_sphere():
    c = round_sphere_curve()
    s0 = 0.5
    plan = interior_orbit_section(c, s0, (1, 1))
    assert genus_of_plan(plan) == 0
    assert plan_is_valid(toric_model(c, extra_loci=[(s0, (1, 1))]), plan)[0]


def test_interior_orbit_genus_three():
    c = quarter_circle_curve()
    (s0,) = parallel_parameters(c, (4, 3))
    plan = interior_orbit_section(c, s0, (4, 3))
    assert genus_of_plan(plan) == 3
    assert plan_is_valid(toric_model(c, extra_loci=[(s0, (4, 3))]), plan)[0]


def test_interior_orbit_blocked_by_later_vertical_normal():
    c = load_curve([(0, 1), (0.4, 0.7), (0.6, 0.7), (1, 0)])
    s0 = parallel_parameters(c, (3, 4))[0]
    assert interior_orbit_section(c, s0, (3, 4)) is None


def test_interior_orbit_rejects_non_parallel_point():
    with pytest.raises(ValueError):
        interior_orbit_section(quarter_circle_curve(), 0.1, (1, 1))


def test_lower_bounds():
    assert boundary_orbit_lower_bound(quarter_circle_curve()) == 0
    assert boundary_orbit_lower_bound(make_k_semicircle_curve(1)) == 1
    assert boundary_orbit_lower_bound(make_k_semicircle_curve(3)) == 3
    assert boundary_orbit_lower_bound(make_k_semicircle_curve(4)) == 4


@pytest.mark.parametrize("k", [1, 2, 3, 4, 5])
def test_semicircle_curves_are_star_shaped(k):
    c = make_k_semicircle_curve(k)
    assert classify_domain(c).star_shaped
    assert c.points[0].tolist() == [0.0, 1.0] and c.points[-1].tolist() == [1.0, 0.0]


@pytest.mark.parametrize("a, b", [(1, 2), (2, 3), (1, 1), (3, 1)])
def test_capacity_of_ellipsoids(a, b):
    r, _ = inscribed_triangle_capacity(ellipsoid_curve(a, b))
    assert r == pytest.approx(min(a, b), rel=1e-12)


def test_capacity_of_rounded_polydisk_converges():
    errs = [abs(inscribed_triangle_capacity(polydisk_curve(1, 2, corner=h))[0] - 1) for h in (0.1, 0.01, 0.001)]
    assert errs == sorted(errs, reverse=True) and errs[-1] < 1e-3


def test_capacity_touches_where_normal_is_diagonal():
    # concave curve sqrt(x) + sqrt(y) = 1 touches x + y = 1/2 at (1/4, 1/4)
    t = np.linspace(0, 1, 2001)
    c = load_curve(np.column_stack([t ** 2, (1 - t) ** 2]))
    r, s = inscribed_triangle_capacity(c)
    assert r == pytest.approx(0.5, abs=1e-6)
    assert abs(det(c.normal_at(s), (1, 1))) < 1e-2
    assert classify_domain(c).concave


def test_capacity_needs_monotone():
    with pytest.raises(ValueError):
        inscribed_triangle_capacity(make_k_semicircle_curve(1))


def test_rational_loci_are_parallel_and_oriented():
    c = quarter_circle_curve()
    for l in rational_loci(c, 3):
        v = c.normal_at(l.s)
        assert abs(det(l.orbit, v)) / math.hypot(*l.orbit) < 1e-9
        assert l.orbit.p * v[0] + l.orbit.q * v[1] > 0


decreasing = st.lists(st.tuples(st.floats(0.05, 1.0), st.floats(0.05, 1.0)), min_size=1, max_size=8)


def staircase(steps):
    """Strictly decreasing polyline from (0, a) to (b, 0) with positive steps."""
    dx = np.array([s[0] for s in steps])
    dy = np.array([s[1] for s in steps])
    xs = np.concatenate([[0.0], np.cumsum(dx)])
    ys = np.concatenate([[0.0], np.cumsum(dy)])[::-1]
    return np.column_stack([xs, ys])


@given(decreasing.filter(lambda s: len(s) >= 2))
def test_monotone_curves_need_no_boundary(steps):
    c = load_curve(staircase(steps))
    assert classify_domain(c).strictly_monotone
    assert boundary_orbit_lower_bound(c) == 0
    assert disk_section_at_end(c, 0) and disk_section_at_end(c, 1)
    r, _ = inscribed_triangle_capacity(c)
    assert 0 < r <= min(c.a, c.b) + 1e-12


@given(decreasing.filter(lambda s: len(s) >= 2))
def test_refining_samples_keeps_decisions(steps):
    pts = staircase(steps)
    fine = np.vstack([np.vstack([p, 0.5 * (p + q)]) for p, q in zip(pts[:-1], pts[1:])] + [pts[-1:]])
    a, b = load_curve(pts), load_curve(fine)
    assert inscribed_triangle_capacity(a)[0] == pytest.approx(inscribed_triangle_capacity(b)[0])
    assert classify_domain(a) == classify_domain(b)
    assert annulus_section(a) == annulus_section(b)
