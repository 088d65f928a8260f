import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from birkhoff_sections.directions import (DirectionError, DirectionSet, admissible_cone,
                                          count_disjoint_coverage_windows, coverage_windows,
                                          covers_all_directions, integer_points_in_cone)
from birkhoff_sections.homology import HomologyClass, det
from birkhoff_sections.toric import make_k_semicircle_curve


def arc_directions(deg_lo, deg_hi, step=1.0):
    th = np.radians(np.arange(deg_lo, deg_hi + 1e-9, step))
    return DirectionSet(np.linspace(0, 1, len(th)), np.column_stack([np.cos(th), np.sin(th)]))


def test_cone_of_single_direction_is_half_plane():
    k = admissible_cone(DirectionSet.constant((1, 1)))
    assert k.contains((1, 0)) and k.contains((0, -1)) and k.contains((5, -2))
    assert not k.contains((1, 1)) and not k.contains((-1, 0))


def test_cone_of_open_quadrant_is_closed_fourth_quadrant():
    k = admissible_cone(DirectionSet.quadrant())
    assert k.contains((1, 0)) and k.contains((0, -1)) and k.contains((3, -7))
    assert not k.contains((0, 0)) and not k.contains((1, 1)) and not k.contains((-1, 0))


def test_cone_of_full_sweep_is_empty():
    k = admissible_cone(arc_directions(0, 180))
    assert k.empty
    assert integer_points_in_cone(k, 5) == []


def test_integer_points_half_plane():
    k = admissible_cone(DirectionSet.constant((1, 1)))
    assert integer_points_in_cone(k, 1) == [HomologyClass(0, -1), HomologyClass(1, -1), HomologyClass(1, 0)]


def test_integer_points_quadrant():
    k = admissible_cone(DirectionSet.quadrant())
    assert integer_points_in_cone(k, 1) == [HomologyClass(0, -1), HomologyClass(1, -1), HomologyClass(1, 0)]


def test_covers_all_directions():
    assert covers_all_directions(arc_directions(-90, 90))
    assert not covers_all_directions(DirectionSet.constant((1, 1)))
    assert not covers_all_directions(arc_directions(0, 90))


def test_coverage_window_counts():
    assert count_disjoint_coverage_windows(DirectionSet.constant((1, 1))) == 0
    assert count_disjoint_coverage_windows(arc_directions(-90, 90)) == 1
    assert count_disjoint_coverage_windows(make_k_semicircle_curve(3).directions()) == 3


def test_coverage_windows_are_disjoint_and_ordered():
    w = coverage_windows(make_k_semicircle_curve(4).directions())
    assert len(w) == 4
    flat = [s for pair in w for s in pair]
    assert flat == sorted(flat) and all(a < b for a, b in w)


def test_crossings_and_direction_at_agree():
    d = arc_directions(0, 90)
    (s,) = d.crossings((1, 1))
    v = d.direction_at(s)
    assert abs(det(v, (1, 1))) < 1e-12


def test_bad_samples_rejected():
    with pytest.raises(DirectionError):
        DirectionSet(np.array([0.0, 0.0]), np.array([[1.0, 0.0], [0.0, 1.0]]))
    with pytest.raises(DirectionError):
        DirectionSet(np.array([0.0, 1.0]), np.array([[0.0, 0.0], [0.0, 1.0]]))


angles = st.lists(st.floats(-1.2, 1.2), min_size=2, max_size=12)


@given(st.floats(-math.pi, math.pi), angles)
def test_cone_members_are_transverse_to_every_sample(start, steps):
    th = start + np.cumsum([0.0] + steps)
    d = DirectionSet(np.arange(len(th), dtype=float), np.column_stack([np.cos(th), np.sin(th)]))
    k = admissible_cone(d)
    for c in integer_points_in_cone(k, 4):
        assert all(det(c, v) > 0 for v in d.vectors)
    if th.max() - th.min() >= math.pi:
        assert k.empty


@given(st.floats(-math.pi, math.pi), angles, st.tuples(st.integers(-5, 5), st.integers(-5, 5)))
def test_hits_direction_matches_crossings(start, steps, w):
    if w == (0, 0):
        return
    th = start + np.cumsum([0.0] + steps)
    d = DirectionSet(np.arange(len(th), dtype=float), np.column_stack([np.cos(th), np.sin(th)]))
    if d.crossings(w):
        assert d.hits_direction(w, d.params[0], d.params[-1])
    elif d.hits_direction(w, d.params[0], d.params[-1], tol=0.0):
        pytest.fail("hit reported without a crossing")
