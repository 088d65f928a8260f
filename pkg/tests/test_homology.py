import math

import pytest
from hypothesis import given, strategies as st

from birkhoff_sections.homology import (HomologyClass, PrimitiveOrbitClass, ZeroClassError,
                                        admits_transverse_curve, cross, decompose_in_section_basis,
                                        det, gcd_components, horizontal_complement,
                                        is_positively_transverse)

ints = st.integers(-40, 40)
classes = st.tuples(ints, ints).filter(lambda c: c != (0, 0))


@pytest.mark.parametrize("c, expected", [((4, 6), (2, (2, 3))), ((0, 3), (3, (0, 1))), ((1, 0), (1, (1, 0)))])
def test_gcd_components(c, expected):
    n, prim = gcd_components(c)
    assert (n, tuple(prim)) == expected


def test_gcd_components_zero_class():
    with pytest.raises(ZeroClassError):
        gcd_components((0, 0))


@pytest.mark.parametrize("v, c, expected", [((1, 1), (1, 1), 0), ((1, 0), (0, 1), 1), ((1, 1), (1, -1), -2)])
def test_cross(v, c, expected):
    assert cross(v, c) == expected


@pytest.mark.parametrize("c, v, expected", [((1, 1), (2, 2), False), ((0, 0), (1, 0), False),
                                            ((1, -1), (1, 1), True)])
def test_admits_transverse_curve(c, v, expected):
    assert admits_transverse_curve(c, v) is expected


@pytest.mark.parametrize("c, v, expected", [((1, -1), (1, 1), True), ((-1, 1), (1, 1), False),
                                            ((1, 0), (0, 1), True)])
def test_is_positively_transverse(c, v, expected):
    assert is_positively_transverse(c, v) is expected


@pytest.mark.parametrize("c, expected", [((1, 1), (1, 0)), ((4, 3), (1, 1)), ((3, 2), (0, 1))])
def test_decompose_in_section_basis(c, expected):
    assert decompose_in_section_basis(c, (3, 2), (1, 1)) == expected


def test_primitive_orbit_rejects_multiples():
    with pytest.raises(ValueError):
        PrimitiveOrbitClass(2, 4)


def test_class_arithmetic():
    a, b = HomologyClass(1, 2), HomologyClass(3, -1)
    assert a + b == HomologyClass(4, 1)
    assert b - a == HomologyClass(2, -3)
    assert a * 3 == HomologyClass(3, 6)
    assert -a == HomologyClass(-1, -2)
    assert repr(a) == "(1,2)"


@given(classes)
def test_gcd_split_reassembles(c):
    n, prim = gcd_components(c)
    assert n >= 1 and math.gcd(*prim) == 1
    assert prim * n == HomologyClass(*c)


@given(classes, st.tuples(st.floats(-5, 5), st.floats(-5, 5)).filter(lambda v: math.hypot(*v) > 1e-3))
def test_orientation_reversal_flips_transversality(c, v):
    if abs(det(c, v)) > 1e-9:
        assert is_positively_transverse(c, v) != is_positively_transverse((-c[0], -c[1]), v)


@given(st.tuples(ints, ints).filter(lambda c: c != (0, 0) and math.gcd(*c) == 1), st.tuples(ints, ints))
def test_section_basis_round_trip(orbit, c):
    h = horizontal_complement(orbit)
    assert det(h, orbit) == 1
    alpha, beta = decompose_in_section_basis(c, orbit, h)
    assert h * alpha + HomologyClass(*orbit) * beta == HomologyClass(*c)
