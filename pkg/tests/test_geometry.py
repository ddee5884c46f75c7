import itertools

import numpy as np
import pytest
from hypothesis import given, strategies as st

from siegelcycle import geometry


def brute_first_crossing(pts):
    n = len(pts)
    for i, k in itertools.combinations(range(n), 2):
        if k == i + 1 or (i == 0 and k == n - 1):
            continue
        a, b = pts[i], pts[(i + 1) % n]
        c, d = pts[k], pts[(k + 1) % n]
        if geometry.segments_intersect(a.real, a.imag, b.real, b.imag, c.real, c.imag, d.real, d.imag):
            return True
    return False


def circle(n, r=1.0):
    return r * np.exp(2j * np.pi * np.arange(n) / n)


def test_segments_intersect_cases():
    si = geometry.segments_intersect
    assert si(0, 0, 1, 1, 0, 1, 1, 0)
    assert not si(0, 0, 1, 0, 0, 1, 1, 1)
    assert si(0, 0, 2, 0, 1, 0, 3, 0)          # collinear overlap
    assert not si(0, 0, 1, 0, 2, 0, 3, 0)      # collinear disjoint
    assert si(0, 0, 1, 0, 1, 0, 1, 1)          # touching endpoint


def test_circle_is_simple_with_winding_one():
    c = circle(20000)
    assert geometry.first_crossing(c) is None
    assert geometry.winding_number(c) == 1
    assert geometry.winding_number(c[::-1]) == -1
    assert geometry.winding_number(c, about=5.0) == 0


def test_bowtie_and_permutation_detected():
    bow = np.array([0, 1 + 1j, 1, 1j])
    assert geometry.first_crossing(bow) is not None
    c = circle(10000)
    c[[10, 5000]] = c[[5000, 10]]
    assert not geometry.is_simple(c)


@given(st.lists(st.tuples(st.integers(-6, 6), st.integers(-6, 6)), min_size=4, max_size=9, unique=True))
def test_grid_crossing_matches_brute_force(raw):
    pts = np.array([complex(x, y) for x, y in raw])
    assert (geometry.first_crossing(pts) is not None) == brute_first_crossing(pts)


def test_winding_rejects_reference_on_curve():
    with pytest.raises(ValueError):
        geometry.winding_number(np.array([0, 1, 1j]), about=0)


def test_hausdorff():
    c = circle(2000)
    assert geometry.point_set_hausdorff(c, c) == 0
    assert geometry.point_set_hausdorff(c, 1.01 * c) == pytest.approx(0.01, abs=1e-6)
    assert geometry.polyline_hausdorff(c, 1.01 * c) == pytest.approx(0.01, abs=1e-6)


@given(st.lists(st.complex_numbers(max_magnitude=10, allow_nan=False), min_size=1, max_size=20),
       st.lists(st.complex_numbers(max_magnitude=10, allow_nan=False), min_size=1, max_size=20))
def test_hausdorff_matches_brute_force(a, b):
    a, b = np.array(a), np.array(b)
    d = np.abs(a[:, None] - b[None, :])
    ref = max(d.min(axis=1).max(), d.min(axis=0).max())
    assert geometry.point_set_hausdorff(a, b) == pytest.approx(ref, abs=1e-12)
    # vertex-to-polyline distances never exceed vertex-to-vertex ones
    assert geometry.polyline_hausdorff(a, b) <= ref + 1e-12


def test_point_to_polyline():
    sq = np.array([0, 1, 1 + 1j, 1j])
    assert geometry.point_to_polyline(0.5 + 0.5j, sq)[0] == pytest.approx(0.5)
    assert geometry.point_to_polyline(2, sq)[0] == pytest.approx(1.0)
    assert geometry.max_spacing(sq) == pytest.approx(1.0)
