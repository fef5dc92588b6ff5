import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from hypothesis.extra import numpy as hnp
from shapely.geometry import MultiPoint, Point, Polygon

from jamregion.polygon import (area, clip_convex, convex_hull, is_convex,
                               point_in_polygon, signed_area)

# Millesimal grid: GEOS itself is not robust near denormal coordinates.
coords = st.integers(-10_000, 10_000).map(lambda k: k / 1000)
clouds = hnp.arrays(float, st.tuples(st.integers(3, 30), st.just(2)), elements=coords)

SQUARE = np.array([(0, 0), (1, 0), (1, 1), (0, 1)], float)


def test_hull_square_with_interior_and_collinear_points():
    pts = np.vstack([SQUARE, [(0.5, 0.5), (0.5, 0.0), (1.0, 0.5)]])
    h = convex_hull(pts)
    assert len(h) == 4
    assert signed_area(h) == pytest.approx(1.0)     # counterclockwise


def test_hull_degenerate():
    assert convex_hull([]).shape == (0, 2)
    assert len(convex_hull([(1, 1), (1, 1)])) == 1
    assert len(convex_hull([(0, 0), (1, 1), (2, 2)])) == 2


@settings(max_examples=150)
@given(clouds)
def test_hull_matches_shapely(pts):
    ref = MultiPoint([tuple(p) for p in pts]).convex_hull
    h = convex_hull(pts)
    assert area(h) == pytest.approx(ref.area, rel=1e-9, abs=1e-9)
    assert is_convex(h)
    for p in pts:
        assert point_in_polygon(p, h, tol=1e-9)


def test_area_and_orientation():
    assert area(SQUARE[::-1]) == 1.0
    assert signed_area(SQUARE[::-1]) == -1.0
    assert area(SQUARE[:2]) == 0.0


def test_is_convex():
    assert is_convex(SQUARE)
    assert not is_convex([(0, 0), (2, 0), (1, 0.5), (2, 2), (0, 2)])


def test_clip_identity_and_disjoint():
    big = np.array([(-1, -1), (3, -1), (3, 3), (-1, 3)], float)
    np.testing.assert_allclose(area(clip_convex(SQUARE, big)), 1.0)
    far = SQUARE + 5
    assert clip_convex(SQUARE, far).shape == (0, 2)


def test_clip_half_overlap():
    other = SQUARE + [0.5, 0.0]
    assert area(clip_convex(SQUARE, other)) == pytest.approx(0.5)


def test_clip_requires_polygon():
    with pytest.raises(ValueError):
        clip_convex(SQUARE, [(0, 0), (1, 1)])


def _star(rng, n):
    ang = np.sort(rng.uniform(0, 2 * np.pi, n))
    rad = rng.uniform(0.3, 1.0, n)
    return np.column_stack([rad * np.cos(ang), rad * np.sin(ang)])


@pytest.mark.parametrize('seed', range(40))
def test_clip_matches_shapely(seed):
    rng = np.random.default_rng(seed)
    subject = _star(rng, 12)                     # star-shaped, often non-convex
    clip = convex_hull(rng.uniform(-0.8, 0.8, (8, 2)) + rng.uniform(-0.5, 0.5, 2))
    got = clip_convex(subject, clip)
    ref = Polygon(subject).intersection(Polygon(clip))
    assert area(got) == pytest.approx(ref.area, rel=1e-9, abs=1e-12)


def test_point_in_polygon_boundary_tolerance():
    assert point_in_polygon((1.0 + 1e-10, 0.5), SQUARE, tol=1e-9)
    assert not point_in_polygon((1.0 + 1e-6, 0.5), SQUARE, tol=1e-9)
    assert point_in_polygon((0.5, 0.5), SQUARE)
    assert not point_in_polygon((0.5, 0.5), [])


@settings(max_examples=100)
@given(st.tuples(coords, coords))
def test_point_in_polygon_matches_shapely(pt):
    poly = np.array([(-3, -2), (4, -1), (5, 3), (0, 6), (-4, 2)], float)
    ref = Polygon(poly)
    d = ref.exterior.distance(Point(pt))
    if d > 1e-6:
        assert point_in_polygon(pt, poly) == ref.contains(Point(pt))
