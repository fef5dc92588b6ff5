"""
Planar polygon helpers for rate regions.

Polygons are (n, 2) float arrays of vertices without a repeated closing
vertex. Only what the region code needs: monotone-chain hulls,
Sutherland-Hodgman clipping against a convex polygon, shoelace area and a
tolerant point-in-polygon test.
"""

import numpy as np

__all__ = ['CROSS_TOL', 'as_points', 'convex_hull', 'signed_area', 'area',
           'is_convex', 'clip_convex', 'point_in_polygon',
           'distance_to_boundary']

CROSS_TOL = 1e-12


def as_points(pts):
    p = np.asarray(pts, dtype=float)
    if p.size == 0:
        return np.zeros((0, 2))
    return p.reshape(-1, 2)


def _cross(o, a, b):
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def _turn(o, a, b, tol):
    """Sign of the turn o -> a -> b; 0 when the sine of the angle is <= tol."""
    c = _cross(o, a, b)
    scale = np.hypot(a[0] - o[0], a[1] - o[1]) * np.hypot(b[0] - o[0], b[1] - o[1])
    if abs(c) <= tol * scale:
        return 0
    return 1 if c > 0 else -1


def convex_hull(pts, tol=CROSS_TOL):
    """
    Convex hull of `pts`, counterclockwise, starting at the lowest-x point.

    Collinear points (turn angle with ``|sin| <= tol``) are dropped.
    Degenerate inputs return one or two points.
    """
    p = as_points(pts)
    if len(p) == 0:
        return p
    p = np.unique(p, axis=0)    # also sorts by x then y
    if len(p) <= 2:
        return p

    def half(points):
        chain = []
        for q in points:
            while len(chain) >= 2 and _turn(chain[-2], chain[-1], q, tol) <= 0:
                chain.pop()
            chain.append(tuple(q))
        return chain

    lower = half(p)
    upper = half(p[::-1])
    hull = lower[:-1] + upper[:-1]
    return np.array(hull, dtype=float)


def signed_area(poly):
    p = as_points(poly)
    if len(p) < 3:
        return 0.0
    x, y = p[:, 0], p[:, 1]
    return 0.5 * float(np.dot(x, np.roll(y, -1)) - np.dot(np.roll(x, -1), y))


def area(poly):
    return abs(signed_area(poly))


def is_convex(poly, tol=CROSS_TOL):
    """True when all turns of `poly` share one orientation (within tol)."""
    p = as_points(poly)
    n = len(p)
    if n < 4:
        return True
    signs = {_turn(p[i], p[(i + 1) % n], p[(i + 2) % n], tol) for i in range(n)}
    signs.discard(0)
    return len(signs) <= 1


def _ccw(poly):
    p = as_points(poly)
    return p[::-1] if signed_area(p) < 0 else p


def clip_convex(subject, clip, eps=1e-15):
    """
    Sutherland-Hodgman clip of `subject` against the convex polygon `clip`.

    `subject` may be non-convex; if the true intersection has several
    pieces, they come back joined by zero-area slivers along the clip
    edges (area and interior membership are unaffected). Returns an empty
    array when the polygons are disjoint.
    """
    out = [tuple(q) for q in as_points(subject)]
    c = _ccw(clip)
    if len(out) == 0 or len(c) == 0:
        return np.zeros((0, 2))
    if len(c) < 3:
        raise ValueError("clip polygon needs at least three vertices")
    scale = max(1.0, float(np.abs(c).max()))

    for i in range(len(c)):
        a, b = c[i], c[(i + 1) % len(c)]
        edge_len = float(np.hypot(*(b - a)))
        if edge_len == 0.0:
            continue

        def side(q):
            # Signed distance, positive inside (left of a->b).
            return _cross(a, b, q) / edge_len

        inp, out = out, []
        if not inp:
            break
        prev = inp[-1]
        sp = side(prev)
        for cur in inp:
            sc = side(cur)
            cur_in = sc >= -eps * scale
            prev_in = sp >= -eps * scale
            if cur_in:
                if not prev_in:
                    out.append(_intersect(prev, cur, sp, sc))
                out.append(cur)
            elif prev_in:
                out.append(_intersect(prev, cur, sp, sc))
            prev, sp = cur, sc
    if not out:
        return np.zeros((0, 2))
    res = np.array(out, dtype=float)
    # Drop consecutive duplicates introduced by vertices lying on edges.
    keep = np.ones(len(res), dtype=bool)
    keep[1:] = np.any(np.abs(np.diff(res, axis=0)) > 0, axis=1)
    res = res[keep]
    if len(res) > 1 and np.all(res[0] == res[-1]):
        res = res[:-1]
    return res


def _intersect(p, q, sp, sq):
    t = sp / (sp - sq)
    return (p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1]))


def distance_to_boundary(pt, poly):
    """Euclidean distance from `pt` to the closest edge of `poly`."""
    p = as_points(poly)
    x = np.asarray(pt, dtype=float)
    if len(p) == 0:
        return np.inf
    if len(p) == 1:
        return float(np.hypot(*(x - p[0])))
    a = p
    b = np.roll(p, -1, axis=0)
    ab = b - a
    L2 = np.einsum('ij,ij->i', ab, ab)
    t = np.where(L2 > 0, np.einsum('ij,ij->i', x - a, ab) / np.where(L2 > 0, L2, 1.0), 0.0)
    t = np.clip(t, 0.0, 1.0)
    proj = a + t[:, None] * ab
    return float(np.min(np.hypot(*(x - proj).T)))


def point_in_polygon(pt, poly, tol=1e-9):
    """
    Even-odd membership test; points within `tol` of the boundary count as
    inside.
    """
    p = as_points(poly)
    if len(p) == 0:
        return False
    if distance_to_boundary(pt, p) <= tol:
        return True
    if len(p) < 3:
        return False
    x, y = float(pt[0]), float(pt[1])
    xs, ys = p[:, 0], p[:, 1]
    xs2, ys2 = np.roll(xs, -1), np.roll(ys, -1)
    crosses = (ys > y) != (ys2 > y)
    with np.errstate(divide='ignore', invalid='ignore'):
        x_at = xs + (y - ys) * (xs2 - xs) / (ys2 - ys)
    return bool(np.count_nonzero(crosses & (x < x_at)) % 2)
