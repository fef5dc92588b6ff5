"""
Rate regions in the (r1, r2) plane.

The suspicious region is stored as vertical segments: for each sampled
r1, every r2 between the lower and upper boundary is achievable by some
beamformer. Polygons only appear for hulls, eavesdropping regions and
clipped intersections.
"""

import csv
from dataclasses import dataclass, field
from enum import Enum
import io
import math

import numpy as np

from . import polygon
from .jammer import (DEFAULT_CONFIG, Beamformer, InfeasibleTargetError,
                     f_max, f_min, lower_boundary_beamformer,
                     min_power_beamformer, null_space_jammer_transform,
                     rate_extremes, upper_boundary_beamformer, zf_threshold)
from .rates import (RatePair, interference_free_rate, mmse_eaves_rate,
                    sic_rates, si_eaves_rate)

__all__ = ['RegionKind', 'RateRegion', 'TimeSharePoint', 'suspicious_region',
           'convex_hull_region', 'mmse_rectangle', 'sic_corners',
           'sic_union_region', 'sic_region', 'sic_time_share',
           'decode_order_factor', 'intersect', 'achieving_set',
           'si_lowerbound_rectangle', 'nullspace_region', 'time_share',
           'rectangle_region', 'write_regions_csv', 'read_regions_csv',
           'regions_to_csv']


class RegionKind(str, Enum):
    SUSPICIOUS_RAW = 'suspicious_raw'
    SUSPICIOUS_HULLED = 'suspicious_hulled'
    EAVES_MMSE = 'eaves_mmse'
    EAVES_SIC = 'eaves_sic'
    EAVES_SIC_HULLED = 'eaves_sic_hulled'
    INTERSECTION = 'intersection'
    SUSPICIOUS_NULLSPACE = 'suspicious_nullspace'
    EAVES_SI_LOWERBOUND = 'eaves_si_lowerbound'


_SEGMENT_KINDS = {RegionKind.SUSPICIOUS_RAW, RegionKind.SUSPICIOUS_NULLSPACE}


def _pts(a):
    return polygon.as_points(a).copy()


@dataclass(frozen=True)
class RateRegion:
    """
    A sampled rate region.

    Segment-type regions (raw suspicious regions) fill `upper` and `lower`
    with matching r1 samples; all other kinds carry a counterclockwise
    polygon in `vertices`. An empty region has no samples and no vertices.
    """
    kind: RegionKind
    upper: np.ndarray = field(default_factory=lambda: np.zeros((0, 2)))
    lower: np.ndarray = field(default_factory=lambda: np.zeros((0, 2)))
    vertices: np.ndarray = field(default_factory=lambda: np.zeros((0, 2)))
    meta: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        object.__setattr__(self, 'kind', RegionKind(self.kind))
        for name in ('upper', 'lower', 'vertices'):
            arr = _pts(getattr(self, name))
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    @property
    def is_segment_type(self):
        return self.kind in _SEGMENT_KINDS

    @property
    def is_empty(self):
        if self.is_segment_type:
            return len(self.upper) == 0
        return len(self.vertices) == 0

    def outline(self):
        """Closed outline as a counterclockwise vertex array."""
        if not self.is_segment_type:
            return self.vertices
        # Lower boundary left to right, then upper boundary back.
        pts = np.vstack([self.lower, self.upper[::-1]])
        keep = np.ones(len(pts), dtype=bool)
        keep[1:] = np.any(np.diff(pts, axis=0) != 0, axis=1)
        pts = pts[keep]
        if len(pts) > 1 and np.all(pts[0] == pts[-1]):
            pts = pts[:-1]
        return pts

    def area(self):
        return polygon.area(self.outline())

    def contains(self, pt, tol=1e-9):
        """Membership test with absolute tolerance `tol` (bits/s/Hz)."""
        if self.is_empty:
            return False
        if not self.is_segment_type:
            return polygon.point_in_polygon(pt, self.vertices, tol)
        x, y = float(pt[0]), float(pt[1])
        r1 = self.upper[:, 0]
        if x < r1[0] - tol or x > r1[-1] + tol:
            return False
        xc = min(max(x, r1[0]), r1[-1])
        hi = np.interp(xc, r1, self.upper[:, 1])
        lo = np.interp(xc, self.lower[:, 0], self.lower[:, 1])
        return lo - tol <= y <= hi + tol

    def points(self):
        """All stored samples/vertices, for hulls and containment checks."""
        if self.is_segment_type:
            return np.vstack([self.upper, self.lower])
        return self.vertices


@dataclass(frozen=True)
class TimeSharePoint:
    """Rate pair reached by using `bf_a` for a `tau` fraction of time."""
    tau: float
    a: RatePair
    b: RatePair
    bf_a: 'Beamformer | None' = None
    bf_b: 'Beamformer | None' = None

    def __post_init__(self):
        if not 0.0 <= self.tau <= 1.0:
            raise ValueError(f"tau must lie in [0, 1], got {self.tau}")

    @property
    def point(self):
        t = self.tau
        return RatePair(t * self.a.r1 + (1 - t) * self.b.r1,
                        t * self.a.r2 + (1 - t) * self.b.r2)


def _r1_grid(s, cfg):
    e1 = rate_extremes(s, 1)
    if e1.r_max <= e1.r_min:
        return np.array([e1.r_max])
    grid = np.linspace(e1.r_min, e1.r_max, cfg.n_samples)
    kink = zf_threshold(s, cfg)
    if e1.r_min < kink < e1.r_max:
        grid = np.union1d(grid, [kink])
    return grid


def suspicious_region(s, cfg=DEFAULT_CONFIG, kind=RegionKind.SUSPICIOUS_RAW):
    """
    Sweep Bob 1's rate from its minimum to its maximum and record Bob 2's
    upper and lower boundary rates at each sample.

    The sweep is uniform with the zero-forcing kink added as an extra
    sample.
    """
    r1 = _r1_grid(s, cfg)
    hi = np.atleast_1d(f_max(s, r1, cfg))
    lo = np.atleast_1d(f_min(s, r1, cfg))
    # Rounding can put f_min a hair above f_max where they meet.
    lo = np.minimum(lo, hi)
    return RateRegion(kind, upper=np.column_stack([r1, hi]),
                      lower=np.column_stack([r1, lo]),
                      meta={'zf_threshold': zf_threshold(s, cfg)})


def convex_hull_region(r):
    """Time-sharing closure of a segment-type region (its convex hull)."""
    if not r.is_segment_type:
        raise ValueError(f"expected a raw suspicious region, got {r.kind.value}")
    hull = polygon.convex_hull(r.points())
    return RateRegion(RegionKind.SUSPICIOUS_HULLED, vertices=hull,
                      meta={'source': r.kind.value})


def rectangle_region(r1, r2, kind):
    """Down-closed rectangle ``[0, r1] x [0, r2]``."""
    return RateRegion(kind, vertices=[(0.0, 0.0), (r1, 0.0), (r1, r2), (0.0, r2)])


def mmse_rectangle(s):
    """Eavesdropping region of the linear MMSE receiver."""
    return rectangle_region(mmse_eaves_rate(s, 1), mmse_eaves_rate(s, 2),
                            RegionKind.EAVES_MMSE)


def sic_corners(s):
    """
    Corner points ``(A, B)`` of the two SIC decoding orders.

    A decodes link 2 first (link 1 then sees no interference), B decodes
    link 1 first.
    """
    return sic_rates(s, 2), sic_rates(s, 1)


def sic_union_region(s):
    """Union of the two per-order rectangles (no decoding-order sharing)."""
    a, b = sic_corners(s)
    verts = [(0.0, 0.0), (a.r1, 0.0), (a.r1, a.r2), (b.r1, a.r2),
             (b.r1, b.r2), (0.0, b.r2)]
    return RateRegion(RegionKind.EAVES_SIC, vertices=verts)


def sic_region(s):
    """Convex hull of the two per-order rectangles."""
    a, b = sic_corners(s)
    pts = [(0.0, 0.0), (a.r1, 0.0), (a.r1, a.r2), (b.r1, b.r2), (0.0, b.r2),
           (b.r1, 0.0), (0.0, a.r2), (b.r1, a.r2)]
    return RateRegion(RegionKind.EAVES_SIC_HULLED,
                      vertices=polygon.convex_hull(pts),
                      meta={'A': tuple(a), 'B': tuple(b)})


def sic_time_share(s, r1e, tol=1e-12):
    """
    Fraction of time spent on decoding order [1, 2] to reach Bob 1 rate
    `r1e` on the segment between the two SIC corners.
    """
    a, b = sic_corners(s)
    lo, hi = b.r1, a.r1
    slack = tol * max(1.0, abs(hi))
    if r1e < lo - slack or r1e > hi + slack:
        raise ValueError(f"r1e={r1e!r} outside [{lo!r}, {hi!r}]")
    if hi == lo:
        return 0.0
    return float(min(max((hi - r1e) / (hi - lo), 0.0), 1.0))


def decode_order_factor(s, z, tol=1e-9):
    """
    Decoding-order time-sharing factor serving eavesdropping rate pair `z`.

    Checked in order: the [1, 2] rectangle (factor 0), the triangle under
    the segment joining the corners (factor from :func:`sic_time_share`),
    the [2, 1] rectangle (factor 1).
    """
    a, b = sic_corners(s)
    z1, z2 = float(z[0]), float(z[1])
    if z1 < -tol or z2 < -tol:
        raise ValueError(f"{z!r} is outside the SIC region")
    if z1 <= b.r1 + tol and z2 <= b.r2 + tol:
        return 0.0
    if b.r1 - tol <= z1 <= a.r1 + tol and a.r1 > b.r1:
        t = (a.r1 - min(max(z1, b.r1), a.r1)) / (a.r1 - b.r1)
        line = t * b.r2 + (1 - t) * a.r2
        if a.r2 - tol <= z2 <= line + tol:
            return sic_time_share(s, min(max(z1, b.r1), a.r1))
    if z1 <= a.r1 + tol and z2 <= a.r2 + tol:
        return 1.0
    raise ValueError(f"{z!r} is outside the SIC region")


def intersect(a, b):
    """
    Clip suspicious region `a` against convex eavesdropping region `b`.

    The result may be empty (no vertices): the monitor then cannot follow
    both links at any rate pair.
    """
    clip = b.outline()
    if len(clip) >= 3 and not polygon.is_convex(clip):
        raise ValueError(
            f"{b.kind.value} is not convex; intersect needs a convex "
            "eavesdropping region")
    subject = a.outline()
    if a.is_empty or len(clip) == 0:
        verts = np.zeros((0, 2))
    elif len(clip) < 3:
        verts = np.array([p for p in subject
                          if polygon.point_in_polygon(p, clip)]).reshape(-1, 2)
    else:
        verts = polygon.clip_convex(subject, clip)
    return RateRegion(RegionKind.INTERSECTION, vertices=verts,
                      meta={'suspicious': a.kind.value, 'eaves': b.kind.value})


def time_share(s, pa, pb, tau, cfg=DEFAULT_CONFIG):
    """
    Time-share between the least-power beamformers for `pa` and `pb`.

    Both endpoints must lie in the raw suspicious region.
    """
    bf_a = min_power_beamformer(s, pa, cfg)
    bf_b = min_power_beamformer(s, pb, cfg)
    return TimeSharePoint(tau, RatePair(*pa), RatePair(*pb), bf_a, bf_b)


def achieving_set(s, cfg=DEFAULT_CONFIG, n_interior=8):
    """
    Beamformers that trace the suspicious region: both boundary solvers at
    every sweep sample plus the interior solver on a coarse grid.
    """
    out = []
    e1 = rate_extremes(s, 1)
    r1s = _r1_grid(s, cfg)
    for r1 in r1s:
        out.append(upper_boundary_beamformer(s, r1, cfg))
        out.append(lower_boundary_beamformer(s, r1, cfg))
    if n_interior > 0 and e1.r_max > e1.r_min:
        for r1 in np.linspace(e1.r_min, e1.r_max, n_interior):
            hi, lo = float(f_max(s, r1, cfg)), float(f_min(s, r1, cfg))
            for r2 in np.linspace(lo, hi, n_interior)[1:-1]:
                try:
                    out.append(min_power_beamformer(s, (r1, r2), cfg))
                except InfeasibleTargetError:
                    pass
    return out


def si_lowerbound_rectangle(s, beamformers):
    """
    Eavesdropping rectangle guaranteed under residual self-interference:
    each side is the worst MMSE rate over `beamformers`.
    """
    if not beamformers:
        raise ValueError("achieving set is empty")
    r = [min(si_eaves_rate(s, bf.covariance(), link) for bf in beamformers)
         for link in (1, 2)]
    return rectangle_region(r[0], r[1], RegionKind.EAVES_SI_LOWERBOUND)


def nullspace_region(s, cfg=DEFAULT_CONFIG):
    """Suspicious region when jamming is confined to the loop-back null space."""
    reduced, v = null_space_jammer_transform(s)
    r = suspicious_region(reduced, cfg, kind=RegionKind.SUSPICIOUS_NULLSPACE)
    r.meta['null_dim'] = v.shape[1]
    return r


# -- CSV ---------------------------------------------------------------------

CSV_HEADER = ('kind', 'boundary', 'r1', 'r2')


def _rows(region):
    k = region.kind.value
    if region.is_segment_type:
        for name in ('upper', 'lower'):
            for r1, r2 in getattr(region, name):
                yield k, name, r1, r2
    else:
        tag = 'hull' if region.kind in (RegionKind.SUSPICIOUS_HULLED,
                                        RegionKind.EAVES_SIC_HULLED) else 'vertex'
        for r1, r2 in region.vertices:
            yield k, tag, r1, r2


def regions_to_csv(regions):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator='\n')
    w.writerow(CSV_HEADER)
    for region in regions:
        for k, tag, r1, r2 in _rows(region):
            w.writerow([k, tag, f'{r1:.9g}', f'{r2:.9g}'])
    return buf.getvalue()


def write_regions_csv(path, regions):
    """Write `regions` as ``kind,boundary,r1,r2`` rows (9 significant digits)."""
    with open(path, 'w', newline='') as f:
        f.write(regions_to_csv(regions))


def read_regions_csv(path_or_text):
    """
    Parse a region CSV back into ``{kind: RateRegion}``.

    Kinds with no rows (e.g. an empty intersection) are absent from the
    result; callers should treat a missing kind as an empty region.
    """
    if isinstance(path_or_text, str) and '\n' in path_or_text:
        text = path_or_text
    else:
        with open(path_or_text, newline='') as f:
            text = f.read()
    rows = {}
    reader = csv.DictReader(io.StringIO(text))
    if tuple(reader.fieldnames or ()) != CSV_HEADER:
        raise ValueError(f"unexpected header {reader.fieldnames!r}")
    for row in reader:
        kind = RegionKind(row['kind'])
        tag = row['boundary']
        if tag not in ('upper', 'lower', 'hull', 'vertex'):
            raise ValueError(f"unknown boundary tag {tag!r}")
        rows.setdefault(kind, {}).setdefault(tag, []).append(
            (float(row['r1']), float(row['r2'])))
    out = {}
    for kind, parts in rows.items():
        if kind in _SEGMENT_KINDS:
            out[kind] = RateRegion(kind, upper=parts.get('upper', []),
                                   lower=parts.get('lower', []))
        else:
            verts = parts.get('hull', []) + parts.get('vertex', [])
            out[kind] = RateRegion(kind, vertices=verts)
    return out
