"""
Region composition shared by the CLI commands and Monte Carlo campaigns.
"""

from dataclasses import dataclass

from . import region as rg
from .jammer import SweepConfig, lift, null_space_jammer_transform
from .rates import mmse_eaves_rate

__all__ = ['RegionOptions', 'compute_regions', 'summarize', 'SUMMARY_FIELDS']


@dataclass(frozen=True)
class RegionOptions:
    """
    Which regions to build.

    receiver : 'mmse' or 'mmse-sic' (the latter always time-shares the two
        decoding orders)
    time_sharing : hull the suspicious region before intersecting
    si_rho : residual self-interference coefficient; None means perfect
        cancellation (only valid with the MMSE receiver)
    null_space : confine jamming to the loop-back null space
    """
    receiver: str = 'mmse'
    time_sharing: bool = False
    si_rho: 'float | None' = None
    null_space: bool = False
    n_samples: int = 128

    def __post_init__(self):
        if self.receiver not in ('mmse', 'mmse-sic'):
            raise ValueError(f"unknown receiver {self.receiver!r}")
        if self.si_rho is not None:
            if not 0.0 <= self.si_rho <= 1.0:
                raise ValueError(f"si rho must lie in [0, 1], got {self.si_rho}")
            if self.receiver != 'mmse':
                raise ValueError("self-interference is only modelled for the "
                                 "mmse receiver")

    @property
    def cfg(self):
        return SweepConfig(n_samples=self.n_samples)


def compute_regions(s, opts=RegionOptions()):
    """
    Build the regions selected by `opts`.

    Returns an ordered dict ``{name: RateRegion}`` whose last entry is the
    achievable eavesdropping region (``'intersection'``).
    """
    cfg = opts.cfg
    out = {}
    if opts.null_space:
        reduced, v = null_space_jammer_transform(s)
        susp = rg.suspicious_region(reduced, cfg,
                                    kind=rg.RegionKind.SUSPICIOUS_NULLSPACE)
        bfs = [lift(v, bf) for bf in rg.achieving_set(reduced, cfg)]
    else:
        susp = rg.suspicious_region(s, cfg)
        bfs = None
    out['suspicious'] = susp
    if opts.time_sharing:
        out['suspicious_hulled'] = rg.convex_hull_region(susp)

    if opts.receiver == 'mmse-sic':
        out['eaves'] = rg.sic_region(s)
    elif opts.si_rho is not None:
        if bfs is None:
            bfs = rg.achieving_set(s, cfg)
        out['eaves'] = rg.si_lowerbound_rectangle(s.replace(rho=opts.si_rho), bfs)
    else:
        out['eaves'] = rg.mmse_rectangle(s)

    base = out.get('suspicious_hulled', susp)
    out['intersection'] = rg.intersect(base, out['eaves'])
    return out


SUMMARY_FIELDS = (
    'area_suspicious', 'area_suspicious_hulled', 'area_eaves',
    'area_intersection', 'intersection_empty',
    'r1_min', 'r1_max', 'r2_min', 'r2_max',
    'r1e_mmse', 'r2e_mmse', 'sic_a_r1', 'sic_a_r2', 'sic_b_r1', 'sic_b_r2',
    'sic_gap_r1', 'sic_gap_r2')


def summarize(s, regions):
    """Scalar statistics of one scenario's regions, keyed by SUMMARY_FIELDS."""
    susp = regions['suspicious']
    hull = regions.get('suspicious_hulled') or rg.convex_hull_region(susp)
    inter = regions['intersection']
    a, b = rg.sic_corners(s)
    r1e, r2e = mmse_eaves_rate(s, 1), mmse_eaves_rate(s, 2)
    pts = susp.points()
    return {
        'area_suspicious': susp.area(),
        'area_suspicious_hulled': hull.area(),
        'area_eaves': regions['eaves'].area(),
        'area_intersection': inter.area(),
        'intersection_empty': int(inter.is_empty),
        'r1_min': float(pts[:, 0].min()), 'r1_max': float(pts[:, 0].max()),
        'r2_min': float(pts[:, 1].min()), 'r2_max': float(pts[:, 1].max()),
        'r1e_mmse': r1e, 'r2e_mmse': r2e,
        'sic_a_r1': a.r1, 'sic_a_r2': a.r2, 'sic_b_r1': b.r1, 'sic_b_r2': b.r2,
        'sic_gap_r1': a.r1 - r1e, 'sic_gap_r2': b.r2 - r2e,
    }
