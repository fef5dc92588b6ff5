"""
Achievable eavesdropping rate regions for a multi-antenna jamming monitor
watching two mutually interfering point-to-point links.
"""

__version__ = '0.1.0'

from .scenario import (Geometry, Scenario, ScenarioParams, generate,
                       load_scenario, save_scenario)
from .rates import (DecodingOrder, RatePair, interference_free_rate,
                    mmse_eaves_rate, si_eaves_rate, sic_rates,
                    suspicious_rate, suspicious_rate_w)
from .jammer import (Beamformer, InfeasibleTargetError,
                     NullSpaceUnavailableError, SweepConfig, f_max, f_min,
                     lower_boundary_beamformer, min_power_beamformer,
                     null_space_jammer_transform, rate_extremes,
                     upper_boundary_beamformer, zf_threshold)
from .region import (RateRegion, RegionKind, convex_hull_region,
                     decode_order_factor, intersect, mmse_rectangle,
                     sic_region, sic_time_share, suspicious_region)
