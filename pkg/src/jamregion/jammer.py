"""
Closed-form jamming beamformers.

For a target rate ``r1`` of suspicious link 1, the monitor must deliver
``phi(r1)`` watts of jamming to Bob 1. Among all beamformers doing so
within the power budget, the ones that leave Bob 2 with the highest and
lowest rate trace the upper and lower boundaries of the suspicious rate
region. Both optima live in the plane spanned by ``g1`` and ``g2``:

* upper boundary: ``w = alpha * g2_hat + beta * g2_perp`` where
  ``g2_perp`` is the unit component of ``g1`` orthogonal to ``g2``.
  Zero-forcing towards Bob 2 (``alpha = 0``) suffices until the required
  power exceeds what the ZF direction can deliver; below that threshold
  the whole budget is spent and ``|alpha|`` is the smaller root of a
  quadratic.
* lower boundary: ``w = mu * g1_hat + nu * g1_perp`` at full power, with
  the two components phase-aligned at Bob 2.
* any interior point: same basis as the lower boundary, with the second
  component chosen to hit Bob 2's rate exactly at minimum power.

All functions take `link`/`r1` in bits/s/Hz and powers in watts.
"""

from dataclasses import dataclass
import math
from typing import NamedTuple

import numpy as np

from .linalg import complement_unit, null_space_basis, norm
from .rates import RatePair, rate_from_jam_power
from .scenario import effective_noise

__all__ = ['SweepConfig', 'Beamformer', 'Extremes', 'JamBasis',
           'InfeasibleTargetError', 'NullSpaceUnavailableError',
           'jam_basis', 'rate_extremes', 'phi', 'zf_threshold',
           'mrt_turning_point', 'f_max', 'f_min',
           'upper_boundary_beamformer', 'lower_boundary_beamformer',
           'min_power_beamformer', 'null_space_jammer_transform', 'lift']


class InfeasibleTargetError(ValueError):
    """A requested rate or rate pair lies outside the achievable region."""


class NullSpaceUnavailableError(ValueError):
    """The loop-back channel has no null space to jam in."""


@dataclass(frozen=True)
class SweepConfig:
    """Discretization and tolerance settings shared by sweeps and solvers."""
    n_samples: int = 128
    tol_rate: float = 1e-9
    tol_power: float = 1e-9
    collinear_eps: float = 1e-9

    def __post_init__(self):
        if self.n_samples < 2:
            raise ValueError("n_samples must be >= 2")
        if min(self.tol_rate, self.tol_power, self.collinear_eps) <= 0:
            raise ValueError("tolerances must be positive")


DEFAULT_CONFIG = SweepConfig()

# Required jamming below this fraction of the effective noise is zero.
PHI_RTOL = 1e-12


@dataclass(frozen=True)
class Beamformer:
    """
    A jamming vector `w`; its covariance is the rank-1 ``w w^H``.

    `coeffs` holds the two complex weights in the basis the solver used
    and `case` names the branch taken (for diagnostics only).
    """
    w: np.ndarray
    coeffs: tuple = ()
    case: str = ''

    def __post_init__(self):
        w = np.array(self.w, dtype=complex).reshape(-1)
        w.setflags(write=False)
        object.__setattr__(self, 'w', w)

    @property
    def power(self):
        return float(np.real(np.vdot(self.w, self.w)))

    def covariance(self):
        return np.outer(self.w, self.w.conj())


class Extremes(NamedTuple):
    r_min: float
    r_max: float
    w_min: Beamformer
    unjammable: bool


class JamBasis(NamedTuple):
    """Unit vectors and projections that every closed form is built from."""
    g1n: float          # ||g1||
    g2n: float          # ||g2||
    g1_hat: 'np.ndarray | None'
    g2_hat: 'np.ndarray | None'
    g2_perp: 'np.ndarray | None'   # unit part of g1 orthogonal to g2
    g1_perp: 'np.ndarray | None'   # unit part of g2 orthogonal to g1
    g1_on_g2: complex       # g1^H g2_hat
    g1_on_g2perp: complex   # g1^H g2_perp
    g2_on_g1: complex       # g2^H g1_hat
    g2_on_g1perp: complex   # g2^H g1_perp
    collinear: bool


def jam_basis(s, cfg=DEFAULT_CONFIG):
    g1, g2 = s.g1, s.g2
    g1n, g2n = norm(g1), norm(g2)
    g1_hat = g1 / g1n if g1n > 0 else None
    g2_hat = g2 / g2n if g2n > 0 else None
    g2_perp = g1_perp = None
    collinear = False
    if g1_hat is not None and g2_hat is not None:
        g2_perp = complement_unit(g1, g2, cfg.collinear_eps)
        g1_perp = complement_unit(g2, g1, cfg.collinear_eps)
        collinear = g2_perp is None or g1_perp is None
        if collinear:
            g2_perp = g1_perp = None

    def proj(a, b):
        return complex(np.vdot(a, b)) if b is not None else 0j

    return JamBasis(
        g1n=g1n, g2n=g2n, g1_hat=g1_hat, g2_hat=g2_hat,
        g2_perp=g2_perp, g1_perp=g1_perp,
        g1_on_g2=proj(g1, g2_hat), g1_on_g2perp=proj(g1, g2_perp),
        g2_on_g1=proj(g2, g1_hat), g2_on_g1perp=proj(g2, g1_perp),
        collinear=collinear)


def _bob1_free(s, b):
    """True when no jamming choice can change Bob 1's rate."""
    return b.g1_hat is None or s.tx_power(1) * s.direct_gain(1) == 0.0


def _phase(z):
    """``exp(-j angle(z))``; 1 for z == 0."""
    a = abs(z)
    return 1.0 + 0j if a == 0 else (z / a).conjugate()


def rate_extremes(s, link):
    """
    Lowest and highest rate the monitor can impose on suspicious `link`.

    The minimum comes from full-power MRT towards Bob `link`, the maximum
    from staying silent. A zero jamming channel makes the link
    unjammable; both extremes then coincide and `w_min` is zero.
    """
    g = s.jam_channel(link)
    gn = norm(g)
    r_max = float(rate_from_jam_power(s, link, 0.0))
    if gn == 0.0 or s.p_max == 0.0:
        return Extremes(r_max, r_max, Beamformer(np.zeros_like(g), case='silent'),
                        gn == 0.0)
    r_min = float(rate_from_jam_power(s, link, s.p_max * gn ** 2))
    w = math.sqrt(s.p_max) * g / gn
    return Extremes(r_min, r_max, Beamformer(w, case='mrt'), False)


def _clamp_rates(r, lo, hi, tol, what='r1'):
    r = np.asarray(r, dtype=float)
    if np.any(r < lo - tol) or np.any(r > hi + tol) or np.any(~np.isfinite(r)):
        raise InfeasibleTargetError(
            f"{what} outside [{lo:.12g}, {hi:.12g}]")
    return np.clip(r, lo, hi)


def phi(s, link, r, cfg=DEFAULT_CONFIG):
    """
    Jamming power (watts, received at Bob `link`) that pins the link rate to `r`.

    Vectorized over `r`. Values within ``cfg.tol_rate`` outside the
    feasible rate interval are clamped; anything further out raises
    :class:`InfeasibleTargetError`.
    """
    ext = rate_extremes(s, link)
    r = _clamp_rates(r, ext.r_min, ext.r_max, cfg.tol_rate,
                     f"rate of link {link}")
    signal = s.tx_power(link) * s.direct_gain(link)
    cap = s.p_max * norm(s.jam_channel(link)) ** 2
    if signal == 0.0 or cap == 0.0:
        return np.zeros_like(r)[()]
    noise = effective_noise(s, link)
    with np.errstate(divide='ignore'):
        val = signal / np.expm1(r * math.log(2.0)) - noise
    # Near r = r_max the subtraction cancels; anything below rounding
    # level relative to the noise is zero. Clipping also keeps r = r_min
    # from overshooting the MRT power.
    val = np.where(val <= PHI_RTOL * noise, 0.0, val)
    return np.clip(val, 0.0, cap)[()]


def zf_threshold(s, cfg=DEFAULT_CONFIG):
    """
    Smallest r1 reachable while Bob 2 keeps the unjammed rate.

    This is Bob 1's rate under full-power jamming along the part of g1
    orthogonal to g2. Parallel channels give r1_max, an unjammable Bob 2
    gives r1_min.
    """
    b = jam_basis(s, cfg)
    e1 = rate_extremes(s, 1)
    if b.g1_hat is None or b.g2_hat is None:
        return e1.r_min
    if b.collinear:
        return e1.r_max
    return float(rate_from_jam_power(s, 1, s.p_max * abs(b.g1_on_g2perp) ** 2))


def mrt_turning_point(s, cfg=DEFAULT_CONFIG):
    """
    Bob 1's rate under full-power MRT towards Bob 2.

    This is where the lower boundary stops decreasing and starts
    increasing.
    """
    b = jam_basis(s, cfg)
    if b.g2_hat is None:
        return rate_extremes(s, 1).r_max
    return float(rate_from_jam_power(s, 1, s.p_max * abs(b.g1_on_g2) ** 2))


def _upper_kappa(s, b, ph):
    """
    Magnitude of the g2_hat weight on the upper boundary for each phi.

    Zero while zero-forcing suffices; otherwise the smaller root of
    ``a0 k^2 - 2 b1 sqrt(phi) k + phi - b2^2 P = 0``, computed as
    ``(phi - b2^2 P) / (b1 sqrt(phi) + b2 sqrt(a0 P - phi))`` to avoid
    cancellation.
    """
    ph = np.asarray(ph, dtype=float)
    b1, b2 = abs(b.g1_on_g2), abs(b.g1_on_g2perp)
    a0 = b1 ** 2 + b2 ** 2
    zf_cap = s.p_max * b2 ** 2
    disc = np.maximum(a0 * s.p_max - ph, 0.0)
    num = ph - zf_cap
    den = b1 * np.sqrt(ph) + b2 * np.sqrt(disc)
    with np.errstate(divide='ignore', invalid='ignore'):
        kappa = np.where(num > 0, num / np.where(den > 0, den, 1.0), 0.0)
    return np.clip(kappa, 0.0, math.sqrt(s.p_max))


def f_max(s, r1, cfg=DEFAULT_CONFIG):
    """Upper boundary: Bob 2's highest rate given Bob 1's rate `r1`."""
    b = jam_basis(s, cfg)
    ph = phi(s, 1, r1, cfg)
    if b.g2_hat is None:
        jam2 = np.zeros_like(np.asarray(ph, dtype=float))
    elif b.g1_hat is None:
        jam2 = np.zeros_like(np.asarray(ph, dtype=float))
    elif b.collinear:
        jam2 = ph * (b.g2n / b.g1n) ** 2
    else:
        jam2 = _upper_kappa(s, b, ph) ** 2 * b.g2n ** 2
    return rate_from_jam_power(s, 2, jam2)[()]


def _lower_mags(s, b, ph):
    mu = np.sqrt(ph) / b.g1n
    nu = np.sqrt(np.maximum(s.p_max - mu ** 2, 0.0))
    return mu, nu


def f_min(s, r1, cfg=DEFAULT_CONFIG):
    """Lower boundary: Bob 2's lowest rate given Bob 1's rate `r1`."""
    b = jam_basis(s, cfg)
    ph = np.asarray(phi(s, 1, r1, cfg), dtype=float)
    if b.g2_hat is None:
        jam2 = np.zeros_like(ph)
    elif _bob1_free(s, b):
        jam2 = np.full_like(ph, s.p_max * b.g2n ** 2)
    elif b.collinear:
        jam2 = ph * (b.g2n / b.g1n) ** 2
    else:
        mu, nu = _lower_mags(s, b, ph)
        jam2 = (mu * abs(b.g2_on_g1) + nu * abs(b.g2_on_g1perp)) ** 2
    return rate_from_jam_power(s, 2, jam2)[()]


def _scalar_phi(s, link, r, cfg):
    return float(phi(s, link, float(r), cfg))


def _along_g1(b, ph):
    """Minimum-power beamformer delivering `ph` to Bob 1 (MRT direction)."""
    return math.sqrt(ph) / b.g1n * b.g1_hat


def upper_boundary_beamformer(s, r1, cfg=DEFAULT_CONFIG):
    """
    Beamformer attaining ``(r1, f_max(r1))``.

    Returns ``w = alpha * g2_hat + beta * g2_perp``; ``alpha = 0`` whenever
    jamming orthogonal to g2 can deliver ``phi(r1)`` within budget.
    """
    ph = _scalar_phi(s, 1, r1, cfg)
    b = jam_basis(s, cfg)
    if b.g1_hat is None or ph == 0.0:
        return Beamformer(np.zeros(s.nt, dtype=complex), (0j, 0j), 'silent')
    if b.g2_hat is None or b.collinear:
        # No freedom left: any power delivered to Bob 1 also hits Bob 2.
        w = _along_g1(b, ph)
        return Beamformer(w, (complex(np.vdot(b.g1_hat, w)), 0j), 'collinear')

    b1, b2 = abs(b.g1_on_g2), abs(b.g1_on_g2perp)
    if ph <= s.p_max * b2 ** 2:
        alpha = 0j
        beta = math.sqrt(ph) / b2 * _phase(b.g1_on_g2perp)
        case = 'zero-forcing'
    else:
        kappa = float(_upper_kappa(s, b, ph))
        iota = math.sqrt(max(s.p_max - kappa ** 2, 0.0))
        alpha = kappa * _phase(b.g1_on_g2)
        beta = iota * _phase(b.g1_on_g2perp)
        case = 'full-power'
    w = alpha * b.g2_hat + beta * b.g2_perp
    return Beamformer(w, (alpha, beta), case)


def lower_boundary_beamformer(s, r1, cfg=DEFAULT_CONFIG):
    """
    Beamformer attaining ``(r1, f_min(r1))``.

    Full power, split as ``mu * g1_hat + nu * g1_perp`` with both
    components adding coherently at Bob 2.
    """
    ph = _scalar_phi(s, 1, r1, cfg)
    b = jam_basis(s, cfg)
    if _bob1_free(s, b):
        if b.g2_hat is None:
            return Beamformer(np.zeros(s.nt, dtype=complex), (0j, 0j), 'silent')
        w = math.sqrt(s.p_max) * b.g2_hat
        return Beamformer(w, (0j, complex(math.sqrt(s.p_max))), 'mrt-bob2')
    if b.g2_hat is None or b.collinear:
        w = _along_g1(b, ph)
        return Beamformer(w, (complex(np.vdot(b.g1_hat, w)), 0j), 'collinear')
    mu_mag, nu_mag = _lower_mags(s, b, ph)
    mu = float(mu_mag) * _phase(b.g2_on_g1)
    nu = float(nu_mag) * _phase(b.g2_on_g1perp)
    w = mu * b.g1_hat + nu * b.g1_perp
    return Beamformer(w, (mu, nu), 'full-power')


def min_power_beamformer(s, target, cfg=DEFAULT_CONFIG):
    """
    Least-power beamformer achieving the rate pair `target` exactly.

    ``w = eps1 * g1_hat + eps2 * g1_perp``: ``|eps1|`` is fixed by Bob 1's
    rate, and ``eps2`` is the shortest weight that brings the total
    jamming at Bob 2 to ``phi2(r2)``. When the ``eps1`` term alone already
    overshoots Bob 2's target, ``eps2`` takes the opposite phase
    (negative signed magnitude) to cancel the excess.

    Raises
    ------
    InfeasibleTargetError
        If `target` is outside the region; the message names the violated
        boundary.
    """
    r1, r2 = float(target[0]), float(target[1])
    ph1 = _scalar_phi(s, 1, r1, cfg)
    r1 = float(np.clip(r1, *rate_extremes(s, 1)[:2]))
    hi, lo = float(f_max(s, r1, cfg)), float(f_min(s, r1, cfg))
    if r2 > hi + cfg.tol_rate:
        raise InfeasibleTargetError(
            f"r2={r2:.12g} is above the upper boundary f_max={hi:.12g}")
    if r2 < lo - cfg.tol_rate:
        raise InfeasibleTargetError(
            f"r2={r2:.12g} is below the lower boundary f_min={lo:.12g}")
    r2 = min(max(r2, lo), hi)
    ph2 = _scalar_phi(s, 2, r2, cfg)
    b = jam_basis(s, cfg)

    if _bob1_free(s, b):
        if b.g2_hat is None or ph2 == 0.0:
            return Beamformer(np.zeros(s.nt, dtype=complex), (0j, 0j), 'silent')
        w = math.sqrt(ph2) / b.g2n * b.g2_hat
        return Beamformer(w, (0j, complex(np.vdot(b.g2_hat, w))), 'mrt-bob2')
    eps1 = math.sqrt(ph1) / b.g1n * _phase(b.g2_on_g1)
    if b.g2_hat is None or b.collinear:
        return Beamformer(eps1 * b.g1_hat, (eps1, 0j), 'collinear')
    signed = (math.sqrt(ph2) - abs(eps1) * abs(b.g2_on_g1)) / abs(b.g2_on_g1perp)
    eps2 = signed * _phase(b.g2_on_g1perp)
    w = eps1 * b.g1_hat + eps2 * b.g1_perp
    return Beamformer(w, (eps1, eps2), 'interior')


def null_space_jammer_transform(s):
    """
    Restrict jamming to the null space of the loop-back channel.

    Returns ``(reduced, V)``: `reduced` is `s` with jamming channels
    ``V^H g_i`` (and loop-back ``hee @ V``), so any beamformer ``wbar``
    designed for it lifts to ``V @ wbar`` with no self-interference.
    """
    v = null_space_basis(s.hee)
    if v.shape[1] == 0:
        raise NullSpaceUnavailableError(
            f"null-space jamming unavailable: nt={s.nt} <= rank(hee)")
    reduced = s.replace(g1=v.conj().T @ s.g1, g2=v.conj().T @ s.g2,
                        hee=s.hee @ v)
    return reduced, v


def lift(v, bf):
    """Map a reduced-space beamformer back to the full transmit array."""
    return Beamformer(v @ bf.w, bf.coeffs, bf.case)
