"""
Brute-force checks for the closed-form jamming solutions.

Each search works from first principles (rate definitions and the raw
channel vectors) and never calls the closed forms it is checking; only
the comparison helpers at the bottom do.

The boundary and power searches run over the exact set of beamformers
that meet Bob 1's rate in the plane of ``g1`` and ``g2``:

    w = sqrt(phi1) / ||g1|| * g1_hat + t * e,   |t|^2 <= P_max - phi1/||g1||^2

with ``e`` the unit vector of that plane orthogonal to ``g1``. Searching
over ``t`` (a disc) instead of the two coefficients in the ``g2`` frame
keeps the feasible set nonempty on the grid even when it shrinks to a
point at Bob 1's lowest rate. The rank-1 and bracket checks probe the full
transmit space with random covariances.
"""

from dataclasses import dataclass, field
import math
from typing import Any

import numpy as np
from scipy.optimize import minimize_scalar

from . import jammer
from .jammer import Beamformer, InfeasibleTargetError, DEFAULT_CONFIG
from .linalg import complement_unit, norm
from .rates import rate_from_jam_power, suspicious_rate_w
from .scenario import effective_noise

__all__ = ['OracleReport', 'oracle_f_max', 'oracle_f_min', 'oracle_min_power',
           'oracle_rank1_check', 'oracle_rate_bracket', 'oracle_region_probe',
           'sample_interior_target', 'check_boundaries', 'check_min_power',
           'run_checks', 'RATE_TOL', 'POWER_RTOL', 'BRACKET_TOL']

RATE_TOL = 1e-4       # bits/s/Hz, boundary gap at n_grid = 1e4
POWER_RTOL = 1e-2     # relative, minimum-power gap
BRACKET_TOL = 1e-9    # bits/s/Hz, soundness of random probes
ACHIEVED_TOL = 1e-6   # bits/s/Hz, interior solver hitting its target

_POLISH_XATOL = 1e-13


@dataclass
class OracleReport:
    """
    Outcome of one oracle comparison.

    `counterexample` holds the worst probe when the check fails: a
    :class:`Beamformer` for rank-1 searches, a covariance matrix for the
    rank-2 probe.
    """
    quantity: str
    closed_form: float
    oracle: float
    abs_gap: float
    n_probes: int
    verdict: str
    tol: float
    counterexample: Any = None
    detail: dict = field(default_factory=dict)

    @classmethod
    def judge(cls, quantity, closed_form, oracle, abs_gap, n_probes, tol,
              counterexample=None, **detail):
        ok = bool(abs_gap <= tol)
        return cls(quantity, float(closed_form), float(oracle), float(abs_gap),
                   int(n_probes), 'pass' if ok else 'fail', float(tol),
                   None if ok else counterexample, detail)

    @property
    def passed(self):
        return self.verdict == 'pass'

    def to_json(self):
        out = {'quantity': self.quantity, 'closed_form': self.closed_form,
               'oracle': self.oracle, 'abs_gap': self.abs_gap,
               'tol': self.tol, 'n_probes': self.n_probes,
               'verdict': self.verdict}
        if self.detail:
            out['detail'] = self.detail
        cx = self.counterexample
        if cx is not None:
            arr = cx.w if isinstance(cx, Beamformer) else np.asarray(cx)
            out['counterexample'] = {
                'shape': list(arr.shape),
                're': np.real(arr).ravel().tolist(),
                'im': np.imag(arr).ravel().tolist()}
        return out


# -- required jamming power, from the rate definition ------------------------

def _signal(s, link):
    return s.tx_power(link) * s.direct_gain(link)


def _required_jam(s, link, r, tol=DEFAULT_CONFIG.tol_rate):
    """
    Jamming power at Bob `link` that puts its rate at `r`, or None when the
    rate does not depend on jamming at all.
    """
    sig = _signal(s, link)
    noise = effective_noise(s, link)
    cap = s.p_max * norm(s.jam_channel(link)) ** 2
    hi = math.log2(1.0 + sig / noise)
    lo = math.log2(1.0 + sig / (cap + noise))
    if not (lo - tol <= r <= hi + tol):
        raise InfeasibleTargetError(
            f"rate {r!r} of link {link} outside [{lo!r}, {hi!r}]")
    if sig == 0.0 or cap == 0.0:
        return None
    r = min(max(r, lo), hi)
    if r == 0.0:
        return cap
    return min(max(sig / (2.0 ** r - 1.0) - noise, 0.0), cap)


class _Disc:
    """Beamformers meeting Bob 1's rate: ``w = w0 + t * e`` with ``|t| <= radius``."""

    def __init__(self, s, r1):
        g1, g2 = s.g1, s.g2
        jam1 = _required_jam(s, 1, r1)
        g1n = norm(g1)
        if jam1 is None:
            # Bob 1 is indifferent: the whole ball is available, searched
            # along the direction that matters to Bob 2.
            self.w0 = np.zeros(s.nt, dtype=complex)
            g2n = norm(g2)
            self.e = g2 / g2n if g2n > 0 else None
            self.radius = math.sqrt(s.p_max)
        else:
            g1_hat = g1 / g1n
            self.w0 = math.sqrt(jam1) / g1n * g1_hat
            self.e = None
            if norm(g2) > 0:
                self.e = complement_unit(g2, g1, 1e-9)
            self.radius = math.sqrt(max(s.p_max - jam1 / g1n ** 2, 0.0))
        self.a = complex(np.vdot(g2, self.w0))
        self.c = complex(np.vdot(g2, self.e)) if self.e is not None else 0j

    def bob2_jam(self, rho, psi):
        """Received jamming at Bob 2 for ``t = radius * rho * exp(j psi)``."""
        t = self.radius * np.asarray(rho) * np.exp(1j * np.asarray(psi))
        return np.abs(self.a + t * self.c) ** 2

    def beamformer(self, t):
        if self.e is None:
            return Beamformer(self.w0.copy(), (0j, 0j), 'oracle')
        return Beamformer(self.w0 + t * self.e, (0j, t), 'oracle')


def _psi_grid(n_grid):
    n = n_grid + (n_grid % 2)        # even, so 0 and pi are both on it
    return np.arange(n) * (2 * math.pi / n)


def _polish(fun, psi0, step):
    res = minimize_scalar(fun, bounds=(psi0 - step, psi0 + step),
                          method='bounded', options={'xatol': _POLISH_XATOL})
    return float(res.x), float(res.fun)


def _search_boundary(s, r1, n_grid, mode):
    if n_grid < 100:
        raise ValueError("n_grid must be >= 100")
    d = _Disc(s, r1)
    if d.e is None or d.radius == 0.0:
        bf = d.beamformer(0j)
        return float(suspicious_rate_w(s, bf.w, 2)), bf, 1

    psi = _psi_grid(n_grid)
    step = psi[1] - psi[0]
    R, a, c = d.radius, d.a, d.c
    # For a fixed phase, Bob 2's jamming is a convex quadratic in rho.
    cc = abs(c) ** 2 * R ** 2

    if mode == 'max_rate':
        rho_of = lambda pr: np.clip(-pr * R / cc, 0.0, 1.0) if cc > 0 else 0.0 * pr
        sign = 1.0
    else:
        # Maximizing a convex quadratic over [0, 1]: an endpoint.
        rho_of = lambda pr: np.ones_like(pr)
        sign = -1.0

    def cost(ps):
        pr = np.real(np.conj(a) * c * np.exp(1j * ps))
        return sign * d.bob2_jam(rho_of(pr), ps)

    vals = cost(psi)
    k = int(np.argmin(vals))
    best_psi, best = float(psi[k]), float(vals[k])
    p2, v2 = _polish(lambda x: float(cost(x)), best_psi, step)
    if v2 < best:
        best_psi, best = p2, v2
    if mode == 'min_rate':
        # rho = 0 is the other endpoint (t = 0).
        if -abs(a) ** 2 < best:
            best_psi, best = 0.0, -abs(a) ** 2
            rho = 0.0
        else:
            rho = 1.0
    else:
        rho = float(rho_of(np.real(np.conj(a) * c * np.exp(1j * best_psi))))
    bf = d.beamformer(R * rho * complex(np.exp(1j * best_psi)))
    return float(suspicious_rate_w(s, bf.w, 2)), bf, len(psi) + 1


def oracle_f_max(s, r1, n_grid=10_000):
    """Highest Bob 2 rate found by searching the feasible beamformers."""
    return _search_boundary(s, r1, n_grid, 'max_rate')[0]


def oracle_f_min(s, r1, n_grid=10_000):
    """Lowest Bob 2 rate found by searching the feasible beamformers."""
    return _search_boundary(s, r1, n_grid, 'min_rate')[0]


def _min_power_search(s, target, n_grid):
    r1, r2 = float(target[0]), float(target[1])
    d = _Disc(s, r1)
    jam2 = _required_jam(s, 2, r2)
    base = float(np.real(np.vdot(d.w0, d.w0)))
    if jam2 is None:
        return base, d.beamformer(0j), 1
    if d.e is None or d.radius == 0.0:
        got = abs(d.a) ** 2
        if abs(got - jam2) > 1e-9 * max(jam2, got, 1e-300) and \
                abs(float(rate_from_jam_power(s, 2, got)) - r2) > ACHIEVED_TOL:
            raise InfeasibleTargetError(f"target {target!r} not reachable")
        return base, d.beamformer(0j), 1

    # For a phase psi of t, solve |a + m e^{j psi} c|^2 = jam2 for the
    # smallest m >= 0; a negative root would be the opposite phase,
    # which the grid covers separately.
    a, c = d.a, d.c
    cc = abs(c) ** 2

    def mag(ps):
        pr = np.real(np.conj(a) * c * np.exp(1j * np.asarray(ps)))
        disc = pr ** 2 - cc * (abs(a) ** 2 - jam2)
        root_d = np.sqrt(np.maximum(disc, 0.0))
        lo, hi = (-pr - root_d) / cc, (-pr + root_d) / cc
        m = np.where(lo >= 0, lo, hi)
        return np.where((disc >= 0) & (m >= 0), m, np.inf)

    psi = _psi_grid(n_grid)
    vals = mag(psi)
    k = int(np.argmin(vals))
    if not np.isfinite(vals[k]):
        raise InfeasibleTargetError(f"target {target!r} not reachable")
    best_psi, best = float(psi[k]), float(vals[k])
    p2, v2 = _polish(lambda x: float(mag(x)), best_psi, psi[1] - psi[0])
    if v2 < best:
        best_psi, best = p2, v2
    power = base + best ** 2
    if power > s.p_max * (1 + 1e-9):
        raise InfeasibleTargetError(
            f"target {target!r} needs {power:.6g} W > budget {s.p_max:.6g} W")
    return power, d.beamformer(best * complex(np.exp(1j * best_psi))), len(psi) + 1


def oracle_min_power(s, target, n_grid=10_000):
    """Least transmit power (watts) found that meets both target rates."""
    return _min_power_search(s, target, n_grid)[0]


# -- random probes over the full transmit space ------------------------------

def _rng(rng):
    return rng if isinstance(rng, np.random.Generator) else np.random.default_rng(rng)


def _cn(rng, shape):
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / math.sqrt(2)


def _rank2_probes(s, jam1, n, rng):
    """
    Random PSD matrices ``Q = A A^H`` (A is nt x 2) with ``g1^H Q g1 = jam1``
    and ``Tr Q <= P_max``. Half sit exactly on the power budget.
    """
    nt = s.nt
    g1 = s.g1
    g1n = norm(g1)
    a = _cn(rng, (n, nt, 2))
    if g1n == 0.0 or jam1 is None:
        tr = np.einsum('nij,nij->n', a.conj(), a).real
        scale = s.p_max * rng.uniform(0, 1, n)
        scale[: n // 2] = s.p_max
        return a * np.sqrt(scale / tr)[:, None, None]
    g1_hat = g1 / g1n
    along = np.einsum('i,nij->nj', g1_hat.conj(), a)            # (n, 2)
    par = g1_hat[None, :, None] * along[:, None, :]
    perp = a - par
    u = np.einsum('nj,nj->n', along.conj(), along).real
    v = np.einsum('nij,nij->n', perp.conj(), perp).real
    if jam1 == 0.0:
        # Nothing may reach Bob 1: jam only orthogonally to g1.
        scale = s.p_max * rng.uniform(0, 1, n)
        scale[: n // 2] = s.p_max
        return perp * np.sqrt(scale / np.maximum(v, 1e-300))[:, None, None]
    c = jam1 / (g1n ** 2 * u)                                    # Q scale
    t2_max = np.maximum((s.p_max / c - u) / np.where(v > 0, v, 1.0), 0.0)
    frac = rng.uniform(0, 1, n)
    frac[: n // 2] = 1.0
    t = np.sqrt(t2_max * frac)
    return (par + t[:, None, None] * perp) * np.sqrt(c)[:, None, None]


def oracle_rank1_check(s, r1, n_trials=10_000, rng=0, tol=RATE_TOL,
                       cfg=DEFAULT_CONFIG):
    """
    Probe rank-2 covariances meeting Bob 1's rate for Bob 2 rates outside
    the closed-form interval ``[f_min(r1), f_max(r1)]``.

    With ``nt == 1`` (or when the constraint pins the jamming to one
    direction) the probes are necessarily rank 1.
    """
    hi = float(jammer.f_max(s, r1, cfg))
    lo = float(jammer.f_min(s, r1, cfg))
    if n_trials == 0:
        return OracleReport.judge('rank1', hi, hi, 0.0, 0, tol,
                                  r1=float(r1), vacuous=True)
    rng = _rng(rng)
    jam1 = _required_jam(s, 1, r1)
    a = _rank2_probes(s, jam1, n_trials, rng)
    g2 = s.g2
    jam2 = np.sum(np.abs(np.einsum('i,nij->nj', g2.conj(), a)) ** 2, axis=1)
    r2 = np.asarray(rate_from_jam_power(s, 2, jam2))
    over, under = r2 - hi, lo - r2
    viol = np.maximum(np.maximum(over, under), 0.0)
    k = int(np.argmax(viol))
    q = a[k] @ a[k].conj().T
    return OracleReport.judge('rank1', hi, float(r2.max()), float(viol[k]),
                              n_trials, tol, counterexample=q, r1=float(r1),
                              f_min=lo, oracle_min=float(r2.min()))


def _random_beamformers(s, n, rng, bias=None):
    """Random w with ``||w||^2 <= P_max``; a share leans towards `bias`."""
    w = _cn(rng, (n, s.nt))
    if bias is not None and norm(bias) > 0:
        lean = rng.uniform(0, 1, n) ** 2
        w = (1 - lean)[:, None] * w + lean[:, None] * (bias / norm(bias))[None, :]
    wn = np.linalg.norm(w, axis=1)
    p = s.p_max * rng.uniform(0, 1, n)
    p[: n // 2] = s.p_max
    return w * np.sqrt(p / np.where(wn > 0, wn ** 2, 1.0))[:, None]


def oracle_rate_bracket(s, link, n_trials=10_000, rng=0, tol=BRACKET_TOL):
    """
    Rates of `link` under random rank-1 jamming must stay inside
    ``[r_min, r_max]``.
    """
    ext = jammer.rate_extremes(s, link)
    rng = _rng(rng)
    w = _random_beamformers(s, n_trials, rng, bias=s.jam_channel(link))
    r = np.asarray(suspicious_rate_w(s, w, link))
    viol = np.maximum(np.maximum(r - ext.r_max, ext.r_min - r), 0.0)
    k = int(np.argmax(viol))
    return OracleReport.judge(f'rate_bracket_{link}', ext.r_min, float(r.min()),
                              float(viol[k]), n_trials, tol,
                              counterexample=Beamformer(w[k]),
                              r_max=ext.r_max, oracle_max=float(r.max()))


def oracle_region_probe(s, n_trials=10_000, rng=0, tol=BRACKET_TOL,
                        cfg=DEFAULT_CONFIG):
    """
    Random beamformers must land between the boundaries at their own r1.
    """
    rng = _rng(rng)
    w = _random_beamformers(s, n_trials, rng,
                            bias=s.g1 if rng.uniform() < 0.5 else s.g2)
    r1 = np.asarray(suspicious_rate_w(s, w, 1), dtype=float)
    r2 = np.asarray(suspicious_rate_w(s, w, 2), dtype=float)
    hi = np.atleast_1d(jammer.f_max(s, r1, cfg))
    lo = np.atleast_1d(jammer.f_min(s, r1, cfg))
    viol = np.maximum(np.maximum(r2 - hi, lo - r2), 0.0)
    k = int(np.argmax(viol))
    return OracleReport.judge('region_probe', float(hi[k]), float(r2[k]),
                              float(viol[k]), n_trials, tol,
                              counterexample=Beamformer(w[k]))


# -- closed form vs search -----------------------------------------------------

def sample_interior_target(s, rng, cfg=DEFAULT_CONFIG):
    """Uniform r1, then uniform r2 between the two boundaries."""
    rng = _rng(rng)
    e1 = jammer.rate_extremes(s, 1)
    r1 = float(rng.uniform(e1.r_min, e1.r_max))
    lo, hi = float(jammer.f_min(s, r1, cfg)), float(jammer.f_max(s, r1, cfg))
    return r1, float(rng.uniform(lo, hi))


def check_boundaries(s, r1_values, n_grid=10_000, tol=RATE_TOL,
                     cfg=DEFAULT_CONFIG):
    """One report per boundary and r1 sample."""
    out = []
    for r1 in np.atleast_1d(r1_values):
        r1 = float(r1)
        for name, closed, mode in (('f_max', jammer.f_max, 'max_rate'),
                                   ('f_min', jammer.f_min, 'min_rate')):
            cf = float(closed(s, r1, cfg))
            val, bf, n = _search_boundary(s, r1, n_grid, mode)
            out.append(OracleReport.judge(name, cf, val, abs(cf - val), n, tol,
                                          counterexample=bf, r1=r1))
    return out


def check_min_power(s, target, n_grid=10_000, rtol=POWER_RTOL,
                    cfg=DEFAULT_CONFIG):
    """
    Compare the interior solver with the power search; the solver must
    also hit both target rates within 1e-6.
    """
    bf = jammer.min_power_beamformer(s, target, cfg)
    oracle_p, _, n = _min_power_search(s, target, n_grid)
    got = (float(suspicious_rate_w(s, bf.w, 1)), float(suspicious_rate_w(s, bf.w, 2)))
    miss = max(abs(got[0] - target[0]), abs(got[1] - target[1]))
    gap = abs(bf.power - oracle_p)
    tol = rtol * max(oracle_p, 1e-12 * max(s.p_max, 1e-300))
    if miss > ACHIEVED_TOL:
        gap = math.inf
    return OracleReport.judge('min_power', bf.power, oracle_p, gap, n, tol,
                              counterexample=bf, target=list(map(float, target)),
                              rate_miss=miss)


def run_checks(s, rng=0, n_grid=10_000, trials=10_000, n_r1=4, n_targets=4,
               cfg=DEFAULT_CONFIG):
    """
    Full oracle suite for one scenario; returns a list of reports.

    ``trials = 0`` skips the random-probe checks (they pass vacuously).
    """
    rng = _rng(rng)
    e1 = jammer.rate_extremes(s, 1)
    r1s = np.linspace(e1.r_min, e1.r_max, n_r1) if n_r1 > 1 else [e1.r_max]
    reports = check_boundaries(s, r1s, n_grid, cfg=cfg)
    for _ in range(n_targets):
        reports.append(check_min_power(s, sample_interior_target(s, rng, cfg),
                                       n_grid, cfg=cfg))
    r1 = float(rng.uniform(e1.r_min, e1.r_max))
    reports.append(oracle_rank1_check(s, r1, trials, rng, cfg=cfg))
    if trials > 0:
        for link in (1, 2):
            reports.append(oracle_rate_bracket(s, link, trials, rng))
        reports.append(oracle_region_probe(s, trials, rng, cfg=cfg))
    return reports
