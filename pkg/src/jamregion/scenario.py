"""
Problem instances: channels, powers and node geometry.

A :class:`Scenario` carries everything the rate formulas need. Powers are
in watts throughout the library; dBm only appears at the file/CLI boundary
(:func:`dbm_to_watts`, :func:`watts_to_dbm`).

Random scenarios come from :func:`generate`, which draws i.i.d. Rayleigh
coefficients whose variance is the distance-dependent path loss of each
link. The generator is numpy's PCG64 (``numpy.random.default_rng(seed)``)
and the draw order is fixed::

    h11, h12, h21, h22, h1m[0..nr), h2m[0..nr), g1[0..nt), g2[0..nt),
    hee row-major (nr x nt)

Each complex coefficient consumes two standard normals, real part first.
"""

from dataclasses import dataclass, field, replace
import json
import math

import numpy as np

from .linalg import as_cvec, as_cmat

__all__ = ['Scenario', 'Geometry', 'ScenarioParams', 'path_loss',
           'dbm_to_watts', 'watts_to_dbm', 'generate', 'effective_noise',
           'scenario_to_dict', 'scenario_from_dict', 'save_scenario',
           'load_scenario', 'SCENARIO_VERSION']

SCENARIO_VERSION = 1


def _frozen(a):
    a = np.array(a, dtype=complex)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class Scenario:
    """
    One channel realization of the two-link surveillance setup.

    ``hij`` is the scalar channel from Alice i to Bob j, ``him`` the
    vector channel from Alice i to the monitor's receive array (length
    nr), ``gi`` the jamming channel from the monitor's transmit array to
    Bob i (length nt), and ``hee`` the monitor's nr x nt loop-back
    channel.
    """
    h11: complex
    h12: complex
    h21: complex
    h22: complex
    h1m: np.ndarray
    h2m: np.ndarray
    g1: np.ndarray
    g2: np.ndarray
    hee: np.ndarray
    p1: float
    p2: float
    sigma1_sq: float
    sigma2_sq: float
    sigma_m_sq: float
    p_max: float
    rho: float = 0.0
    geometry: 'Geometry | None' = field(default=None, compare=False)
    seed: 'int | None' = field(default=None, compare=False)

    def __post_init__(self):
        for name in ('h11', 'h12', 'h21', 'h22'):
            v = complex(getattr(self, name))
            if not (math.isfinite(v.real) and math.isfinite(v.imag)):
                raise ValueError(f"{name} is not finite")
            object.__setattr__(self, name, v)
        for name in ('h1m', 'h2m', 'g1', 'g2'):
            object.__setattr__(self, name, _frozen(as_cvec(getattr(self, name), name)))
        object.__setattr__(self, 'hee', _frozen(as_cmat(self.hee, 'hee')))
        for name in ('p1', 'p2', 'sigma1_sq', 'sigma2_sq', 'sigma_m_sq',
                     'p_max', 'rho'):
            object.__setattr__(self, name, float(getattr(self, name)))

        # A silent transmitter (power 0) is allowed; it yields zero rates.
        if self.p1 < 0 or self.p2 < 0:
            raise ValueError("transmit powers must be nonnegative")
        if min(self.sigma1_sq, self.sigma2_sq, self.sigma_m_sq) <= 0:
            raise ValueError("noise powers must be positive")
        if self.p_max < 0:
            raise ValueError("p_max must be nonnegative")
        if not 0.0 <= self.rho <= 1.0:
            raise ValueError("rho must lie in [0, 1]")
        if self.h1m.shape != self.h2m.shape:
            raise ValueError("h1m and h2m must have the same length")
        if self.g1.shape != self.g2.shape:
            raise ValueError("g1 and g2 must have the same length")
        if self.hee.shape != (self.nr, self.nt):
            raise ValueError(
                f"hee must be {self.nr}x{self.nt}, got {self.hee.shape}")

    def __eq__(self, other):
        # Value equality on the physical fields; geometry and seed are
        # provenance only.
        if not isinstance(other, Scenario):
            return NotImplemented
        return all(np.array_equal(getattr(self, f), getattr(other, f))
                   for f in _VALUE_FIELDS)

    __hash__ = None

    @property
    def nt(self):
        return self.g1.shape[0]

    @property
    def nr(self):
        return self.h1m.shape[0]

    def replace(self, **changes):
        return replace(self, **changes)

    # Per-link accessors used by the rate code; `link` is 1 or 2.
    def direct_gain(self, link):
        h = self.h11 if _check_link(link) == 1 else self.h22
        return abs(h) ** 2

    def tx_power(self, link):
        return self.p1 if _check_link(link) == 1 else self.p2

    def jam_channel(self, link):
        return self.g1 if _check_link(link) == 1 else self.g2

    def eaves_channel(self, link):
        return self.h1m if _check_link(link) == 1 else self.h2m


_VALUE_FIELDS = ('h11', 'h12', 'h21', 'h22', 'h1m', 'h2m', 'g1', 'g2', 'hee',
                 'p1', 'p2', 'sigma1_sq', 'sigma2_sq', 'sigma_m_sq', 'p_max',
                 'rho')


def _check_link(link):
    if link not in (1, 2):
        raise ValueError(f"link must be 1 or 2, got {link!r}")
    return link


@dataclass(frozen=True)
class Geometry:
    """Node positions in meters on the ground plane."""
    alice1: tuple = (0.0, 0.0)
    alice2: tuple = (0.0, 200.0)
    bob1: tuple = (100.0, 0.0)
    bob2: tuple = (100.0, 200.0)
    monitor: tuple = (100.0, 100.0)

    def __post_init__(self):
        for name in ('alice1', 'alice2', 'bob1', 'bob2', 'monitor'):
            xy = tuple(float(c) for c in getattr(self, name))
            if len(xy) != 2 or not all(math.isfinite(c) for c in xy):
                raise ValueError(f"{name} must be two finite coordinates")
            object.__setattr__(self, name, xy)

    def to_dict(self):
        return {k: list(getattr(self, k))
                for k in ('alice1', 'alice2', 'bob1', 'bob2', 'monitor')}

    @classmethod
    def from_dict(cls, d):
        return cls(**{k: tuple(v) for k, v in d.items()})


@dataclass(frozen=True)
class ScenarioParams:
    """Power, antenna and propagation settings for :func:`generate`."""
    p1_dbm: float = 10.0
    p2_dbm: float = 10.0
    pmax_dbm: float = 20.0
    sigma1_dbm: float = -70.0
    sigma2_dbm: float = -70.0
    sigmam_dbm: float = -70.0
    nt: int = 2
    nr: int = 2
    rho: float = 0.0
    a0: float = 1e-3
    d0: float = 1.0
    alpha_pl: float = 2.5
    # Variance of the loop-back channel entries; None means a0.
    hee_gain: 'float | None' = None


def dbm_to_watts(x):
    return 10.0 ** (x / 10.0) * 1e-3


def watts_to_dbm(w):
    if w <= 0:
        return -math.inf
    return 10.0 * math.log10(w) + 30.0


def path_loss(distance, a0=1e-3, d0=1.0, alpha_pl=2.5):
    """Power gain ``a0 * (distance / d0) ** -alpha_pl``."""
    if not distance > 0:
        raise ValueError(f"distance must be positive, got {distance}")
    if not d0 > 0 or not alpha_pl > 0:
        raise ValueError("d0 and alpha_pl must be positive")
    return a0 * (distance / d0) ** (-alpha_pl)


def _link_gain(a, b, params):
    d = math.dist(a, b)
    # Clamp so no link is stronger than the reference-distance gain.
    return path_loss(max(d, params.d0), params.a0, params.d0, params.alpha_pl)


def _cn(rng, variance, size):
    z = rng.standard_normal((size, 2))
    return (z[:, 0] + 1j * z[:, 1]) * math.sqrt(variance / 2.0)


def generate(geometry=None, params=None, rng_seed=0):
    """
    Draw a random :class:`Scenario` for `geometry` under `params`.

    Deterministic in `rng_seed`; see the module docstring for the stream
    order.
    """
    geometry = geometry or Geometry()
    params = params or ScenarioParams()
    nt, nr = int(params.nt), int(params.nr)
    if nt < 1 or nr < 1:
        raise ValueError(f"antenna counts must be >= 1, got nt={nt}, nr={nr}")
    rng = np.random.default_rng(rng_seed)
    g = geometry

    h11 = _cn(rng, _link_gain(g.alice1, g.bob1, params), 1)[0]
    h12 = _cn(rng, _link_gain(g.alice1, g.bob2, params), 1)[0]
    h21 = _cn(rng, _link_gain(g.alice2, g.bob1, params), 1)[0]
    h22 = _cn(rng, _link_gain(g.alice2, g.bob2, params), 1)[0]
    h1m = _cn(rng, _link_gain(g.alice1, g.monitor, params), nr)
    h2m = _cn(rng, _link_gain(g.alice2, g.monitor, params), nr)
    g1 = _cn(rng, _link_gain(g.monitor, g.bob1, params), nt)
    g2 = _cn(rng, _link_gain(g.monitor, g.bob2, params), nt)
    hee_var = params.a0 if params.hee_gain is None else params.hee_gain
    hee = _cn(rng, hee_var, nr * nt).reshape(nr, nt)

    return Scenario(
        h11=h11, h12=h12, h21=h21, h22=h22, h1m=h1m, h2m=h2m, g1=g1, g2=g2,
        hee=hee,
        p1=dbm_to_watts(params.p1_dbm), p2=dbm_to_watts(params.p2_dbm),
        sigma1_sq=dbm_to_watts(params.sigma1_dbm),
        sigma2_sq=dbm_to_watts(params.sigma2_dbm),
        sigma_m_sq=dbm_to_watts(params.sigmam_dbm),
        p_max=dbm_to_watts(params.pmax_dbm),
        rho=params.rho, geometry=geometry, seed=rng_seed)


def effective_noise(s, receiver_index):
    """Noise plus cross-link interference power at Bob `receiver_index`."""
    if _check_link(receiver_index) == 1:
        return s.p2 * abs(s.h21) ** 2 + s.sigma1_sq
    return s.p1 * abs(s.h12) ** 2 + s.sigma2_sq


# -- JSON ------------------------------------------------------------------

def _c(z):
    z = complex(z)
    return [z.real, z.imag]


def _v(v):
    return [_c(z) for z in v]


def _from_pair(p):
    return complex(p[0], p[1])


def _dbm_or_none(w):
    return None if w == 0 else watts_to_dbm(w)


def _watts_or_zero(x):
    return 0.0 if x is None else dbm_to_watts(x)


def scenario_to_dict(s):
    d = {
        'version': SCENARIO_VERSION,
        'nt': s.nt,
        'nr': s.nr,
        'channels': {
            'h11': _c(s.h11), 'h12': _c(s.h12),
            'h21': _c(s.h21), 'h22': _c(s.h22),
            'h1m': _v(s.h1m), 'h2m': _v(s.h2m),
            'g1': _v(s.g1), 'g2': _v(s.g2),
            'hee': [_v(row) for row in s.hee],
        },
        # A zero power has no dBm value and is written as null.
        'powers_dbm': {'p1': _dbm_or_none(s.p1), 'p2': _dbm_or_none(s.p2),
                       'pmax': _dbm_or_none(s.p_max)},
        'noise_dbm': {'sigma1': watts_to_dbm(s.sigma1_sq),
                      'sigma2': watts_to_dbm(s.sigma2_sq),
                      'sigmam': watts_to_dbm(s.sigma_m_sq)},
        'rho': s.rho,
    }
    if s.geometry is not None:
        d['geometry'] = s.geometry.to_dict()
    if s.seed is not None:
        d['seed'] = s.seed
    return d


def scenario_from_dict(d):
    if d.get('version') != SCENARIO_VERSION:
        raise ValueError(f"unsupported scenario version {d.get('version')!r}")
    ch = d['channels']
    nt, nr = int(d['nt']), int(d['nr'])
    hee_rows = ch['hee']
    hee = (np.array([[_from_pair(p) for p in row] for row in hee_rows],
                    dtype=complex)
           if hee_rows else np.zeros((nr, nt), dtype=complex))
    s = Scenario(
        h11=_from_pair(ch['h11']), h12=_from_pair(ch['h12']),
        h21=_from_pair(ch['h21']), h22=_from_pair(ch['h22']),
        h1m=[_from_pair(p) for p in ch['h1m']],
        h2m=[_from_pair(p) for p in ch['h2m']],
        g1=[_from_pair(p) for p in ch['g1']],
        g2=[_from_pair(p) for p in ch['g2']],
        hee=hee.reshape(nr, nt),
        p1=_watts_or_zero(d['powers_dbm']['p1']),
        p2=_watts_or_zero(d['powers_dbm']['p2']),
        p_max=_watts_or_zero(d['powers_dbm']['pmax']),
        sigma1_sq=dbm_to_watts(d['noise_dbm']['sigma1']),
        sigma2_sq=dbm_to_watts(d['noise_dbm']['sigma2']),
        sigma_m_sq=dbm_to_watts(d['noise_dbm']['sigmam']),
        rho=d.get('rho', 0.0),
        geometry=Geometry.from_dict(d['geometry']) if 'geometry' in d else None,
        seed=d.get('seed'))
    if s.nt != nt or s.nr != nr:
        raise ValueError("nt/nr do not match the channel dimensions")
    return s


def save_scenario(s, path):
    with open(path, 'w') as f:
        json.dump(scenario_to_dict(s), f, indent=1)
        f.write('\n')


def load_scenario(path):
    with open(path) as f:
        return scenario_from_dict(json.load(f))
