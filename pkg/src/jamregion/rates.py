"""Achievable-rate formulas (bits/s/Hz) for suspicious and eavesdropping links."""

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .scenario import effective_noise

__all__ = ['RatePair', 'DecodingOrder', 'PSD_RTOL', 'check_psd',
           'rate_from_jam_power', 'suspicious_rate', 'suspicious_rate_w',
           'mmse_eaves_rate', 'interference_free_rate', 'sic_rates',
           'si_eaves_rate']

# q is accepted as PSD when lambda_min >= -PSD_RTOL * Tr(q).
PSD_RTOL = 1e-9


class RatePair(NamedTuple):
    r1: float
    r2: float


@dataclass(frozen=True)
class DecodingOrder:
    """SIC decoding order; link `first` is decoded (and cancelled) first."""
    first: int = 1

    def __post_init__(self):
        if self.first not in (1, 2):
            raise ValueError(f"first must be 1 or 2, got {self.first!r}")

    @property
    def second(self):
        return 3 - self.first


def check_psd(q, nt):
    """Validate a jamming covariance and return it as a complex array."""
    q = np.asarray(q, dtype=complex)
    if q.shape != (nt, nt):
        raise ValueError(f"covariance must be {nt}x{nt}, got {q.shape}")
    herm = 0.5 * (q + q.conj().T)
    if not np.allclose(q, herm, rtol=0, atol=1e-12 * max(1.0, np.abs(q).max())):
        raise ValueError("covariance is not Hermitian")
    tr = float(np.real(np.trace(herm)))
    lam_min = float(np.linalg.eigvalsh(herm)[0])
    if lam_min < -PSD_RTOL * max(tr, 0.0) or tr < 0:
        raise ValueError(
            f"covariance is not PSD (min eigenvalue {lam_min:.3e})")
    return herm


def rate_from_jam_power(s, link, jam_power):
    """
    Rate of suspicious link `link` when Bob receives `jam_power` watts of
    jamming. Accepts scalars or arrays.
    """
    signal = s.tx_power(link) * s.direct_gain(link)
    return np.log2(1.0 + signal / (jam_power + effective_noise(s, link)))


def suspicious_rate(s, q, link):
    """Rate of suspicious link `link` under jamming covariance `q`."""
    q = check_psd(q, s.nt)
    g = s.jam_channel(link)
    jam = float(np.real(g.conj() @ q @ g))
    return float(rate_from_jam_power(s, link, max(jam, 0.0)))


def suspicious_rate_w(s, w, link):
    """
    Rate of link `link` for beamformer(s) `w`.

    `w` may be a single vector (nt,) or a stack (..., nt); the rank-1
    identity ``Tr(w w^H g g^H) = |g^H w|^2`` is used directly.
    """
    g = s.jam_channel(link)
    jam = np.abs(np.asarray(w, dtype=complex) @ g.conj()) ** 2
    return rate_from_jam_power(s, link, jam)


def _mmse_rate(s, link, extra_cov=None):
    other = 3 - link
    hi, hj = s.eaves_channel(link), s.eaves_channel(other)
    cov = s.tx_power(other) * np.outer(hj, hj.conj()) \
        + s.sigma_m_sq * np.eye(s.nr)
    if extra_cov is not None:
        cov = cov + extra_cov
    sinr = s.tx_power(link) * float(np.real(hi.conj() @ np.linalg.solve(cov, hi)))
    return float(np.log2(1.0 + sinr))


def mmse_eaves_rate(s, link):
    """Monitor's MMSE rate for link `link`, the other link as interference."""
    return _mmse_rate(s, link)


def interference_free_rate(s, link):
    """Monitor's rate for `link` after the other link has been cancelled."""
    h = s.eaves_channel(link)
    snr = s.tx_power(link) * float(np.real(np.vdot(h, h))) / s.sigma_m_sq
    return float(np.log2(1.0 + snr))


def sic_rates(s, order):
    """
    Eavesdropping rates under MMSE-SIC with decoding order `order`.

    The first-decoded link sees the other as interference; the second is
    decoded interference-free.
    """
    if isinstance(order, int):
        order = DecodingOrder(order)
    rates = {order.first: mmse_eaves_rate(s, order.first),
             order.second: interference_free_rate(s, order.second)}
    return RatePair(rates[1], rates[2])


def si_eaves_rate(s, q, link):
    """
    MMSE eavesdropping rate with residual self-interference.

    The loop-back leakage ``rho * Hee Q Hee^H`` is added to the
    interference-plus-noise covariance, so ``rho = 0`` or ``Q = 0`` gives
    :func:`mmse_eaves_rate` back.
    """
    q = check_psd(q, s.nt)
    leak = s.rho * (s.hee @ q @ s.hee.conj().T)
    return _mmse_rate(s, link, 0.5 * (leak + leak.conj().T))
