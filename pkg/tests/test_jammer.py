import math

import numpy as np
import pytest

from jamregion import jammer
from jamregion.jammer import (InfeasibleTargetError, NullSpaceUnavailableError,
                              SweepConfig, f_max, f_min, jam_basis, lift,
                              lower_boundary_beamformer, min_power_beamformer,
                              mrt_turning_point, null_space_jammer_transform,
                              phi, rate_extremes, upper_boundary_beamformer,
                              zf_threshold)
from jamregion.rates import suspicious_rate, suspicious_rate_w
from jamregion.scenario import ScenarioParams, generate

from conftest import make_scenario, default_scenarios

SUITE = default_scenarios(12)
TOL = jammer.DEFAULT_CONFIG.tol_rate


def unit_link(**kw):
    base = dict(h11=1.0, h21=0.0, sigma1_sq=1.0, p1=1.0,
                g1=[math.sqrt(1.5), 0.0], p_max=2.0)
    base.update(kw)
    return make_scenario(**base)


def orthogonal():
    return make_scenario(g1=[1.0 + 0.5j, 0.0], g2=[0.0, 0.7j])


def parallel():
    return make_scenario(g1=[1.0, 1.0j], g2=[0.5j, -0.5])


def r1_grid(s, n=9):
    e = rate_extremes(s, 1)
    return np.linspace(e.r_min, e.r_max, n)


# -- extremes and phi ---------------------------------------------------------

def test_extremes_unit_example():
    e = rate_extremes(unit_link(), 1)
    assert e.r_min == pytest.approx(math.log2(1.25), abs=1e-15)
    assert e.r_max == 1.0
    np.testing.assert_allclose(e.w_min.w, [math.sqrt(2.0), 0.0])
    assert not e.unjammable


def test_extremes_no_budget():
    e = rate_extremes(make_scenario(p_max=0.0), 2)
    assert e.r_min == e.r_max


def test_extremes_unjammable():
    e = rate_extremes(make_scenario(g1=[0.0, 0.0]), 1)
    assert e.unjammable and e.r_min == e.r_max
    assert np.all(e.w_min.w == 0)


def test_phi_examples():
    s = unit_link()
    e = rate_extremes(s, 1)
    assert phi(s, 1, e.r_max) == 0.0
    assert phi(s, 1, e.r_min) == pytest.approx(3.0, rel=1e-12)
    assert phi(s, 1, 0.5) == pytest.approx(math.sqrt(2.0), rel=1e-12)


def test_phi_clamps_and_rejects():
    s = unit_link()
    e = rate_extremes(s, 1)
    assert phi(s, 1, e.r_max + 0.5 * TOL) == 0.0
    with pytest.raises(InfeasibleTargetError):
        phi(s, 1, e.r_max + 1e-3)
    with pytest.raises(InfeasibleTargetError):
        phi(s, 1, e.r_min - 1e-3)


def test_phi_vectorized():
    s = SUITE[0]
    r = r1_grid(s)
    out = phi(s, 1, r)
    assert out.shape == r.shape
    assert np.all(np.diff(out) <= 0)


def test_sweep_config_validation():
    with pytest.raises(ValueError):
        SweepConfig(n_samples=1)
    with pytest.raises(ValueError):
        SweepConfig(tol_rate=0)


# -- zero-forcing threshold ---------------------------------------------------

def test_zf_threshold_orthogonal_is_r1_min():
    s = orthogonal()
    assert zf_threshold(s) == pytest.approx(rate_extremes(s, 1).r_min, abs=1e-15)


def test_zf_threshold_parallel_is_r1_max():
    s = parallel()
    assert jam_basis(s).collinear
    assert zf_threshold(s) == rate_extremes(s, 1).r_max


@pytest.mark.parametrize('s', SUITE[:6])
def test_upper_flat_above_threshold(s):
    e1, e2 = rate_extremes(s, 1), rate_extremes(s, 2)
    r = np.linspace(zf_threshold(s), e1.r_max, 20)
    np.testing.assert_allclose(f_max(s, r), e2.r_max, rtol=0, atol=1e-12)
    for r1 in r[::5]:
        bf = upper_boundary_beamformer(s, r1)
        assert abs(bf.coeffs[0]) <= 1e-9 * math.sqrt(s.p_max)


# -- upper boundary -----------------------------------------------------------

def test_upper_silent_at_r1_max():
    s = SUITE[0]
    bf = upper_boundary_beamformer(s, rate_extremes(s, 1).r_max)
    assert bf.power == 0.0


def test_upper_orthogonal_keeps_bob2_unjammed():
    s = orthogonal()
    r2_max = rate_extremes(s, 2).r_max
    for r1 in r1_grid(s):
        bf = upper_boundary_beamformer(s, r1)
        assert bf.coeffs[0] == 0
        assert float(suspicious_rate_w(s, bf.w, 2)) == pytest.approx(r2_max, abs=1e-12)


def _check_constraints(s, bf, r1):
    target = phi(s, 1, r1)
    got = abs(np.vdot(s.g1, bf.w)) ** 2
    assert got == pytest.approx(target, rel=1e-8, abs=1e-8 * s.p_max * np.vdot(s.g1, s.g1).real * 1e-6)
    assert bf.power <= s.p_max * (1 + 1e-9)


@pytest.mark.parametrize('s', SUITE)
def test_upper_beamformer_postconditions(s):
    for r1 in r1_grid(s, 17):
        bf = upper_boundary_beamformer(s, r1)
        _check_constraints(s, bf, r1)
        assert float(suspicious_rate_w(s, bf.w, 2)) == pytest.approx(
            float(f_max(s, r1)), abs=TOL)
        assert float(suspicious_rate_w(s, bf.w, 1)) == pytest.approx(r1, abs=1e-9)
        assert suspicious_rate(s, bf.covariance(), 2) == pytest.approx(
            float(f_max(s, r1)), abs=TOL)
        if bf.case == 'full-power':
            assert bf.power == pytest.approx(s.p_max, rel=1e-9)


@pytest.mark.parametrize('s', SUITE)
def test_kappa_is_smaller_root(s):
    b = jam_basis(s)
    b1, b2 = abs(b.g1_on_g2), abs(b.g1_on_g2perp)
    a0, P = b1 ** 2 + b2 ** 2, s.p_max
    for r1 in r1_grid(s, 17):
        ph = float(phi(s, 1, r1))
        if ph <= P * b2 ** 2:
            continue
        k = float(jammer._upper_kappa(s, b, ph))
        resid = a0 * k ** 2 - 2 * b1 * math.sqrt(ph) * k + ph - b2 ** 2 * P
        assert abs(resid) <= 1e-8 * a0 * P
        assert k >= 0
        # the other root from Vieta
        other = (ph - b2 ** 2 * P) / a0 / k if k > 0 else math.inf
        assert k <= other * (1 + 1e-12)


# -- lower boundary -----------------------------------------------------------

@pytest.mark.parametrize('s', SUITE)
def test_lower_beamformer_postconditions(s):
    b = jam_basis(s)
    for r1 in r1_grid(s, 17):
        bf = lower_boundary_beamformer(s, r1)
        _check_constraints(s, bf, r1)
        assert bf.power == pytest.approx(s.p_max, rel=1e-9)
        assert float(suspicious_rate_w(s, bf.w, 2)) == pytest.approx(
            float(f_min(s, r1)), abs=TOL)
        mu, nu = bf.coeffs
        lhs = abs(mu * b.g2_on_g1 + nu * b.g2_on_g1perp)
        rhs = abs(mu) * abs(b.g2_on_g1) + abs(nu) * abs(b.g2_on_g1perp)
        assert lhs == pytest.approx(rhs, rel=1e-10)


def test_lower_at_r1_min_is_mrt():
    s = SUITE[1]
    e = rate_extremes(s, 1)
    bf = lower_boundary_beamformer(s, e.r_min)
    assert abs(bf.coeffs[1]) <= 1e-6 * math.sqrt(s.p_max)
    np.testing.assert_allclose(abs(np.vdot(e.w_min.w, bf.w)), s.p_max, rtol=1e-9)


def test_lower_orthogonal_at_r1_max():
    s = orthogonal()
    bf = lower_boundary_beamformer(s, rate_extremes(s, 1).r_max)
    g2_hat = np.asarray(s.g2) / np.linalg.norm(s.g2)
    assert abs(np.vdot(g2_hat, bf.w)) == pytest.approx(math.sqrt(s.p_max), rel=1e-12)
    assert float(suspicious_rate_w(s, bf.w, 2)) == pytest.approx(
        rate_extremes(s, 2).r_min, abs=1e-12)


def test_collinear_boundaries_coincide():
    s = parallel()
    r = r1_grid(s)
    np.testing.assert_allclose(f_max(s, r), f_min(s, r), rtol=0, atol=1e-14)
    for r1 in r:
        _check_constraints(s, upper_boundary_beamformer(s, r1), r1)


def test_single_antenna():
    s = make_scenario(g1=[0.8], g2=[0.5j], hee=[[0.0], [0.0]])
    r = r1_grid(s)
    np.testing.assert_allclose(f_max(s, r), f_min(s, r), atol=1e-14)


def test_silent_link1_lower_boundary_is_full_mrt_on_bob2():
    s = make_scenario(p1=0.0)
    assert float(f_min(s, 0.0)) == pytest.approx(rate_extremes(s, 2).r_min, abs=1e-14)
    bf = lower_boundary_beamformer(s, 0.0)
    assert bf.power == pytest.approx(s.p_max)


# -- monotonicity ---------------------------------------------------------------

@pytest.mark.parametrize('s', SUITE)
def test_fmax_nondecreasing_then_flat(s):
    e1, e2 = rate_extremes(s, 1), rate_extremes(s, 2)
    r = np.linspace(e1.r_min, e1.r_max, 128)
    v = f_max(s, r)
    assert np.all(np.diff(v) >= -1e-9)
    zf = zf_threshold(s)
    assert np.all(np.abs(v[r >= zf] - e2.r_max) <= 1e-9)


@pytest.mark.parametrize('s', SUITE)
def test_fmin_unimodal_with_turning_point(s):
    e1 = rate_extremes(s, 1)
    r = np.linspace(e1.r_min, e1.r_max, 2001)
    v = f_min(s, r)
    d = np.diff(v)
    k = int(np.argmin(v))
    assert np.all(d[:k] <= 1e-9) and np.all(d[k:] >= -1e-9)
    tp = mrt_turning_point(s)
    step = r[1] - r[0]
    assert abs(r[k] - min(max(tp, e1.r_min), e1.r_max)) <= 1.5 * step
    # at the turning point the lower-boundary beamformer is MRT towards Bob 2
    bf = lower_boundary_beamformer(s, tp)
    g2_hat = np.asarray(s.g2) / np.linalg.norm(s.g2)
    assert abs(np.vdot(g2_hat, bf.w)) ** 2 == pytest.approx(s.p_max, rel=1e-8)


# -- interior solver ------------------------------------------------------------

def test_min_power_origin_target_is_silent():
    s = SUITE[2]
    t = (rate_extremes(s, 1).r_max, rate_extremes(s, 2).r_max)
    assert min_power_beamformer(s, t).power == 0.0


@pytest.mark.parametrize('s', SUITE[:6])
def test_min_power_on_lower_boundary_uses_budget(s):
    for r1 in r1_grid(s, 7):
        bf = min_power_beamformer(s, (r1, float(f_min(s, r1))))
        assert bf.power == pytest.approx(s.p_max, rel=1e-6)


@pytest.mark.parametrize('s', SUITE)
def test_min_power_hits_targets(s):
    rng = np.random.default_rng(0)
    flipped = 0
    for _ in range(20):
        e = rate_extremes(s, 1)
        r1 = rng.uniform(e.r_min, e.r_max)
        r2 = rng.uniform(float(f_min(s, r1)), float(f_max(s, r1)))
        bf = min_power_beamformer(s, (r1, r2))
        assert float(suspicious_rate_w(s, bf.w, 1)) == pytest.approx(r1, abs=1e-9)
        assert float(suspicious_rate_w(s, bf.w, 2)) == pytest.approx(r2, abs=1e-9)
        assert bf.power <= s.p_max * (1 + 1e-9)
        b = jam_basis(s)
        eps1, eps2 = bf.coeffs
        # opposite phase to the eps1 contribution at Bob 2
        flipped += np.real(np.conj(eps1 * b.g2_on_g1) * eps2 * b.g2_on_g1perp) < 0
    assert flipped < 20


def test_min_power_opposite_phase_branch_occurs():
    hits = 0
    for s in SUITE:
        e = rate_extremes(s, 1)
        r1 = 0.5 * (e.r_min + e.r_max)
        bf = min_power_beamformer(s, (r1, float(f_max(s, r1))))
        b = jam_basis(s)
        eps1, eps2 = bf.coeffs
        hits += np.real(np.conj(eps1 * b.g2_on_g1) * eps2 * b.g2_on_g1perp) < 0
    assert hits > 0


def test_min_power_names_violated_boundary():
    s = SUITE[3]
    e = rate_extremes(s, 1)
    r1 = 0.5 * (e.r_min + e.r_max)
    with pytest.raises(InfeasibleTargetError, match='upper'):
        min_power_beamformer(s, (r1, float(f_max(s, r1)) + 0.01))
    with pytest.raises(InfeasibleTargetError, match='lower'):
        min_power_beamformer(s, (r1, float(f_min(s, r1)) - 0.01))
    with pytest.raises(InfeasibleTargetError):
        min_power_beamformer(s, (e.r_max + 0.01, 0.1))


# -- null-space jamming ---------------------------------------------------------

def test_null_space_zero_loopback_is_identity():
    s = make_scenario()
    reduced, v = null_space_jammer_transform(s)
    np.testing.assert_allclose(v, np.eye(2))
    assert reduced == s


def test_null_space_unavailable():
    s = generate(params=ScenarioParams(nt=2, nr=2), rng_seed=0)
    with pytest.raises(NullSpaceUnavailableError):
        null_space_jammer_transform(s)


@pytest.mark.parametrize('seed', range(5))
def test_null_space_lift_consistency(seed):
    s = generate(params=ScenarioParams(nt=5, nr=2), rng_seed=seed)
    reduced, v = null_space_jammer_transform(s)
    assert reduced.nt == 3
    fro = np.linalg.norm(s.hee)
    for r1 in r1_grid(reduced, 5):
        for make in (upper_boundary_beamformer, lower_boundary_beamformer):
            small = make(reduced, r1)
            big = lift(v, small)
            assert np.linalg.norm(s.hee @ big.w) <= 1e-9 * fro * max(np.linalg.norm(big.w), 1e-300)
            for link in (1, 2):
                assert float(suspicious_rate_w(s, big.w, link)) == pytest.approx(
                    float(suspicious_rate_w(reduced, small.w, link)), abs=1e-12)
            assert big.power == pytest.approx(small.power, rel=1e-12, abs=1e-300)
