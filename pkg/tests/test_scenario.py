import json
import math

import numpy as np
import pytest

from jamregion.scenario import (Geometry, ScenarioParams, dbm_to_watts,
                                effective_noise, generate, load_scenario,
                                path_loss, save_scenario, scenario_from_dict,
                                scenario_to_dict, watts_to_dbm)

from conftest import make_scenario


def test_path_loss_reference_distance():
    assert path_loss(1.0, 1e-3, 1.0, 2.5) == pytest.approx(1e-3, rel=1e-15)


def test_path_loss_hundred_meters():
    assert path_loss(100.0, 1e-3, 1.0, 2.5) == pytest.approx(1e-8, rel=1e-12)


def test_path_loss_inverse_square():
    assert path_loss(4.0, 1.0, 1.0, 2.0) == 0.0625


@pytest.mark.parametrize('d', [0.0, -1.0])
def test_path_loss_rejects_nonpositive(d):
    with pytest.raises(ValueError):
        path_loss(d)


@pytest.mark.parametrize('dbm,w', [(0, 1e-3), (10, 1e-2), (-70, 1e-10)])
def test_dbm_to_watts(dbm, w):
    assert dbm_to_watts(dbm) == pytest.approx(w, rel=1e-15)
    assert watts_to_dbm(w) == pytest.approx(dbm, abs=1e-12)


def test_generate_deterministic():
    a = generate(Geometry(), ScenarioParams(), 11)
    b = generate(Geometry(), ScenarioParams(), 11)
    assert a == b
    assert generate(Geometry(), ScenarioParams(), 12) != a


def test_generate_dimensions():
    s = generate(params=ScenarioParams(nt=5, nr=3), rng_seed=0)
    assert s.g1.shape == (5,) and s.g2.shape == (5,)
    assert s.h1m.shape == (3,) and s.hee.shape == (3, 5)


@pytest.mark.parametrize('nt,nr', [(0, 2), (2, 0)])
def test_generate_rejects_antenna_counts(nt, nr):
    with pytest.raises(ValueError):
        generate(params=ScenarioParams(nt=nt, nr=nr))


def test_generate_default_powers():
    s = generate()
    assert s.p1 == pytest.approx(0.01) and s.p2 == pytest.approx(0.01)
    assert s.sigma1_sq == pytest.approx(1e-10)
    assert s.sigma_m_sq == pytest.approx(1e-10)
    assert s.nt == 2 and s.nr == 2


def test_h11_sample_variance():
    # Alice 1 -> Bob 1 is 100 m in the default geometry: variance 1e-8.
    vals = np.array([generate(rng_seed=k).h11 for k in range(10_000)])
    assert np.mean(np.abs(vals) ** 2) == pytest.approx(1e-8, rel=0.05)


def test_distance_clamped_at_reference():
    geo = Geometry(monitor=(0.0, 0.0))
    vals = np.concatenate([generate(geo, ScenarioParams(nr=4), k).h1m
                           for k in range(3000)])
    assert np.mean(np.abs(vals) ** 2) == pytest.approx(1e-3, rel=0.05)


def test_effective_noise_no_cross():
    s = make_scenario(h21=0.0, sigma1_sq=0.7)
    assert effective_noise(s, 1) == 0.7


def test_effective_noise_sum():
    s = make_scenario(p2=2.0, h21=math.sqrt(0.5), sigma1_sq=1.0)
    assert effective_noise(s, 1) == pytest.approx(2.0, rel=1e-15)


def test_effective_noise_recomputed():
    s = generate(rng_seed=5)
    assert effective_noise(s, 1) == s.p2 * abs(s.h21) ** 2 + s.sigma1_sq
    assert effective_noise(s, 2) == s.p1 * abs(s.h12) ** 2 + s.sigma2_sq
    assert effective_noise(s, 2) >= s.sigma2_sq


def _assert_roundtrip(a, b):
    for f in ('h11', 'h12', 'h21', 'h22'):
        assert getattr(a, f) == getattr(b, f)
    for f in ('h1m', 'h2m', 'g1', 'g2', 'hee'):
        np.testing.assert_array_equal(getattr(a, f), getattr(b, f))
    for f in ('p1', 'p2', 'p_max', 'sigma1_sq', 'sigma2_sq', 'sigma_m_sq'):
        assert getattr(b, f) == pytest.approx(getattr(a, f), rel=1e-14, abs=0)
    assert a.rho == b.rho
    assert a.geometry == b.geometry and a.seed == b.seed


@pytest.mark.parametrize('seed', range(4))
def test_json_roundtrip(tmp_path, seed):
    s = generate(params=ScenarioParams(nt=3, rho=1e-6), rng_seed=seed)
    path = tmp_path / 's.json'
    save_scenario(s, path)
    _assert_roundtrip(s, load_scenario(path))


def test_json_roundtrip_arbitrary_watts_and_zero_power():
    s = make_scenario(p1=0.123456789, p2=0.0, p_max=3.3e-7)
    back = scenario_from_dict(json.loads(json.dumps(scenario_to_dict(s))))
    _assert_roundtrip(s, back)
    assert back.p2 == 0.0


def test_json_layout():
    d = scenario_to_dict(generate(rng_seed=1))
    assert d['version'] == 1
    assert set(d['channels']) == {'h11', 'h12', 'h21', 'h22', 'h1m', 'h2m',
                                  'g1', 'g2', 'hee'}
    assert d['powers_dbm']['p1'] == pytest.approx(10.0)
    assert d['noise_dbm']['sigmam'] == pytest.approx(-70.0)
    assert len(d['channels']['hee']) == 2 and len(d['channels']['hee'][0]) == 2


def test_json_rejects_version():
    d = scenario_to_dict(generate())
    d['version'] = 2
    with pytest.raises(ValueError):
        scenario_from_dict(d)


@pytest.mark.parametrize('kw', [dict(rho=1.5), dict(p_max=-1), dict(sigma1_sq=0),
                                dict(p1=-0.1), dict(g2=[1, 2, 3]),
                                dict(h11=float('nan'))])
def test_scenario_invariants(kw):
    with pytest.raises(ValueError):
        make_scenario(**kw)


def test_scenario_arrays_are_read_only():
    s = make_scenario()
    with pytest.raises(ValueError):
        s.g1[0] = 0
