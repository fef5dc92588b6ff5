import numpy as np
import pytest

from jamregion.scenario import Geometry, Scenario, ScenarioParams, generate


def make_scenario(**kw):
    """Small hand-made scenario with unit-scale numbers; override any field."""
    base = dict(
        h11=1.0, h12=0.3, h21=0.2 + 0.1j, h22=0.9j,
        h1m=[1.0, 0.5j], h2m=[0.4, 1.0 - 0.2j],
        g1=[1.0 + 0.5j, 0.3], g2=[0.2, 1.0 - 0.4j],
        hee=np.zeros((2, 2)),
        p1=1.0, p2=1.0, sigma1_sq=1.0, sigma2_sq=1.0, sigma_m_sq=1.0,
        p_max=2.0, rho=0.0)
    base.update(kw)
    if 'hee' not in kw:
        nt, nr = len(np.atleast_1d(base['g1'])), len(np.atleast_1d(base['h1m']))
        base['hee'] = np.zeros((nr, nt))
    return Scenario(**base)


def default_scenarios(n, seed0=0, **params):
    """`n` random scenarios in the default geometry."""
    geo = Geometry(monitor=params.pop('monitor', (100.0, 100.0)))
    prm = ScenarioParams(**params)
    return [generate(geo, prm, seed0 + k) for k in range(n)]


@pytest.fixture
def hand():
    return make_scenario()


@pytest.fixture(scope='session')
def suite20():
    return default_scenarios(20)
