import math

import numpy as np
import pytest
from scipy import stats

from fpplab.distributions import (
    DistributionError,
    ShiftedExponential,
    Triangular,
    Uniform,
    bisect_quantile,
    parse_distribution,
)
from fpplab.lattice import BoxSpec
from fpplab.environment import sample_environment
from oracles import ks_statistic

LAWS = [Uniform(1.0, 1.5), Uniform(0.0, 1.0), ShiftedExponential(1.0, 2.0), Triangular(1.0, 1.2, 1.5),
        Triangular(0.1, 1.0, 1.0), Triangular(0.0, 0.0, 2.0)]


@pytest.mark.parametrize("dist", LAWS, ids=lambda d: d.spec)
def test_quantile_inverts_cdf(dist):
    u = np.linspace(1e-6, 1 - 1e-6, 2001)
    w = dist.ppf(u)
    assert np.all(np.diff(w) > 0)
    assert np.allclose(dist.cdf(w), u, atol=1e-12, rtol=0)
    assert np.allclose(dist.ppf(dist.cdf(w)), w, atol=1e-12, rtol=1e-12)
    assert np.allclose(dist.isf(dist.sf(w)), w, atol=1e-12, rtol=1e-12)
    assert np.allclose(dist.cdf(w) + dist.sf(w), 1.0, atol=1e-15)


@pytest.mark.parametrize("dist", LAWS, ids=lambda d: d.spec)
def test_bisection_agrees_with_closed_form(dist):
    u = np.linspace(0.001, 0.999, 97)
    assert np.allclose(bisect_quantile(dist, u), dist.ppf(u), atol=1e-11, rtol=0)


@pytest.mark.parametrize(
    "dist, reference",
    [
        (Uniform(1.0, 1.5), stats.uniform(1.0, 0.5)),
        (ShiftedExponential(1.0, 2.0), stats.expon(1.0, 0.5)),
        (Triangular(1.0, 1.2, 1.5), stats.triang(0.4, loc=1.0, scale=0.5)),
    ],
    ids=lambda x: getattr(x, "spec", ""),
)
def test_density_and_cdf_match_scipy(dist, reference):
    w = np.linspace(dist.support[0] - 0.1, dist.support[0] + 3.0, 501)
    inside = (w > dist.support[0]) & (w < dist.support[1])
    assert np.allclose(dist.pdf(w)[inside], reference.pdf(w)[inside], rtol=1e-12)
    assert np.allclose(dist.cdf(w), reference.cdf(w), atol=1e-14)


@pytest.mark.parametrize("dist", LAWS[:4], ids=lambda d: d.spec)
def test_sampled_weights_pass_ks(dist):
    env = sample_environment(BoxSpec(112), dist, seed=2024)  # 2*225*224 = 100800 edges
    w = np.concatenate((env.horizontal.ravel(), env.vertical.ravel()))
    assert len(w) >= 100_000
    d = ks_statistic(w, dist.cdf)
    critical = 1.628 / math.sqrt(len(w))  # 1% level, asymptotic
    assert d < critical


@pytest.mark.parametrize(
    "spec, expected",
    [
        ("uniform:1:1.5", Uniform(1.0, 1.5)),
        ("shiftexp:0.5:2", ShiftedExponential(0.5, 2.0)),
        ("tri:1:1.2:2", Triangular(1.0, 1.2, 2.0)),
    ],
)
def test_parse_roundtrip(spec, expected):
    dist = parse_distribution(spec)
    assert dist == expected
    assert parse_distribution(dist.spec) == dist


@pytest.mark.parametrize(
    "spec",
    ["uniform:1:1", "uniform:2:1", "shiftexp:1:0", "shiftexp:1:-2", "tri:1:3:2", "beta:1:2",
     "uniform:1", "uniform:a:b", "uniform:-1:1", "uniform:1:inf"],
)
def test_parse_rejects(spec):
    with pytest.raises(DistributionError):
        parse_distribution(spec)


def test_degenerate_uniform_rejected():
    with pytest.raises(DistributionError):
        Uniform(1.0, 1.0)
