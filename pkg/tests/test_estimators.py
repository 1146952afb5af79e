import math
import time
import warnings

import numpy as np
import pytest

from fpplab.distributions import Uniform
from fpplab.estimators import (
    CertificateError,
    MonteCarloConfig,
    SubcriticalGoodSetWarning,
    confinement_probability,
    estimate_three_point_gap,
    estimate_time_constant,
    good_ratio_estimate,
    midpoint_avoidance_probability,
    run_replicates,
    summarize,
)
from fpplab.transform import GoodSet

FLAT = Uniform(1.0, 1.0 + 1e-9)


def by(records, observable):
    return {r.n: r for r in records if r.observable == observable}


def test_summarize_matches_numpy():
    x = np.random.default_rng(1).normal(size=57)
    rec = summarize("x", 3, x, 9)
    assert rec.mean == pytest.approx(x.mean(), rel=1e-14)
    assert rec.stderr == pytest.approx(x.std(ddof=1) / math.sqrt(57), rel=1e-12)
    assert rec.ci95 == pytest.approx((rec.mean - 1.96 * rec.stderr, rec.mean + 1.96 * rec.stderr))
    assert summarize("x", 3, x[::-1], 9) == rec
    assert math.isnan(summarize("x", 3, [], 9).mean)


def test_config_validation(narrow):
    with pytest.raises(ValueError):
        MonteCarloConfig(0, 0, (8,), narrow)
    with pytest.raises(ValueError):
        MonteCarloConfig(1, 0, (8,), narrow, mask_factor=0.5)
    cfg = MonteCarloConfig(3, 5, (8,), narrow)
    assert cfg.seed(8, 1) == MonteCarloConfig(9, 5, (8, 16), narrow).seed(8, 1)
    assert cfg.mask_radius(8) == 16


def test_gap_zero_at_origin(narrow):
    recs = estimate_three_point_gap(MonteCarloConfig(5, 0, (0,), narrow))
    assert by(recs, "three_point_gap")[0].mean == 0.0


def test_gap_near_deterministic():
    recs = estimate_three_point_gap(MonteCarloConfig(20, 0, (8, 16), FLAT))
    for r in recs:
        assert abs(r.mean) < 1e-6


def test_gap_nonnegative_and_positive_mean(narrow):
    recs = estimate_three_point_gap(MonteCarloConfig(100, 0, (8, 16, 32, 64), narrow))
    for n, r in by(recs, "three_point_gap_min").items():
        assert r.mean >= -1e-9
    means = by(recs, "three_point_gap")
    # at n = 8 almost every geodesic is the straight segment, so the gap is rounding noise
    assert abs(means[8].mean) < 1e-9
    for n in (32, 64):
        assert means[n].mean > 2 * means[n].stderr


def test_gap_certificate_raises(monkeypatch, narrow):
    import fpplab.estimators as est

    monkeypatch.setattr(est, "_gap_sample", lambda dist, n, radius, seed: -1.0)
    with pytest.raises(CertificateError):
        est.estimate_three_point_gap(MonteCarloConfig(2, 0, (4,), narrow))


def test_time_constant_flat():
    recs, mu = estimate_time_constant(MonteCarloConfig(10, 0, (8, 16), FLAT))
    assert abs(mu - 1.0) < 1e-6


def test_time_constant_bounds_and_doubling(narrow):
    recs, mu = estimate_time_constant(MonteCarloConfig(200, 1, (8, 16, 32, 64), narrow))
    assert all(1.0 <= r.mean <= 1.5 for r in recs)
    for a, b in zip(recs, recs[1:]):
        assert b.mean <= a.mean + 2 * a.stderr
    assert mu == min(r.mean for r in recs)


def test_midpoint_conventions(narrow):
    recs = midpoint_avoidance_probability(MonteCarloConfig(10, 0, (8,), narrow), 0)
    assert by(recs, "midpoint_avoidance")[8].mean == 1.0
    recs = midpoint_avoidance_probability(MonteCarloConfig(10, 0, (8,), narrow), 8)
    assert by(recs, "midpoint_avoidance")[8].mean == 0.0
    with pytest.raises(ValueError):
        midpoint_avoidance_probability(MonteCarloConfig(10, 0, (8,), narrow), -1)


def test_midpoint_avoidance_grows(narrow):
    recs = midpoint_avoidance_probability(MonteCarloConfig(150, 0, (16, 32, 64, 128), narrow), 2)
    avoid = [r for r in recs if r.observable == "midpoint_avoidance"]
    for a, b in zip(avoid, avoid[1:]):
        assert b.mean >= a.mean - 2 * math.hypot(a.stderr, b.stderr)
    hits = [r for r in recs if r.observable == "origin_hit"]
    assert hits[-1].mean < hits[0].mean


def test_confinement(narrow, wide):
    recs = confinement_probability(MonteCarloConfig(50, 0, (16, 32), narrow))
    assert all(r.mean == 1.0 for r in recs)
    loose = confinement_probability(MonteCarloConfig(200, 0, (16,), wide, mask_factor=2.0), outer_factor=3.0)
    tight = confinement_probability(MonteCarloConfig(200, 0, (16,), wide, mask_factor=1.01), outer_factor=3.0)
    assert tight[0].mean < loose[0].mean
    with pytest.raises(ValueError):
        confinement_probability(MonteCarloConfig(5, 0, (16,), narrow, mask_factor=2.0), outer_factor=2.0)


def test_good_ratio_full_support(narrow):
    recs = good_ratio_estimate(MonteCarloConfig(5, 0, (8, 16), narrow), GoodSet.full(narrow))
    assert all(r.mean == 1.0 for r in recs)


def test_good_ratio_supercritical(narrow):
    recs = good_ratio_estimate(MonteCarloConfig(60, 0, (16, 32, 64, 128), narrow), GoodSet.upper_band(narrow, 0.95))
    mins = by(recs, "good_ratio_min")
    assert all(r.mean >= 0.5 for r in mins.values())
    assert by(recs, "a_hat")[128].mean == mins[128].mean


def test_good_ratio_subcritical_warns(narrow):
    with pytest.warns(SubcriticalGoodSetWarning):
        recs = good_ratio_estimate(MonteCarloConfig(30, 0, (16, 64), narrow), GoodSet.upper_band(narrow, 0.25))
    means = by(recs, "good_ratio")
    assert means[64].mean < 0.05


def test_no_warning_above_threshold(narrow):
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        good_ratio_estimate(MonteCarloConfig(2, 0, (8,), narrow), GoodSet.upper_band(narrow, 0.75))


def test_determinism_across_workers(wide):
    serial = MonteCarloConfig(12, 3, (8, 16), wide)
    parallel = MonteCarloConfig(12, 3, (8, 16), wide, workers=2)
    assert estimate_three_point_gap(serial) == estimate_three_point_gap(parallel)
    good = GoodSet.upper_band(wide, 0.75)
    assert good_ratio_estimate(serial, good) == good_ratio_estimate(parallel, good)


def test_deadline_returns_prefix(narrow):
    cfg = MonteCarloConfig(50, 0, (8,), narrow)
    assert run_replicates(float, cfg, 8, deadline=time.monotonic() - 1.0) == []
    assert len(run_replicates(float, cfg, 8)) == 50
