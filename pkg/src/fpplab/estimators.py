"""Monte Carlo engine and the statistical observables of the lab.

Replicate ``r`` at size ``n`` always uses the seed ``derive_seed(master, n, r)``
and environments are keyed by edge coordinates, so every estimator is a pure
function of its configuration regardless of how replicates are distributed
over worker processes.
"""

from __future__ import annotations

import functools
import logging
import math
import time
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from fpplab.distributions import WeightDistribution
from fpplab.environment import sample_environment
from fpplab.geodesic import (
    geodesic_hits_box,
    geodesics_from,
    min_good_count_to_boundary,
    passage_time,
    path_inside_box,
)
from fpplab.lattice import BoxSpec, Vertex, box_radius
from fpplab.streams import derive_seed
from fpplab.transform import GoodSet

log = logging.getLogger(__name__)

SUBADDITIVITY_TOL = 1e-9
# critical probability of planar bond percolation
P_C_2D = 0.5


class CertificateError(AssertionError):
    """A pathwise inequality that must hold exactly was violated."""


class SubcriticalGoodSetWarning(UserWarning):
    pass


@dataclass(frozen=True)
class MonteCarloConfig:
    replicates: int
    master_seed: int
    n_values: tuple[int, ...]
    dist: WeightDistribution
    mask_factor: float = 2.0
    workers: int = 1

    def __post_init__(self) -> None:
        if self.replicates < 1:
            raise ValueError("need at least one replicate")
        if self.master_seed < 0:
            raise ValueError("master seed must be nonnegative")
        if any(n < 0 for n in self.n_values):
            raise ValueError("sizes must be nonnegative")
        if not self.mask_factor >= 1.0:
            raise ValueError("mask factor C must be at least 1")
        object.__setattr__(self, "n_values", tuple(int(n) for n in self.n_values))

    def seed(self, n: int, r: int) -> int:
        return derive_seed(self.master_seed, n, r)

    def mask_radius(self, n: int) -> int:
        return max(box_radius(self.mask_factor * n), n, 1)


@dataclass(frozen=True)
class EstimateRecord:
    observable: str
    n: int
    mean: float
    stderr: float
    ci95: tuple[float, float]
    replicates: int
    master_seed: int


def summarize(observable: str, n: int, samples: Sequence[float], master_seed: int) -> EstimateRecord:
    """Mean, standard error and normal 95% interval of replicate outputs.

    Samples are sorted before the (pairwise) summation so the result does not
    depend on the order in which replicates finished.
    """
    x = np.sort(np.asarray(samples, dtype=float))
    k = len(x)
    if k == 0:
        return EstimateRecord(observable, n, math.nan, math.nan, (math.nan, math.nan), 0, master_seed)
    mean = float(np.sum(x) / k)
    if k > 1:
        dev = np.sort(x - mean)
        stderr = float(math.sqrt(np.sum(dev * dev) / (k - 1)) / math.sqrt(k))
    else:
        stderr = math.nan
    return EstimateRecord(observable, n, mean, stderr, (mean - 1.96 * stderr, mean + 1.96 * stderr),
                          k, master_seed)


def point_record(observable: str, n: int, value: float, replicates: int, master_seed: int) -> EstimateRecord:
    """A statistic without a sampling error (minimum, fitted constant, ...)."""
    return EstimateRecord(observable, n, float(value), math.nan, (math.nan, math.nan), replicates, master_seed)


def _call(fn: Callable, seeds: list[int]) -> list:
    return [fn(s) for s in seeds]


def run_replicates(
    fn: Callable[[int], object],
    cfg: MonteCarloConfig,
    n: int,
    deadline: float | None = None,
    chunk: int = 16,
) -> list:
    """Evaluate ``fn(seed)`` for every replicate of size ``n``, in replicate order.

    ``fn`` must be picklable when ``cfg.workers > 1``. When ``deadline`` (a
    ``time.monotonic`` value) passes, the completed prefix is returned.
    """
    seeds = [cfg.seed(n, r) for r in range(cfg.replicates)]
    batches = [seeds[i : i + chunk] for i in range(0, len(seeds), chunk)]
    out: list = []
    if cfg.workers <= 1:
        for batch in batches:
            if deadline is not None and time.monotonic() > deadline:
                break
            out.extend(_call(fn, batch))
        return out
    with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
        for start in range(0, len(batches), cfg.workers):
            if deadline is not None and time.monotonic() > deadline:
                break
            wave = batches[start : start + cfg.workers]
            for res in pool.map(functools.partial(_call, fn), wave):
                out.extend(res)
    return out


def _axis(k: int) -> Vertex:
    return Vertex(k, 0)


def _gap_sample(dist: WeightDistribution, n: int, radius: int, seed: int) -> float:
    if n == 0:
        return 0.0
    env = sample_environment(BoxSpec(radius), dist, seed)
    (t_left, _), (t_full, _) = geodesics_from(env, _axis(-n), [_axis(0), _axis(n)])
    t_right, _ = passage_time(env, _axis(0), _axis(n))
    return t_left + t_right - t_full


def estimate_three_point_gap(cfg: MonteCarloConfig, deadline: float | None = None) -> list[EstimateRecord]:
    """Mean of G_n = T(-n,0) + T(0,n) - T(-n,n), all passage times inside Lambda(Cn).

    Every sample is checked against pathwise subadditivity.
    """
    records = []
    for n in cfg.n_values:
        fn = functools.partial(_gap_sample, cfg.dist, n, cfg.mask_radius(n))
        gaps = run_replicates(fn, cfg, n, deadline)
        if gaps and min(gaps) < -SUBADDITIVITY_TOL:
            r = int(np.argmin(gaps))
            raise CertificateError(
                f"subadditivity violated at n={n}, replicate {r}: G_n = {gaps[r]!r}"
            )
        records.append(summarize("three_point_gap", n, gaps, cfg.master_seed))
        records.append(point_record("three_point_gap_min", n, min(gaps, default=math.nan),
                                    len(gaps), cfg.master_seed))
    return records


def _time_constant_sample(dist: WeightDistribution, n: int, radius: int, seed: int) -> float:
    env = sample_environment(BoxSpec(radius), dist, seed)
    t, _ = passage_time(env, _axis(0), _axis(n))
    return t / n


def estimate_time_constant(
    cfg: MonteCarloConfig, deadline: float | None = None
) -> tuple[list[EstimateRecord], float]:
    """Per-n means of T(0,n)/n along the first axis, and the smallest of them.

    ``n -> E T(0,n)`` is subadditive, so the finite-n means overestimate the
    time constant; the returned minimum is an upper-biased estimate.
    """
    if any(n < 1 for n in cfg.n_values):
        raise ValueError("time-constant sizes must be positive")
    records = []
    for n in cfg.n_values:
        fn = functools.partial(_time_constant_sample, cfg.dist, n, cfg.mask_radius(n))
        records.append(summarize("time_constant", n, run_replicates(fn, cfg, n, deadline), cfg.master_seed))
    mu_hat = min(r.mean for r in records)
    log.info("time constant estimate %.6f is biased upward at finite n", mu_hat)
    return records, mu_hat


def _midpoint_sample(dist: WeightDistribution, n: int, m: int, radius: int, seed: int) -> tuple[bool, bool]:
    env = sample_environment(BoxSpec(radius), dist, seed)
    _, path = passage_time(env, _axis(-n), _axis(n))
    avoids = True if m == 0 else not geodesic_hits_box(path, BoxSpec(m))
    hits_origin = geodesic_hits_box(path, BoxSpec(0))
    return avoids, hits_origin


def midpoint_avoidance_probability(
    cfg: MonteCarloConfig, m: int, deadline: float | None = None
) -> list[EstimateRecord]:
    """Frequency with which gamma(-n, n) misses Lambda(m), and hits the origin.

    ``m = 0`` stands for the empty box (avoidance 1 by convention); the origin
    itself is tracked by the ``origin_hit`` observable.
    """
    if m < 0:
        raise ValueError("inner radius must be nonnegative")
    records = []
    for n in cfg.n_values:
        if n < 1:
            raise ValueError("midpoint sizes must be positive")
        fn = functools.partial(_midpoint_sample, cfg.dist, n, m, cfg.mask_radius(n))
        res = run_replicates(fn, cfg, n, deadline)
        records.append(summarize("midpoint_avoidance", n, [float(a) for a, _ in res], cfg.master_seed))
        records.append(summarize("origin_hit", n, [float(h) for _, h in res], cfg.master_seed))
    return records


def _confinement_sample(dist: WeightDistribution, n: int, inner: int, outer: int, seed: int) -> bool:
    env = sample_environment(BoxSpec(outer), dist, seed)
    k = BoxSpec(inner)
    (_, left), (_, full) = geodesics_from(env, _axis(-n), [_axis(0), _axis(n)])
    _, right = passage_time(env, _axis(0), _axis(n))
    return all(path_inside_box(p, k) for p in (left, full, right))


def confinement_probability(
    cfg: MonteCarloConfig, outer_factor: float | None = None, deadline: float | None = None
) -> list[EstimateRecord]:
    """Frequency with which gamma(-n,n), gamma(-n,0), gamma(0,n) stay in Lambda(Cn).

    Geodesics are computed in the larger box Lambda(C'n), ``C' = outer_factor``
    (default ``C + 1``); an escape beyond Lambda(C'n) itself is not observable.
    """
    outer_factor = cfg.mask_factor + 1.0 if outer_factor is None else outer_factor
    if not outer_factor > cfg.mask_factor:
        raise ValueError("the detection box must be strictly larger than Lambda(Cn)")
    records = []
    for n in cfg.n_values:
        if n < 1:
            raise ValueError("confinement sizes must be positive")
        inner = cfg.mask_radius(n)
        outer = max(box_radius(outer_factor * n), inner + 1)
        fn = functools.partial(_confinement_sample, cfg.dist, n, inner, outer)
        res = run_replicates(fn, cfg, n, deadline)
        records.append(summarize("confinement", n, [float(x) for x in res], cfg.master_seed))
    return records


def _good_ratio_sample(dist: WeightDistribution, good: GoodSet, n: int, seed: int) -> float:
    env = sample_environment(BoxSpec(n), dist, seed)
    return min_good_count_to_boundary(env, good, n) / n


def good_ratio_estimate(
    cfg: MonteCarloConfig, good: GoodSet, deadline: float | None = None
) -> list[EstimateRecord]:
    """Fewest good edges from the origin to the boundary of Lambda(n), over n.

    Returns per-n ``good_ratio`` (mean) and ``good_ratio_min`` records plus one
    ``a_hat`` record: the smallest observed ratio at the largest n.
    """
    mass = good.measure(cfg.dist)
    if mass <= 1.0 - P_C_2D:
        warnings.warn(
            f"good set has mass {mass:.3f} <= 1 - p_c = {1 - P_C_2D}; "
            "a positive ratio is not expected",
            SubcriticalGoodSetWarning,
            stacklevel=2,
        )
    records = []
    mins = {}
    for n in cfg.n_values:
        if n < 1:
            raise ValueError("ratio sizes must be positive")
        fn = functools.partial(_good_ratio_sample, cfg.dist, good, n)
        ratios = run_replicates(fn, cfg, n, deadline)
        mins[n] = min(ratios, default=math.nan)
        records.append(summarize("good_ratio", n, ratios, cfg.master_seed))
        records.append(point_record("good_ratio_min", n, mins[n], len(ratios), cfg.master_seed))
    n_max = max(cfg.n_values)
    records.append(point_record("a_hat", n_max, mins[n_max], records[-1].replicates, cfg.master_seed))
    return records
