"""Gaussian quantile coupling, good sets and the measure-distortion certificate.

The increasing bijection of the support used here is

    g_sigma(w) = Q(Phi(Phi^-1(F(w)) + c * sigma)),

i.e. a shift by ``c * sigma`` in Gaussian coordinates. For ``c = 1`` a
Cauchy-Schwarz bound on the Gaussian shift gives
``nu^n(T_tau(A)) >= exp(-|tau|^2) nu^n(A)^2`` for every Borel ``A``.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass
from typing import Literal, Sequence

import numpy as np
from scipy import integrate
from scipy.special import ndtr, ndtri

from fpplab.distributions import WeightDistribution
from fpplab.environment import Environment, TauField

Interval = tuple[float, float]

GRID_W_POINTS = 2048
GRID_SIGMA_POINTS = 64
DELTA_GRID_POINTS = 64
CERTIFICATE_SLACK = 1e-8


class EmptyGoodSetError(ValueError):
    pass


class QuadratureError(RuntimeError):
    pass


@dataclass(frozen=True)
class WeightTransform:
    dist: WeightDistribution
    c: float = 1.0

    def __post_init__(self) -> None:
        if not self.c > 0:
            raise ValueError(f"coupling constant must be positive, got {self.c}")

    def to_gauss(self, w) -> np.ndarray:
        """Phi^-1(F(w)), computed from the survival side in the upper half."""
        w = np.asarray(w, dtype=float)
        u = self.dist.cdf(w)
        s = self.dist.sf(w)
        with np.errstate(divide="ignore"):
            return np.where(u <= 0.5, ndtri(u), -ndtri(s))

    def from_gauss(self, z) -> np.ndarray:
        z = np.asarray(z, dtype=float)
        lower = self.dist.ppf(ndtr(np.minimum(z, 0.0)))
        upper = self.dist.isf(ndtr(-np.maximum(z, 0.0)))
        return np.where(z <= 0.0, lower, upper)

    def forward(self, sigma, w) -> np.ndarray:
        return self.from_gauss(self.to_gauss(w) + self.c * np.asarray(sigma, dtype=float))

    def inverse(self, sigma, w) -> np.ndarray:
        return self.from_gauss(self.to_gauss(w) - self.c * np.asarray(sigma, dtype=float))

    def initial_slope(self, w) -> np.ndarray:
        """d/dsigma g_sigma(w) at sigma = 0, i.e. c * phi(z) / f(w)."""
        w = np.asarray(w, dtype=float)
        z = self.to_gauss(w)
        phi = np.exp(-0.5 * z * z) / math.sqrt(2.0 * math.pi)
        f = self.dist.pdf(w)
        with np.errstate(divide="ignore", invalid="ignore"):
            out = self.c * phi / f
        return np.where(f > 0, out, np.inf)

    def shift_ratio_min(self, w, sigmas) -> np.ndarray:
        """min over ``sigmas`` and sigma -> 0 of (g_sigma(w) - w) / sigma."""
        w = np.asarray(w, dtype=float)
        sigmas = np.asarray(sigmas, dtype=float)
        shifted = self.forward(sigmas[None, :], w[:, None])
        ratios = (shifted - w[:, None]) / sigmas[None, :]
        return np.minimum(ratios.min(axis=1), self.initial_slope(w))


def _check_support(dist: WeightDistribution, w) -> None:
    if not np.all(dist.in_support(w)):
        raise ValueError("weight outside the support of the distribution")


def g_sigma(t: WeightTransform, sigma: float, w):
    if not 0.0 <= sigma <= 1.0:
        raise ValueError(f"sigma must lie in [0, 1], got {sigma}")
    _check_support(t.dist, w)
    if sigma == 0.0:
        return w
    out = t.forward(sigma, w)
    return out if np.ndim(out) else float(out)


def g_sigma_inverse(t: WeightTransform, sigma: float, w):
    if not 0.0 <= sigma <= 1.0:
        raise ValueError(f"sigma must lie in [0, 1], got {sigma}")
    _check_support(t.dist, w)
    if sigma == 0.0:
        return w
    out = t.inverse(sigma, w)
    return out if np.ndim(out) else float(out)


def nu_interval(dist: WeightDistribution, a: float, b: float) -> float:
    """nu([a, b]) by adaptive quadrature of the density."""
    lo, hi = dist.support
    a, b = max(a, lo), min(b, hi)
    if not b > a:
        return 0.0
    pts = [p for p in dist.breakpoints if a < p < b]
    if math.isinf(b) and pts:
        # quad rejects break points on infinite ranges; split there instead
        edges = [a, *pts, b]
        return sum(nu_interval(dist, x, y) for x, y in zip(edges[:-1], edges[1:]))
    res = integrate.quad(
        lambda x: float(dist.pdf(x)),
        a,
        b,
        points=pts or None,
        epsabs=1e-13,
        epsrel=1e-12,
        limit=200,
        full_output=1,
    )
    if len(res) > 3:
        raise QuadratureError(f"quadrature on [{a}, {b}] did not converge: {res[3]}")
    value, abserr = res[0], res[1]
    if abserr > 1e-9:
        raise QuadratureError(f"quadrature error {abserr:.2e} on [{a}, {b}]")
    return value


def _normalize(intervals: Sequence[Interval], dist: WeightDistribution) -> list[Interval]:
    lo, hi = dist.support
    clipped = sorted((max(a, lo), min(b, hi)) for a, b in intervals)
    merged: list[list[float]] = []
    for a, b in clipped:
        if b < a:
            continue
        if merged and a <= merged[-1][1]:
            merged[-1][1] = max(merged[-1][1], b)
        else:
            merged.append([a, b])
    return [(a, b) for a, b in merged]


@dataclass(frozen=True)
class GoodSet:
    """Finite union of disjoint closed weight intervals.

    ``delta`` is the shift the set was certified for, or ``None`` for
    hand-built sets (e.g. quantile bands in the positive-ratio experiments).
    """

    intervals: tuple[Interval, ...]
    delta: float | None = None

    def contains(self, w) -> np.ndarray:
        w = np.asarray(w, dtype=float)
        out = np.zeros(w.shape, dtype=bool)
        for a, b in self.intervals:
            out |= (w >= a) & (w <= b)
        return out

    def measure(self, dist: WeightDistribution) -> float:
        return math.fsum(nu_interval(dist, a, b) for a, b in self.intervals)

    @property
    def is_empty(self) -> bool:
        return not self.intervals

    @classmethod
    def full(cls, dist: WeightDistribution) -> GoodSet:
        return cls((dist.support,))

    @classmethod
    def upper_band(cls, dist: WeightDistribution, mass: float) -> GoodSet:
        """The top ``mass`` of the law, ``[Q(1 - mass), sup]``."""
        if not 0.0 < mass <= 1.0:
            raise ValueError("mass must lie in (0, 1]")
        return cls(((float(dist.ppf(1.0 - mass)), dist.support[1]),))


def _w_grid(dist: WeightDistribution, points: int) -> np.ndarray:
    return np.asarray(dist.ppf((np.arange(points) + 0.5) / points), dtype=float)


def _sigma_grid(points: int) -> np.ndarray:
    return np.arange(1, points + 1, dtype=float) / points


@functools.lru_cache(maxsize=64)
def _ratio_profile(t: WeightTransform, w_points: int, sigma_points: int) -> tuple[np.ndarray, np.ndarray]:
    w = _w_grid(t.dist, w_points)
    r = t.shift_ratio_min(w, _sigma_grid(sigma_points))
    w.setflags(write=False)
    r.setflags(write=False)
    return w, r


def build_good_set(
    t: WeightTransform,
    delta: float,
    w_points: int = GRID_W_POINTS,
    sigma_points: int = GRID_SIGMA_POINTS,
) -> GoodSet:
    """Weights whose shift satisfies g_sigma(w) - w >= delta * sigma.

    The ratio is scanned on a quantile grid of ``w_points`` weights against
    ``sigma_points`` values in (0, 1] plus the sigma -> 0 slope; each passing
    run of grid points loses one cell at both ends.
    """
    if not delta > 0:
        raise ValueError(f"delta must be positive, got {delta}")
    w, ratio = _ratio_profile(t, w_points, sigma_points)
    ok = ratio >= delta
    intervals = []
    i = 0
    while i < len(ok):
        if not ok[i]:
            i += 1
            continue
        j = i
        while j + 1 < len(ok) and ok[j + 1]:
            j += 1
        if j - 1 >= i + 1:
            intervals.append((float(w[i + 1]), float(w[j - 1])))
        i = j + 1
    if not intervals:
        raise EmptyGoodSetError(f"no weight of {t.dist.spec} is shifted by delta={delta}")
    return GoodSet(tuple(intervals), float(delta))


def max_certifiable_delta(t: WeightTransform, w_points: int = GRID_W_POINTS,
                          sigma_points: int = GRID_SIGMA_POINTS) -> float:
    return float(_ratio_profile(t, w_points, sigma_points)[1].max())


def delta_grid(t: WeightTransform, points: int = DELTA_GRID_POINTS) -> np.ndarray:
    return max_certifiable_delta(t) * np.arange(1, points + 1) / points


@functools.lru_cache(maxsize=64)
def default_delta(t: WeightTransform, target: float = 0.5) -> tuple[float, GoodSet]:
    """Largest delta on :func:`delta_grid` whose good set has mass above ``target``."""
    for delta in delta_grid(t)[::-1]:
        try:
            good = build_good_set(t, float(delta))
        except EmptyGoodSetError:
            continue
        if good.measure(t.dist) > target:
            return float(delta), good
    raise EmptyGoodSetError(f"no grid delta gives a good set of mass > {target}")


def apply_transform(
    env: Environment,
    field: TauField,
    t: WeightTransform,
    direction: Literal["forward", "inverse"] = "forward",
) -> Environment:
    """Apply g_{tau_e} (or its inverse) edge by edge; tau_e = 0 edges are copied."""
    if direction not in ("forward", "inverse"):
        raise ValueError(f"unknown direction {direction!r}")
    if field.is_zero:
        return env.replace(env.horizontal, env.vertical)
    if not env.region.contains_box(field.box):
        raise ValueError("the shift field reaches outside the environment region")
    out = []
    for w, tau in zip((env.horizontal, env.vertical), field.arrays(env.region)):
        w = w.copy()
        hit = tau > 0
        _check_support(t.dist, w[hit])
        fn = t.forward if direction == "forward" else t.inverse
        w[hit] = fn(tau[hit], w[hit])
        out.append(w)
    return env.replace(*out)


@dataclass(frozen=True)
class CertificateReport:
    lhs: float
    rhs: float
    passed: bool
    tau_norm_sq: float
    base_measure: float

    @property
    def slack(self) -> float:
        return self.lhs - self.rhs


def measure_inequality_certificate(
    t: WeightTransform,
    tau: Sequence[float],
    A: Sequence[Sequence[Interval]],
) -> CertificateReport:
    """Check nu^n(T_tau(A)) >= exp(-|tau|^2) nu^n(A)^2 for a product of interval unions.

    Each coordinate image is again an interval union because g is increasing;
    both sides are products of one-dimensional quadratures.
    """
    tau = [float(x) for x in tau]
    if len(tau) != len(A):
        raise ValueError("tau and A must have the same dimension")
    if any(not 0.0 <= x <= 1.0 for x in tau):
        raise ValueError("tau entries must lie in [0, 1]")
    lhs = 1.0
    base = 1.0
    for sigma, coord in zip(tau, A):
        parts = _normalize(coord, t.dist)
        mass = math.fsum(nu_interval(t.dist, a, b) for a, b in parts)
        if mass <= 0:
            raise ValueError("every coordinate set needs positive measure")
        base *= mass
        image = [(float(t.forward(sigma, a)), float(t.forward(sigma, b))) for a, b in parts]
        lhs *= math.fsum(nu_interval(t.dist, a, b) for a, b in image)
    norm_sq = math.fsum(x * x for x in tau)
    rhs = math.exp(-norm_sq) * base * base
    return CertificateReport(lhs, rhs, lhs >= rhs - CERTIFICATE_SLACK, norm_sq, base)
