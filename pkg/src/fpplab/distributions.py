"""Absolutely continuous edge-weight laws.

Each law exposes vectorised ``pdf``, ``cdf``, ``sf``, ``ppf`` and ``isf``. The
tail pair ``sf``/``isf`` is kept separate from ``cdf``/``ppf`` so that the
weight transform stays accurate near the top of the support.
"""

from __future__ import annotations

import math
from abc import ABC, abstractmethod
from dataclasses import dataclass

import numpy as np

QUANTILE_TOL = 1e-12


class DistributionError(ValueError):
    pass


class WeightDistribution(ABC):
    """Base class; subclasses are frozen dataclasses."""

    @property
    @abstractmethod
    def support(self) -> tuple[float, float]: ...

    @abstractmethod
    def pdf(self, w): ...

    @abstractmethod
    def cdf(self, w): ...

    @property
    @abstractmethod
    def spec(self) -> str:
        """The ``name:param:...`` string that parses back to this law."""

    def sf(self, w):
        return 1.0 - self.cdf(w)

    def ppf(self, u):
        return bisect_quantile(self, u)

    def isf(self, s):
        return self.ppf(1.0 - np.asarray(s, dtype=float))

    def in_support(self, w) -> np.ndarray:
        lo, hi = self.support
        w = np.asarray(w, dtype=float)
        return (w >= lo) & (w <= hi)

    @property
    def breakpoints(self) -> tuple[float, ...]:
        """Interior points where the density is not smooth (for quadrature)."""
        return ()

    def sample(self, u):
        """Inverse-transform sampling from uniforms in (0, 1)."""
        return self.ppf(u)


def bisect_quantile(dist: WeightDistribution, u, tol: float = QUANTILE_TOL) -> np.ndarray:
    """Monotone bisection for ``F(w) = u`` on the support, to absolute ``tol`` in ``w``."""
    u = np.asarray(u, dtype=float)
    lo, hi = dist.support
    if math.isinf(hi):
        hi = lo + 1.0
        while float(dist.cdf(hi)) < float(np.max(u, initial=0.0)) and hi < 1e300:
            hi = lo + 2.0 * (hi - lo)
    a = np.full(u.shape, lo, dtype=float)
    b = np.full(u.shape, hi, dtype=float)
    while np.any(b - a > tol * max(1.0, abs(hi))):
        mid = 0.5 * (a + b)
        below = dist.cdf(mid) < u
        a = np.where(below, mid, a)
        b = np.where(below, b, mid)
        if np.all(mid == a) | np.all(mid == b):
            break
    out = 0.5 * (a + b)
    out = np.where(u <= 0.0, dist.support[0], out)
    out = np.where(u >= 1.0, dist.support[1], out)
    return out if out.ndim else float(out)


@dataclass(frozen=True)
class Uniform(WeightDistribution):
    lo: float
    hi: float

    def __post_init__(self) -> None:
        if not self.hi > self.lo:
            raise DistributionError(f"uniform needs hi > lo, got lo={self.lo}, hi={self.hi}")
        if self.lo < 0:
            raise DistributionError("edge weights must be nonnegative")

    @property
    def support(self) -> tuple[float, float]:
        return self.lo, self.hi

    @property
    def spec(self) -> str:
        return f"uniform:{self.lo!r}:{self.hi!r}"

    @property
    def width(self) -> float:
        return self.hi - self.lo

    def pdf(self, w):
        w = np.asarray(w, dtype=float)
        return np.where((w >= self.lo) & (w <= self.hi), 1.0 / self.width, 0.0)

    def cdf(self, w):
        return np.clip((np.asarray(w, dtype=float) - self.lo) / self.width, 0.0, 1.0)

    def sf(self, w):
        return np.clip((self.hi - np.asarray(w, dtype=float)) / self.width, 0.0, 1.0)

    def ppf(self, u):
        return self.lo + np.asarray(u, dtype=float) * self.width

    def isf(self, s):
        return self.hi - np.asarray(s, dtype=float) * self.width


@dataclass(frozen=True)
class ShiftedExponential(WeightDistribution):
    shift: float
    rate: float

    def __post_init__(self) -> None:
        if not self.rate > 0:
            raise DistributionError(f"exponential rate must be positive, got {self.rate}")
        if self.shift < 0:
            raise DistributionError("edge weights must be nonnegative")

    @property
    def support(self) -> tuple[float, float]:
        return self.shift, math.inf

    @property
    def spec(self) -> str:
        return f"shiftexp:{self.shift!r}:{self.rate!r}"

    def pdf(self, w):
        t = np.asarray(w, dtype=float) - self.shift
        return np.where(t >= 0, self.rate * np.exp(-self.rate * np.maximum(t, 0.0)), 0.0)

    def cdf(self, w):
        t = np.maximum(np.asarray(w, dtype=float) - self.shift, 0.0)
        return -np.expm1(-self.rate * t)

    def sf(self, w):
        t = np.maximum(np.asarray(w, dtype=float) - self.shift, 0.0)
        return np.exp(-self.rate * t)

    def ppf(self, u):
        return self.shift - np.log1p(-np.asarray(u, dtype=float)) / self.rate

    def isf(self, s):
        with np.errstate(divide="ignore"):
            return self.shift - np.log(np.asarray(s, dtype=float)) / self.rate


@dataclass(frozen=True)
class Triangular(WeightDistribution):
    lo: float
    mode: float
    hi: float

    def __post_init__(self) -> None:
        if not self.hi > self.lo:
            raise DistributionError(f"triangular needs hi > lo, got lo={self.lo}, hi={self.hi}")
        if not self.lo <= self.mode <= self.hi:
            raise DistributionError("triangular mode must lie in [lo, hi]")
        if self.lo < 0:
            raise DistributionError("edge weights must be nonnegative")

    @property
    def support(self) -> tuple[float, float]:
        return self.lo, self.hi

    @property
    def spec(self) -> str:
        return f"tri:{self.lo!r}:{self.mode!r}:{self.hi!r}"

    @property
    def breakpoints(self) -> tuple[float, ...]:
        return (self.mode,) if self.lo < self.mode < self.hi else ()

    @property
    def _split(self) -> float:
        return (self.mode - self.lo) / (self.hi - self.lo)

    def pdf(self, w):
        w = np.asarray(w, dtype=float)
        width = self.hi - self.lo
        with np.errstate(divide="ignore", invalid="ignore"):
            left = 2.0 * (w - self.lo) / (width * (self.mode - self.lo))
            right = 2.0 * (self.hi - w) / (width * (self.hi - self.mode))
        out = np.where(w < self.mode, left, right)
        return np.where((w >= self.lo) & (w <= self.hi), out, 0.0)

    def cdf(self, w):
        w = np.clip(np.asarray(w, dtype=float), self.lo, self.hi)
        return np.where(w <= self.mode, self._lower_mass(w), 1.0 - self._upper_mass(w))

    def sf(self, w):
        w = np.clip(np.asarray(w, dtype=float), self.lo, self.hi)
        return np.where(w > self.mode, self._upper_mass(w), 1.0 - self._lower_mass(w))

    def _lower_mass(self, w):
        width = self.hi - self.lo
        with np.errstate(divide="ignore", invalid="ignore"):
            out = (w - self.lo) ** 2 / (width * (self.mode - self.lo))
        return np.nan_to_num(out, nan=0.0, posinf=1.0)

    def _upper_mass(self, w):
        width = self.hi - self.lo
        with np.errstate(divide="ignore", invalid="ignore"):
            out = (self.hi - w) ** 2 / (width * (self.hi - self.mode))
        return np.nan_to_num(out, nan=0.0, posinf=1.0)

    def ppf(self, u):
        u = np.asarray(u, dtype=float)
        width = self.hi - self.lo
        p = self._split
        left = self.lo + np.sqrt(np.maximum(u, 0.0) * width * (self.mode - self.lo))
        right = self.hi - np.sqrt(np.maximum(1.0 - u, 0.0) * width * (self.hi - self.mode))
        return np.where(u <= p, left, right)

    def isf(self, s):
        s = np.asarray(s, dtype=float)
        width = self.hi - self.lo
        right = self.hi - np.sqrt(np.maximum(s, 0.0) * width * (self.hi - self.mode))
        left = self.lo + np.sqrt(np.maximum(1.0 - s, 0.0) * width * (self.mode - self.lo))
        return np.where(s <= 1.0 - self._split, right, left)


_PARSERS = {
    "uniform": (Uniform, 2),
    "shiftexp": (ShiftedExponential, 2),
    "tri": (Triangular, 3),
}


def parse_distribution(spec: str) -> WeightDistribution:
    """Parse ``uniform:lo:hi``, ``shiftexp:shift:rate`` or ``tri:lo:mode:hi``."""
    name, *params = spec.strip().split(":")
    if name not in _PARSERS:
        raise DistributionError(f"unknown distribution {name!r} in {spec!r}")
    cls, arity = _PARSERS[name]
    if len(params) != arity:
        raise DistributionError(f"{name} takes {arity} parameters, got {len(params)} in {spec!r}")
    try:
        values = [float(p) for p in params]
    except ValueError as exc:
        raise DistributionError(f"non-numeric parameter in {spec!r}") from exc
    if not all(math.isfinite(v) for v in values):
        raise DistributionError(f"parameters must be finite in {spec!r}")
    return cls(*values)
