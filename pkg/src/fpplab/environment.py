"""Edge-weight environments and the annulus shift field."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator

import numpy as np

from fpplab.distributions import WeightDistribution
from fpplab.lattice import (
    ORIGIN,
    Axis,
    BoxSpec,
    EdgeId,
    Vertex,
    annulus_edge_count,
    annulus_of_edge,
    edges_of_box,
)
from fpplab.streams import edge_uniforms


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.ascontiguousarray(a, dtype=np.float64)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class Environment:
    """Immutable edge-weight configuration on a box.

    ``horizontal`` and ``vertical`` follow the layout documented in
    :mod:`fpplab.lattice`. ``seed`` and ``dist`` record provenance.
    """

    region: BoxSpec
    horizontal: np.ndarray
    vertical: np.ndarray
    seed: int
    dist: WeightDistribution

    def __post_init__(self) -> None:
        s = self.region.side
        if self.horizontal.shape != (s - 1, s) or self.vertical.shape != (s, s - 1):
            raise ValueError("weight arrays do not match the region")
        object.__setattr__(self, "horizontal", _frozen(self.horizontal))
        object.__setattr__(self, "vertical", _frozen(self.vertical))

    def _array(self, axis: Axis) -> np.ndarray:
        return self.horizontal if axis is Axis.HORIZONTAL else self.vertical

    def weight(self, e: EdgeId) -> float:
        i, j = self.region.index_of(e.base)
        a = self._array(e.axis)
        if not (0 <= i < a.shape[0] and 0 <= j < a.shape[1]):
            raise KeyError(f"{e} is not an edge of {self.region}")
        return float(a[i, j])

    def __getitem__(self, e: EdgeId) -> float:
        return self.weight(e)

    def __len__(self) -> int:
        return self.region.edge_count()

    def items(self) -> Iterator[tuple[EdgeId, float]]:
        for e in edges_of_box(self.region):
            yield e, self.weight(e)

    def weights(self) -> dict[EdgeId, float]:
        return dict(self.items())

    def replace(self, horizontal: np.ndarray, vertical: np.ndarray) -> Environment:
        return Environment(self.region, horizontal, vertical, self.seed, self.dist)

    def path_weights(self, coords: np.ndarray) -> np.ndarray:
        """Weights of the edges traversed by a vertex sequence ``(L, 2)``."""
        coords = np.asarray(coords, dtype=np.int64)
        if len(coords) < 2:
            return np.zeros(0)
        a, b = coords[:-1], coords[1:]
        lo = np.minimum(a, b)
        horiz = a[:, 1] == b[:, 1]
        i = lo[:, 0] - self.region.x0
        j = lo[:, 1] - self.region.y0
        out = np.empty(len(lo))
        out[horiz] = self.horizontal[i[horiz], j[horiz]]
        out[~horiz] = self.vertical[i[~horiz], j[~horiz]]
        return out

    def same_weights(self, other: Environment) -> bool:
        return (
            self.region == other.region
            and np.array_equal(self.horizontal, other.horizontal)
            and np.array_equal(self.vertical, other.vertical)
        )


def sample_environment(region: BoxSpec, dist: WeightDistribution, seed: int) -> Environment:
    """I.i.d. weights by inverse transform of per-edge counter-based uniforms."""
    if region.radius < 1:
        raise ValueError("an environment region needs radius >= 1")
    arrays = []
    for axis in (Axis.HORIZONTAL, Axis.VERTICAL):
        x, y = region.edge_coordinates(axis)
        arrays.append(dist.sample(edge_uniforms(seed, x, y, int(axis))))
    return Environment(region, arrays[0], arrays[1], seed, dist)


def tau_value(k, kappa: float, inner_radius: int):
    """k^-1 log(k)^(-1/2-kappa) on annuli 2..inner_radius, zero elsewhere."""
    k = np.asarray(k)
    kf = np.maximum(k, 2).astype(float)
    vals = 1.0 / (kf * np.log(kf) ** (0.5 + kappa))
    out = np.where((k >= 2) & (k <= inner_radius), vals, 0.0)
    return out if out.ndim else float(out)


@dataclass(frozen=True)
class TauField:
    """Per-edge shift amplitudes, constant on each annulus around ``center``.

    ``amplitude`` multiplies every value; it is 1 for fields built by
    :func:`build_tau_field` and 0 for the null control field.
    """

    inner_radius: int
    kappa: float
    center: Vertex = ORIGIN
    amplitude: float = 1.0

    @classmethod
    def zero(cls, inner_radius: int = 2, kappa: float = 0.1, center: Vertex = ORIGIN) -> TauField:
        return cls(inner_radius, kappa, center, amplitude=0.0)

    @property
    def box(self) -> BoxSpec:
        return BoxSpec(self.inner_radius, self.center)

    @property
    def is_zero(self) -> bool:
        return self.amplitude == 0.0

    def value_at_annulus(self, k):
        return self.amplitude * tau_value(k, self.kappa, self.inner_radius)

    def value(self, e: EdgeId) -> float:
        return float(self.value_at_annulus(annulus_of_edge(e, self.center)))

    def values(self) -> dict[EdgeId, float]:
        return {e: self.value(e) for e in edges_of_box(self.box)}

    def arrays(self, region: BoxSpec) -> tuple[np.ndarray, np.ndarray]:
        """Field values laid out on ``region``'s horizontal and vertical arrays."""
        return tuple(
            np.asarray(self.value_at_annulus(region.annulus_indices(axis, self.center)), dtype=float)
            for axis in (Axis.HORIZONTAL, Axis.VERTICAL)
        )


def build_tau_field(m: int, kappa: float, center: Vertex = ORIGIN) -> TauField:
    if m < 2:
        raise ValueError(f"inner radius must be at least 2, got {m}")
    if not 0.0 < kappa < 0.5:
        raise ValueError(f"kappa must lie in (0, 1/2), got {kappa}")
    return TauField(int(m), float(kappa), center)


def tau_norm_sq(field: TauField) -> float:
    """Exact sum of squared field values, accumulated annulus by annulus."""
    if field.is_zero:
        return 0.0
    k = np.arange(2, field.inner_radius + 1)
    counts = np.array([annulus_edge_count(int(j)) for j in k])
    terms = counts * np.asarray(field.value_at_annulus(k)) ** 2
    return float(math.fsum(terms))
