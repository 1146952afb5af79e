"""Passage times, geodesics and path bookkeeping."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from fpplab._search import dijkstra_grid, trace_back
from fpplab.environment import Environment
from fpplab.lattice import BoxSpec, EdgeId, Vertex
from fpplab.transform import GoodSet

SUM_RTOL = 1e-9


class PathError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class PathRecord:
    """A lattice path with the weights of its edges in some environment.

    ``coords`` is an ``(L, 2)`` integer array of vertices; ``edge_weights``
    has ``L - 1`` entries and ``total_time`` is their sum.
    """

    coords: np.ndarray
    edge_weights: np.ndarray
    total_time: float

    def __post_init__(self) -> None:
        coords = np.asarray(self.coords, dtype=np.int64).reshape(-1, 2)
        weights = np.asarray(self.edge_weights, dtype=float)
        if len(coords) == 0:
            raise PathError("a path needs at least one vertex")
        if len(weights) != len(coords) - 1:
            raise PathError("one weight per edge is required")
        steps = np.abs(np.diff(coords, axis=0)).sum(axis=1)
        if np.any(steps != 1):
            raise PathError("consecutive path vertices must be lattice neighbours")
        keys = _edge_keys(coords)
        if len(np.unique(keys)) != len(keys):
            raise PathError("path repeats an edge")
        coords.setflags(write=False)
        weights.setflags(write=False)
        object.__setattr__(self, "coords", coords)
        object.__setattr__(self, "edge_weights", weights)

    @classmethod
    def from_vertices(cls, vertices: Sequence[Vertex], env: Environment) -> PathRecord:
        coords = np.array([(v.x, v.y) for v in vertices], dtype=np.int64).reshape(-1, 2)
        weights = env.path_weights(coords)
        return cls(coords, weights, math.fsum(weights))

    @property
    def vertices(self) -> tuple[Vertex, ...]:
        return tuple(Vertex(int(x), int(y)) for x, y in self.coords)

    @property
    def edges(self) -> tuple[EdgeId, ...]:
        vs = self.vertices
        return tuple(EdgeId.between(a, b) for a, b in zip(vs[:-1], vs[1:]))

    @property
    def start(self) -> Vertex:
        return Vertex(int(self.coords[0, 0]), int(self.coords[0, 1]))

    @property
    def end(self) -> Vertex:
        return Vertex(int(self.coords[-1, 0]), int(self.coords[-1, 1]))

    def __len__(self) -> int:
        return len(self.edge_weights)

    def slice(self, start: int, stop: int) -> PathRecord:
        """Sub-path over vertex indices ``start..stop`` inclusive."""
        w = self.edge_weights[start:stop]
        return PathRecord(self.coords[start : stop + 1], w, math.fsum(w))

    def annulus_indices(self, center: Vertex) -> np.ndarray:
        return np.abs(self.coords - (center.x, center.y)).max(axis=1)


def _edge_keys(coords: np.ndarray) -> np.ndarray:
    if len(coords) < 2:
        return np.zeros(0, dtype=np.int64)
    lo = np.minimum(coords[:-1], coords[1:])
    horiz = (coords[:-1, 1] == coords[1:, 1]).astype(np.int64)
    return ((lo[:, 0] + (1 << 30)) << 32) | ((lo[:, 1] + (1 << 30)) << 1) | horiz


@dataclass(frozen=True)
class RegionMask:
    """Paths must stay inside ``box``."""

    box: BoxSpec


def _window(env: Environment, mask: RegionMask | BoxSpec | None) -> tuple[int, int, int, int]:
    box = env.region if mask is None else getattr(mask, "box", mask)
    if not env.region.contains_box(box):
        raise ValueError(f"mask {box} is not inside the environment region {env.region}")
    i0, j0 = env.region.index_of(Vertex(box.x0, box.y0))
    return i0, i0 + box.side - 1, j0, j0 + box.side - 1


def _flat(env: Environment, v: Vertex, window: tuple[int, int, int, int]) -> int:
    i, j = env.region.index_of(v)
    i0, i1, j0, j1 = window
    if not (i0 <= i <= i1 and j0 <= j <= j1):
        raise ValueError(f"vertex {v} lies outside the search mask")
    return i * env.region.side + j


def geodesics_from(
    env: Environment,
    source: Vertex,
    targets: Sequence[Vertex],
    mask: RegionMask | BoxSpec | None = None,
) -> list[tuple[float, PathRecord]]:
    """Passage times and geodesics from one source to several targets, one search.

    Each time is the correctly rounded sum of its geodesic's weights, so
    ``T(a, b) == T(b, a)`` holds bit for bit.
    """
    window = _window(env, mask)
    src = _flat(env, source, window)
    flat_targets = np.array([_flat(env, t, window) for t in targets], dtype=np.int64)
    dist, pred = dijkstra_grid(env.horizontal, env.vertical, src, flat_targets, *window)
    side = env.region.side
    out = []
    for t in flat_targets:
        nodes = trace_back(pred, src, t)
        if len(nodes) == 0:
            raise PathError("target unreachable inside the mask")
        coords = np.column_stack((nodes // side + env.region.x0, nodes % side + env.region.y0))
        weights = env.path_weights(coords)
        # fsum makes the reported time independent of traversal direction
        total = math.fsum(weights)
        out.append((total, PathRecord(coords, weights, total)))
    return out


def passage_time(
    env: Environment,
    a: Vertex,
    b: Vertex,
    mask: RegionMask | BoxSpec | None = None,
) -> tuple[float, PathRecord]:
    """T(a, b), or T_K(a, b) when ``mask`` is given, together with the geodesic."""
    return geodesics_from(env, a, [b], mask)[0]


def geodesic_hits_box(path: PathRecord, box: BoxSpec) -> bool:
    d = np.abs(path.coords - (box.center.x, box.center.y)).max(axis=1)
    return bool(np.any(d <= box.radius))


def path_inside_box(path: PathRecord, box: BoxSpec) -> bool:
    d = np.abs(path.coords - (box.center.x, box.center.y)).max(axis=1)
    return bool(np.all(d <= box.radius))


def first_exit_prefix(path: PathRecord, box: BoxSpec) -> PathRecord:
    """Prefix up to and including the first vertex outside ``box``."""
    d = np.abs(path.coords - (box.center.x, box.center.y)).max(axis=1)
    if d[0] > box.radius:
        raise PathError("path does not start inside the box")
    outside = np.flatnonzero(d > box.radius)
    if len(outside) == 0:
        raise PathError("path never exits the box")
    return path.slice(0, int(outside[0]))


def good_edge_count(path: PathRecord, env: Environment, good: GoodSet) -> int:
    return int(np.count_nonzero(good.contains(env.path_weights(path.coords))))


def min_good_count_to_boundary(env: Environment, good: GoodSet, n: int) -> int:
    """Fewest good edges on any path from the origin to the boundary of Lambda(n).

    A shortest-path search with edge cost 1 for good weights and 0 otherwise.
    """
    box = BoxSpec(n)
    if n == 0:
        return 0
    window = _window(env, box)
    h = good.contains(env.horizontal).astype(float)
    v = good.contains(env.vertical).astype(float)
    src = _flat(env, Vertex(0, 0), window)
    dist, _ = dijkstra_grid(h, v, src, np.zeros(0, dtype=np.int64), *window)
    i0, i1, j0, j1 = window
    grid = dist.reshape(env.region.side, env.region.side)[i0 : i1 + 1, j0 : j1 + 1]
    ring = np.concatenate((grid[0, :], grid[-1, :], grid[:, 0], grid[:, -1]))
    return int(round(ring.min()))
