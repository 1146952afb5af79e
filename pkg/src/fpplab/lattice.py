"""Square-lattice geometry: vertices, canonical edges, boxes and annuli.

Array layout used throughout the package for a box of radius ``R`` with
lower-left corner ``(x0, y0)`` and side ``S = 2R + 1``:

* vertex ``(x0 + i, y0 + j)`` sits at index ``(i, j)`` of an ``(S, S)`` grid;
* ``horizontal[i, j]`` is the edge ``(x0+i, y0+j) -- (x0+i+1, y0+j)``, shape ``(S-1, S)``;
* ``vertical[i, j]`` is the edge ``(x0+i, y0+j) -- (x0+i, y0+j+1)``, shape ``(S, S-1)``.

Row-major order over ``(i, j)`` coincides with lexicographic ``(x, y)`` order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import IntEnum

import numpy as np


@dataclass(frozen=True, order=True)
class Vertex:
    x: int
    y: int

    def __add__(self, other: Vertex) -> Vertex:
        return Vertex(self.x + other.x, self.y + other.y)

    def __sub__(self, other: Vertex) -> Vertex:
        return Vertex(self.x - other.x, self.y - other.y)


ORIGIN = Vertex(0, 0)


class Axis(IntEnum):
    HORIZONTAL = 0
    VERTICAL = 1


@dataclass(frozen=True, order=True)
class EdgeId:
    """Undirected lattice edge from ``base`` to ``base + unit(axis)``."""

    base: Vertex
    axis: Axis

    @classmethod
    def between(cls, a: Vertex, b: Vertex) -> EdgeId:
        dx, dy = b.x - a.x, b.y - a.y
        if abs(dx) + abs(dy) != 1:
            raise ValueError(f"{a} and {b} are not lattice neighbours")
        lo = min(a, b)
        return cls(lo, Axis.HORIZONTAL if dx else Axis.VERTICAL)

    @property
    def head(self) -> Vertex:
        if self.axis is Axis.HORIZONTAL:
            return Vertex(self.base.x + 1, self.base.y)
        return Vertex(self.base.x, self.base.y + 1)

    def endpoints(self) -> tuple[Vertex, Vertex]:
        return self.base, self.head


@dataclass(frozen=True)
class BoxSpec:
    """The box ``{v : |v - center|_inf <= radius}``."""

    radius: int
    center: Vertex = ORIGIN

    def __post_init__(self) -> None:
        if self.radius < 0:
            raise ValueError(f"box radius must be nonnegative, got {self.radius}")

    @property
    def side(self) -> int:
        return 2 * self.radius + 1

    @property
    def x0(self) -> int:
        return self.center.x - self.radius

    @property
    def y0(self) -> int:
        return self.center.y - self.radius

    def contains(self, v: Vertex) -> bool:
        return annulus_of_vertex(v, self.center) <= self.radius

    def contains_box(self, other: BoxSpec) -> bool:
        return (
            other.x0 >= self.x0
            and other.y0 >= self.y0
            and other.x0 + other.side <= self.x0 + self.side
            and other.y0 + other.side <= self.y0 + self.side
        )

    def index_of(self, v: Vertex) -> tuple[int, int]:
        return v.x - self.x0, v.y - self.y0

    def vertex_at(self, i: int, j: int) -> Vertex:
        return Vertex(self.x0 + i, self.y0 + j)

    def vertices(self) -> list[Vertex]:
        return [self.vertex_at(i, j) for i in range(self.side) for j in range(self.side)]

    def edge_count(self) -> int:
        return 2 * self.side * (self.side - 1)

    def edge_coordinates(self, axis: Axis) -> tuple[np.ndarray, np.ndarray]:
        """Base-vertex coordinate grids for every edge of one orientation."""
        s = self.side
        shape = (s - 1, s) if axis is Axis.HORIZONTAL else (s, s - 1)
        i, j = np.indices(shape, dtype=np.int64)
        return i + self.x0, j + self.y0

    def annulus_indices(self, axis: Axis, center: Vertex = ORIGIN) -> np.ndarray:
        """``annulus_of_edge`` evaluated on the array layout of this box."""
        x, y = self.edge_coordinates(axis)
        x = x - center.x
        y = y - center.y
        k_base = np.maximum(np.abs(x), np.abs(y))
        if axis is Axis.HORIZONTAL:
            k_head = np.maximum(np.abs(x + 1), np.abs(y))
        else:
            k_head = np.maximum(np.abs(x), np.abs(y + 1))
        return np.maximum(k_base, k_head)


def box_radius(scale: float) -> int:
    """Round a real radius to the nearest integer (halves round up)."""
    return int(math.floor(scale + 0.5))


def annulus_of_vertex(v: Vertex, center: Vertex = ORIGIN) -> int:
    return max(abs(v.x - center.x), abs(v.y - center.y))


def annulus_of_edge(e: EdgeId, center: Vertex = ORIGIN) -> int:
    return max(annulus_of_vertex(e.base, center), annulus_of_vertex(e.head, center))


def edges_of_box(box: BoxSpec) -> list[EdgeId]:
    """Every edge with both endpoints in the box, sorted by (base.x, base.y, axis)."""
    edges = []
    s = box.side
    for i in range(s):
        for j in range(s):
            base = box.vertex_at(i, j)
            if i + 1 < s:
                edges.append(EdgeId(base, Axis.HORIZONTAL))
            if j + 1 < s:
                edges.append(EdgeId(base, Axis.VERTICAL))
    return edges


def annulus_edge_count(k: int) -> int:
    """Number of edges whose annulus index is exactly ``k``.

    Edges of Lambda(k) minus edges of Lambda(k-1): ``2(2k+1)2k - 2(2k-1)(2k-2)``,
    i.e. ``16k - 4`` for ``k >= 1``. The center vertex carries no edge, so ``k = 0`` gives 0.
    """
    if k < 0:
        raise ValueError(f"annulus index must be nonnegative, got {k}")
    if k == 0:
        return 0
    return 16 * k - 4
