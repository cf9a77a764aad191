"""Sample grids over coordinate boxes."""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from deltainv.geometry.metric import as_domain

GRID_MARGIN = 0.05


def interior_grid(domain, per_axis: int, margin: float = GRID_MARGIN) -> np.ndarray:
    """Uniform tensor grid with ``per_axis`` points per axis, shrunk by ``margin`` of each width.

    A single point per axis is the box center. Rows are ordered lexicographically with
    the last coordinate varying fastest.
    """
    box = as_domain(domain)
    if per_axis < 1:
        raise ValueError(f"Grid needs at least one point per axis, got {per_axis}")
    if not 0.0 <= margin < 0.5:
        raise ValueError(f"Grid margin must lie in [0, 0.5), got {margin}")
    width = box[:, 1] - box[:, 0]
    lo = box[:, 0] + margin * width
    hi = box[:, 1] - margin * width
    if per_axis == 1:
        axes = [np.array([0.5 * (a + b)]) for a, b in zip(lo, hi)]
    else:
        axes = [np.linspace(a, b, per_axis) for a, b in zip(lo, hi)]
    return np.array(list(itertools.product(*axes)), dtype=float)


@dataclass(frozen=True, eq=False)
class QuadratureGrid:
    """Cell midpoints of a uniform partition and the coordinate volume of one cell."""

    points: np.ndarray
    cell_volume: float

    def __iter__(self):
        yield self.points
        yield self.cell_volume

    def __len__(self):
        return len(self.points)


def midpoint_grid(domain, per_axis: int) -> QuadratureGrid:
    box = as_domain(domain)
    if per_axis < 1:
        raise ValueError(f"Grid needs at least one cell per axis, got {per_axis}")
    width = box[:, 1] - box[:, 0]
    step = width / per_axis
    axes = [box[i, 0] + step[i] * (np.arange(per_axis) + 0.5) for i in range(len(box))]
    points = np.array(list(itertools.product(*axes)), dtype=float)
    return QuadratureGrid(points, float(np.prod(step)))
