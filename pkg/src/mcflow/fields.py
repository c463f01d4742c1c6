"""Discretised scalar functions on uniform 1D line or radial grids."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

FIELD_KINDS = ("line", "radial")
BC_TAGS = ("dirichlet_zero", "asymptotic_decay", "axis_symmetry")


@dataclass(frozen=True)
class Field:
    """Grid samples of u with per-end boundary treatment.

    kind 'line' uses coordinates x on an interval, kind 'radial' radii
    r >= 0.  Boundary tags: 'dirichlet_zero' pins the end to zero,
    'asymptotic_decay' freezes the end at its current value, and
    'axis_symmetry' (left end of a radial grid at r = 0 only) reflects
    evenly so u'(0) = 0.
    """

    kind: str
    nodes: np.ndarray
    values: np.ndarray
    h: float
    bc: tuple

    def __post_init__(self):
        object.__setattr__(self, "nodes", np.asarray(self.nodes, dtype=float))
        object.__setattr__(self, "values", np.asarray(self.values, dtype=float))
        if self.kind not in FIELD_KINDS:
            raise ValueError(f"unknown field kind {self.kind!r}")
        if self.nodes.ndim != 1 or self.nodes.size < 3:
            raise ValueError("need a 1D grid with at least 3 nodes")
        if self.values.shape != self.nodes.shape:
            raise ValueError("values and nodes must have matching shapes")
        spacing = np.diff(self.nodes)
        scale = max(abs(self.nodes[0]), abs(self.nodes[-1]))
        if np.any(spacing <= 0):
            raise ValueError("nodes must be strictly increasing")
        if np.max(np.abs(spacing - self.h)) > 1e-12 * scale:
            raise ValueError("grid spacing is not uniform to 1e-12 relative tolerance")
        if self.kind == "radial" and self.nodes[0] < 0:
            raise ValueError("radial grids need r >= 0")
        if len(self.bc) != 2 or any(tag not in BC_TAGS for tag in self.bc):
            raise ValueError(f"boundary tags must be from {BC_TAGS}, got {self.bc}")
        for end, tag in enumerate(self.bc):
            if tag == "axis_symmetry":
                if not (self.kind == "radial" and end == 0
                        and abs(self.nodes[0]) < 1e-14):
                    raise ValueError("axis_symmetry is only valid at r = 0 of a "
                                     "radial grid")
        slopes = np.abs(np.diff(self.values)) / self.h
        if slopes.size and slopes.max() >= 1.0:
            raise ValueError(
                f"node-to-node slope {slopes.max():.6g} >= 1 breaks spacelikeness")

    @property
    def axis(self) -> bool:
        return self.bc[0] == "axis_symmetry"

    def radii(self) -> np.ndarray:
        """Distance from the origin per node (|x| for line grids)."""
        return np.abs(self.nodes) if self.kind == "line" else self.nodes


def _sample(profile, nodes):
    if callable(profile):
        return np.asarray(profile(nodes), dtype=float)
    return np.asarray(profile, dtype=float)


def line_field(x_lo: float, x_hi: float, h: float, profile,
               bc=("dirichlet_zero", "dirichlet_zero")) -> Field:
    count = int(round((x_hi - x_lo) / h))
    nodes = np.linspace(x_lo, x_lo + count * h, count + 1)
    return Field(kind="line", nodes=nodes, values=_sample(profile, nodes),
                 h=h, bc=tuple(bc))


def radial_field(r_lo: float, r_hi: float, h: float, profile,
                 bc=None) -> Field:
    count = int(round((r_hi - r_lo) / h))
    nodes = np.linspace(r_lo, r_lo + count * h, count + 1)
    if bc is None:
        left = "axis_symmetry" if abs(r_lo) < 1e-14 else "dirichlet_zero"
        bc = (left, "dirichlet_zero")
    return Field(kind="radial", nodes=nodes, values=_sample(profile, nodes),
                 h=h, bc=tuple(bc))


def gradient(field: Field) -> np.ndarray:
    """Discrete u': second-order central inside, one-sided at the ends.

    An axis end returns exactly zero there (even reflection).
    """
    u = field.values
    h = field.h
    du = np.empty_like(u)
    du[1:-1] = (u[2:] - u[:-2]) / (2.0 * h)
    du[0] = (-3.0 * u[0] + 4.0 * u[1] - u[2]) / (2.0 * h)
    du[-1] = (3.0 * u[-1] - 4.0 * u[-2] + u[-3]) / (2.0 * h)
    if field.axis:
        du[0] = 0.0
    return du
