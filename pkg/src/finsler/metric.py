"""Finsler metric handle: dimension plus a generic evaluator for L(x, y).

The evaluator receives the chart coordinates and direction components as
lists of generic scalars (floats, numpy arrays, or :class:`~finsler.jets.Jet`
values) and must be written with the generic math functions from
``finsler.jets`` so the whole pipeline can differentiate through it.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from . import jets
from .errors import DomainError, HomogeneityError


@dataclass(frozen=True)
class SamplePoint:
    """Chart coordinates x and a nonzero tangent direction y."""

    x: np.ndarray
    y: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "x", np.asarray(self.x, dtype=float))
        object.__setattr__(self, "y", np.asarray(self.y, dtype=float))
        if self.x.shape != self.y.shape or self.x.ndim != 1:
            raise DomainError("x and y must be 1-d arrays of equal length")
        if not np.all(np.isfinite(self.x)) or not np.all(np.isfinite(self.y)):
            raise DomainError("non-finite sample point")
        if float(np.linalg.norm(self.y)) == 0.0:
            raise DomainError("direction y must be nonzero (slit bundle)")

    @property
    def n(self):
        return self.x.shape[0]


@dataclass(frozen=True)
class FinslerMetric:
    """A fundamental function L(x, y) on a single coordinate chart."""

    n: int
    evaluate: Callable
    name: str = "metric"
    domain: Optional[Callable] = None  # x -> bool; None means all of R^n
    domain_desc: str = "all of R^n"
    sample_radius: float = 0.4

    def in_domain(self, x) -> bool:
        x = np.asarray(x, dtype=float)
        return bool(self.domain(x)) if self.domain is not None else True

    def check_point(self, p: SamplePoint):
        if p.n != self.n:
            raise DomainError(
                f"point dimension {p.n} != metric dimension {self.n}")
        if not self.in_domain(p.x):
            raise DomainError(
                f"x={p.x.tolist()} outside chart domain ({self.domain_desc})")

    def L(self, p: SamplePoint) -> float:
        self.check_point(p)
        val = self.evaluate(list(p.x), list(p.y))
        return float(val)

    def check_homogeneity(self, points, rtol=1e-8):
        """Euler check y . dL/dy = L; raises HomogeneityError on failure."""
        for p in points:
            self.check_point(p)
            sp = jets.get_space(self.n, 0, 1)
            xs = [sp.constant(v) for v in p.x]
            ys = [sp.coordinate("y", q, p.y[q]) for q in range(self.n)]
            L = self.evaluate(xs, ys)
            val = L.value()
            euler = sum(p.y[q] * L.partial(ys=(q,)) for q in range(self.n))
            if abs(euler - val) > rtol * max(abs(val), 1.0):
                raise HomogeneityError(
                    f"{self.name}: y.dL/dy = {euler:.6g} but L = {val:.6g} "
                    f"at x={p.x.tolist()}, y={p.y.tolist()}; L is not "
                    "positively homogeneous of degree 1")
