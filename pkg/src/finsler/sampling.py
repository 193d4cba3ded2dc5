"""Deterministic sample-point generation.

All randomness flows from a single seed through a counter-based
generator, so reports are reproducible regardless of evaluation order.
Base points are uniform in a ball, directions uniform on the unit
sphere scaled by a random factor in [0.5, 2] (exercising homogeneity);
no direction is special-cased.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import DomainError
from .metric import FinslerMetric, SamplePoint


@dataclass(frozen=True)
class SamplingSpec:
    count: int = 30
    seed: int = 0
    radius: Optional[float] = None  # None: use the metric's default


def sample_points(metric: FinslerMetric, spec: SamplingSpec):
    """Draw ``spec.count`` valid sample points for ``metric``."""
    rng = np.random.Generator(np.random.Philox(spec.seed))
    radius = spec.radius if spec.radius is not None else metric.sample_radius
    n = metric.n
    points = []
    attempts = 0
    while len(points) < spec.count:
        attempts += 1
        if attempts > 100 * spec.count + 100:
            raise DomainError(
                f"could not draw {spec.count} valid sample points for "
                f"{metric.name} (domain: {metric.domain_desc})")
        u = rng.normal(size=n)
        r = rng.uniform(0.0, 1.0) ** (1.0 / n)
        x = radius * r * u / np.linalg.norm(u)
        v = rng.normal(size=n)
        y = rng.uniform(0.5, 2.0) * v / np.linalg.norm(v)
        if not metric.in_domain(x):
            continue
        p = SamplePoint(x, y)
        try:
            if metric.L(p) <= 0.0:
                continue
        except DomainError:
            continue
        points.append(p)
    return points
