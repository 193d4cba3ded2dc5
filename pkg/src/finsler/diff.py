"""Bounded-order mixed partial derivatives of scalar fields.

Two backends share one request/result shape:

* ``jet_eval`` — exact (machine precision) truncated-Taylor expansion of
  the field at the point, then formal differentiation.
* ``fd_eval`` — central differences with one Richardson extrapolation
  level, used purely as an independent cross-check oracle.

A "scalar field" is a callable ``f(x, y)`` taking the coordinates and
direction as lists of generic scalars (floats or jet numbers) and
returning a scalar of the same kind, exactly like a metric evaluator.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import OrderUnsupported, StepTooSmall
from .jets import Jet, d_x, d_y, get_space
from .metric import SamplePoint

MAX_X_ORDER = 2
MAX_Y_ORDER = 4
MAX_TOTAL_ORDER = 6


@dataclass(frozen=True)
class JetRequest:
    """Ask for all mixed partials of ``field`` at ``point`` up to
    ``x_order`` derivatives in x and ``y_order`` in y."""

    field: Callable
    point: SamplePoint
    x_order: int
    y_order: int

    def __post_init__(self):
        if self.x_order < 0 or self.y_order < 0:
            raise OrderUnsupported("derivative orders must be nonnegative")
        if (self.x_order > MAX_X_ORDER or self.y_order > MAX_Y_ORDER
                or self.x_order + self.y_order > MAX_TOTAL_ORDER):
            raise OrderUnsupported(
                f"requested orders (x:{self.x_order}, y:{self.y_order}) "
                f"exceed the supported bounds (x<={MAX_X_ORDER}, "
                f"y<={MAX_Y_ORDER}, total<={MAX_TOTAL_ORDER})")


@dataclass(frozen=True)
class JetResult:
    """All mixed partials up to the requested orders.

    ``table[(a, b)]`` is the array of a-fold x-derivatives and b-fold
    y-derivatives, shape (n,)*a + (n,)*b, x-axes first.  Entries are
    symmetric within the x-axes and within the y-axes.
    """

    point: SamplePoint
    table: dict = field(default_factory=dict)

    def get(self, x_order: int, y_order: int) -> np.ndarray:
        try:
            return self.table[(x_order, y_order)]
        except KeyError:
            raise OrderUnsupported(
                f"order (x:{x_order}, y:{y_order}) was not requested")


def jet_eval(req: JetRequest) -> JetResult:
    """Exact mixed partials via one truncated Taylor expansion."""
    p = req.point
    sp = get_space(p.n, req.x_order, req.y_order)
    xs, ys = sp.seed(p.x, p.y)
    f = req.field(xs, ys)
    if not isinstance(f, Jet):
        f = sp.constant(float(f))
    table = {}
    for a in range(req.x_order + 1):
        g = f
        for _ in range(a):
            g = d_x(g)
        for b in range(req.y_order + 1):
            arr = np.asarray(g.value(), dtype=float)
            # d_x/d_y append axes last; reorder so x-axes come first
            # (they already do: we applied all d_x before any d_y)
            table[(a, b)] = arr
            if b < req.y_order:
                g = d_y(g)
    return JetResult(point=p, table=table)


def _fd_partial(f, x, y, xs_idx, ys_idx, h):
    """Central-difference mixed partial, one offset per derivative."""
    idx = [("x", q) for q in xs_idx] + [("y", q) for q in ys_idx]
    total = 0.0
    for signs in itertools.product((1.0, -1.0), repeat=len(idx)):
        xx = np.array(x, dtype=float)
        yy = np.array(y, dtype=float)
        for (grp, q), s in zip(idx, signs):
            if grp == "x":
                xx[q] += s * h
            else:
                yy[q] += s * h
        total += np.prod(signs) * f(list(xx), list(yy))
    if not idx:
        return f(list(np.asarray(x, float)), list(np.asarray(y, float)))
    return total / (2.0 * h) ** len(idx)


def _richardson(f, x, y, xs_idx, ys_idx, h):
    d1 = _fd_partial(f, x, y, xs_idx, ys_idx, h)
    d2 = _fd_partial(f, x, y, xs_idx, ys_idx, h / 2.0)
    d3 = _fd_partial(f, x, y, xs_idx, ys_idx, h / 4.0)
    r12 = (4.0 * d2 - d1) / 3.0
    r23 = (4.0 * d3 - d2) / 3.0
    e1 = abs(d2 - d1)
    e2 = abs(d3 - d2)
    scale = max(abs(d1), abs(d2), abs(d3), 1.0)
    if e2 > 4.0 * e1 + 1e-12 * scale and e1 > 1e-10 * scale:
        raise StepTooSmall(
            f"non-monotone Richardson sequence at step {h:g} "
            f"(|d2-d1|={e1:.3e}, |d3-d2|={e2:.3e})")
    return r23 if e2 <= e1 else r12


def fd_eval(req: JetRequest, step: float = None) -> JetResult:
    """Central differences + one Richardson level; independent of the
    jet machinery.  Orders are limited to total <= 3 (noise limit)."""
    if req.x_order + req.y_order > 3:
        raise OrderUnsupported(
            "finite differences support total order <= 3 only")
    p = req.point
    n = p.n
    scale = 1.0 + float(np.max(np.abs(np.concatenate([p.x, p.y]))))
    base = step if step is not None else 1e-3 * scale
    f = req.field
    table = {}
    for a in range(req.x_order + 1):
        for b in range(req.y_order + 1):
            if a + b > 3:
                continue
            # widen the step with the order: an order-m stencil divides
            # round-off noise by (2h)^m
            h = base * 4.0 ** max(a + b - 1, 0)
            arr = np.empty((n,) * (a + b))
            for xi in itertools.product(range(n), repeat=a):
                for yi in itertools.product(range(n), repeat=b):
                    arr[xi + yi] = _richardson(f, p.x, p.y, xi, yi, h)
            table[(a, b)] = arr if (a + b) else float(arr)
    return JetResult(point=p, table=table)


def vertical_jet(fld: Callable, p: SamplePoint, order: int) -> np.ndarray:
    """The symmetric tensor of ``order``-fold fiber (y) derivatives of a
    scalar field at p, computed exactly."""
    if order > MAX_Y_ORDER:
        raise OrderUnsupported(
            f"vertical order {order} exceeds the bound {MAX_Y_ORDER}")
    res = jet_eval(JetRequest(field=fld, point=p, x_order=0, y_order=order))
    return res.get(0, order)
