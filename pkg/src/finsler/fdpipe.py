"""Finite-difference pipeline: an independent re-computation of the
metric, spray, connection, torsion, deviation, and scalar curvature
using only float evaluations of L and central-difference stencils (one
Richardson extrapolation level).

This backend shares no differentiation code with the jet engine, which
is what makes it a meaningful cross-check oracle.  It deliberately stops
at the first vertical derivative of the scalar curvature (the C form):
deeper members of the derivative ladder amplify FD noise beyond any
useful tolerance and are only available on the jet backend.
"""

from __future__ import annotations

import numpy as np

from .errors import DegenerateMetric, DomainError
from .metric import FinslerMetric, SamplePoint


def _richardson(stencil, h):
    """(4 T(h/2) - T(h)) / 3 for a tensor-valued stencil callable."""
    return (4.0 * np.asarray(stencil(h / 2.0)) - np.asarray(stencil(h))) / 3.0


class FDPipeline:
    """All FD-backend quantities for one metric; evaluation is pointwise
    through :meth:`tensors`."""

    def __init__(self, metric: FinslerMetric, step: float = None):
        self.metric = metric
        self.step = step

    # ---- scalar building blocks --------------------------------------
    def _L(self, x, y):
        return float(self.metric.evaluate(list(x), list(y)))

    def _E(self, x, y):
        v = self._L(x, y)
        return 0.5 * v * v

    def _h(self, p: SamplePoint):
        if self.step is not None:
            return self.step
        scale = 1.0 + float(np.max(np.abs(np.concatenate([p.x, p.y]))))
        return 1e-3 * scale

    # ---- stencils -----------------------------------------------------
    def _grad(self, f, x, y, var, h):
        n = len(x)
        out = np.empty(n)
        for q in range(n):
            xp, yp = np.array(x), np.array(y)
            xm, ym = np.array(x), np.array(y)
            if var == "x":
                xp[q] += h
                xm[q] -= h
            else:
                yp[q] += h
                ym[q] -= h
            out[q] = (f(xp, yp) - f(xm, ym)) / (2.0 * h)
        return out

    def _hess_yy(self, f, x, y, h):
        n = len(x)
        out = np.empty((n, n))
        f0 = f(x, y)
        for i in range(n):
            for j in range(i, n):
                if i == j:
                    yp, ym = np.array(y), np.array(y)
                    yp[i] += h
                    ym[i] -= h
                    out[i, i] = (f(x, yp) - 2.0 * f0 + f(x, ym)) / (h * h)
                else:
                    val = 0.0
                    for si in (1.0, -1.0):
                        for sj in (1.0, -1.0):
                            yy = np.array(y)
                            yy[i] += si * h
                            yy[j] += sj * h
                            val += si * sj * f(x, yy)
                    out[i, j] = out[j, i] = val / (4.0 * h * h)
        return out

    def _mixed_xy(self, f, x, y, h):
        """d2 f / dx^c dy^j as [c, j] (f scalar) or [..., c, j] stacked
        outside; here f is scalar-valued."""
        n = len(x)
        out = np.empty((n, n))
        for c in range(n):
            for j in range(n):
                val = 0.0
                for sc in (1.0, -1.0):
                    for sj in (1.0, -1.0):
                        xx, yy = np.array(x), np.array(y)
                        xx[c] += sc * h
                        yy[j] += sj * h
                        val += sc * sj * f(xx, yy)
                out[c, j] = val / (4.0 * h * h)
        return out

    # ---- pipeline quantities -----------------------------------------
    def g_at(self, x, y, h):
        return _richardson(lambda hh: self._hess_yy(self._E, x, y, hh), h)

    def spray_at(self, x, y, h):
        g = self.g_at(x, y, h)
        ev = np.linalg.eigvalsh(g)
        if ev[0] <= 1e-9 * abs(ev[-1]):
            raise DegenerateMetric(
                f"fundamental tensor not positive definite at "
                f"x={list(x)}, y={list(y)} (smallest eigenvalue {ev[0]:.3e})",
                min_eigenvalue=float(ev[0]))
        dEx = _richardson(
            lambda hh: self._grad(self._E, x, y, "x", hh), h)
        dExy = _richardson(
            lambda hh: self._mixed_xy(self._E, x, y, hh), h)
        lhs = np.asarray(y) @ dExy - dEx  # sum_k y^k d2E/dx^k dy^j - dE/dx^j
        return 0.5 * np.linalg.solve(g, lhs)

    def _spray_grad(self, x, y, var, h, hG):
        """dG^i/d(var)^q as [i, q]; inner spray evaluations use step hG."""
        n = len(x)
        out = np.empty((n, n))
        for q in range(n):
            xp, yp = np.array(x), np.array(y)
            xm, ym = np.array(x), np.array(y)
            if var == "x":
                xp[q] += h
                xm[q] -= h
            else:
                yp[q] += h
                ym[q] -= h
            out[:, q] = (self.spray_at(xp, yp, hG)
                         - self.spray_at(xm, ym, hG)) / (2.0 * h)
        return out

    def nonlinear_at(self, x, y, h):
        return _richardson(lambda hh: self._spray_grad(x, y, "y", hh, h), h)

    def torsion_at(self, x, y, h):
        """Rhat^i_jk = delta_k N^i_j - delta_j N^i_k via second
        derivatives of the spray closure."""
        n = len(x)
        N = self.nonlinear_at(x, y, h)
        # Gxy[i, c, j] = d2 G^i / dx^c dy^j ; Gyy[i, m, j] symmetric (m,j)

        def stack_xy(hh):
            out = np.empty((n, n, n))
            for c in range(n):
                for j in range(n):
                    val = np.zeros(n)
                    for sc in (1.0, -1.0):
                        for sj in (1.0, -1.0):
                            xx, yy = np.array(x), np.array(y)
                            xx[c] += sc * hh
                            yy[j] += sj * hh
                            val += sc * sj * self.spray_at(xx, yy, h)
                    out[:, c, j] = val / (4.0 * hh * hh)
            return out

        def stack_yy(hh):
            out = np.empty((n, n, n))
            G0 = self.spray_at(x, y, h)
            for m in range(n):
                for j in range(m, n):
                    if m == j:
                        yp, ym = np.array(y), np.array(y)
                        yp[m] += hh
                        ym[m] -= hh
                        col = (self.spray_at(x, yp, h) - 2.0 * G0
                               + self.spray_at(x, ym, h)) / (hh * hh)
                    else:
                        col = np.zeros(n)
                        for sm in (1.0, -1.0):
                            for sj in (1.0, -1.0):
                                yy = np.array(y)
                                yy[m] += sm * hh
                                yy[j] += sj * hh
                                col += sm * sj * self.spray_at(x, yy, h)
                        col /= 4.0 * hh * hh
                    out[:, m, j] = col
                    out[:, j, m] = col
            return out

        # wider outer step: each spray evaluation carries ~1e-9 noise,
        # and second differences divide it by hh^2
        h2 = 20.0 * h
        Gxy = _richardson(stack_xy, h2)
        Gyy = _richardson(stack_yy, h2)
        # delta_c N^i_j = d2G^i/dx^c dy^j - N^m_c d2G^i/dy^m dy^j
        dN = np.einsum("icj->ijc", Gxy) - np.einsum(
            "mc,ijm->ijc", N, np.einsum("imj->ijm", Gyy))
        return dN - dN.transpose(0, 2, 1)

    # ---- public entry points -----------------------------------------
    def tensors(self, p: SamplePoint):
        """Dict of FD-backend values at p: L, g, G, N, Rhat, H, k."""
        self.metric.check_point(p)
        x, y = p.x, p.y
        h = self._h(p)
        L = self._L(x, y)
        if L <= 0.0:
            raise DomainError(
                f"L = {L:.6g} <= 0 at x={x.tolist()}, y={y.tolist()}")
        g = self.g_at(x, y, h)
        G = self.spray_at(x, y, h)
        N = self.nonlinear_at(x, y, h)
        Rhat = self.torsion_at(x, y, h)
        H = np.einsum("k,ikj->ij", y, Rhat)
        n = p.n
        k = float(np.trace(H)) / ((n - 1) * L * L)
        return {"L": L, "g": g, "G": G, "N": N, "Rhat": Rhat,
                "H": H, "k": k}

    def scalar_at(self, x, y):
        p = SamplePoint(np.asarray(x, float), np.asarray(y, float))
        h = self._h(p)
        L = self._L(p.x, p.y)
        Rhat = self.torsion_at(p.x, p.y, h)
        H = np.einsum("k,ikj->ij", p.y, Rhat)
        return float(np.trace(H)) / ((p.n - 1) * L * L)

    def c_form(self, p: SamplePoint, step: float = None):
        """C = L dk/dy by a plain central difference of the scalar
        curvature closure (no Richardson: each evaluation is itself a
        deep FD pipeline)."""
        n = p.n
        h = step if step is not None else 1e-2 * (1.0 + float(
            np.max(np.abs(p.y))))
        dk = np.empty(n)
        for q in range(n):
            yp, ym = np.array(p.y), np.array(p.y)
            yp[q] += h
            ym[q] -= h
            dk[q] = (self.scalar_at(p.x, yp)
                     - self.scalar_at(p.x, ym)) / (2.0 * h)
        return self._L(p.x, p.y) * dk
