"""Truncated multivariate Taylor (jet) arithmetic.

A ``Jet`` stores the Taylor coefficients of a smooth function of the 2n
chart variables (x_1..x_n, y_1..y_n) around a base point, truncated at
total x-degree ``px`` and total y-degree ``py``.  All pipeline quantities
(metric tensor, spray, connection, curvature, scalar curvature and its
vertical derivatives) are obtained from a single jet evaluation of the
fundamental function followed by *formal* differentiation, which is exact
to machine precision.

Jets carry a validity budget (vx, vy): how many more formal x-/y-
derivatives may be taken before truncation error reaches the constant
term.  Exceeding the budget raises :class:`OrderUnsupported`.

Coefficient arrays have shape ``(T, *trailing)`` where T is the number of
retained monomials; the trailing axes hold tensor components, so whole
tensors of jets are manipulated with vectorized numpy operations.
"""

from __future__ import annotations

import functools
import itertools
import math

import numpy as np

from .errors import EvalDomainError, OrderUnsupported

_DIV_EPS = 1e-300


def _align(ca, cb):
    """Pad trailing (component) dims so two coefficient arrays broadcast."""
    nd = max(ca.ndim, cb.ndim)
    if ca.ndim < nd:
        ca = ca.reshape(ca.shape[:1] + (1,) * (nd - ca.ndim) + ca.shape[1:])
    if cb.ndim < nd:
        cb = cb.reshape(cb.shape[:1] + (1,) * (nd - cb.ndim) + cb.shape[1:])
    return ca, cb


def _monomials(nvars, maxdeg):
    """All exponent tuples in ``nvars`` variables of total degree <= maxdeg,
    graded order (constant first)."""
    out = []
    for d in range(maxdeg + 1):
        for combo in itertools.combinations_with_replacement(range(nvars), d):
            alpha = [0] * nvars
            for v in combo:
                alpha[v] += 1
            out.append(tuple(alpha))
    return out


def _pair_table(monos, index, maxdeg):
    """Index triples (i, j, k) with mono[i]*mono[j] == mono[k] within the cap."""
    degs = [sum(m) for m in monos]
    ia, ib, ic = [], [], []
    for i, a in enumerate(monos):
        da = degs[i]
        for j, b in enumerate(monos):
            if da + degs[j] > maxdeg:
                continue
            s = tuple(p + q for p, q in zip(a, b))
            ia.append(i)
            ib.append(j)
            ic.append(index[s])
    return (np.asarray(ia, dtype=np.int64),
            np.asarray(ib, dtype=np.int64),
            np.asarray(ic, dtype=np.int64))


def _deriv_table(monos, index, var):
    """Formal d/dvar on one variable group: (src, dst, multiplier) arrays."""
    src, dst, mul = [], [], []
    for i, a in enumerate(monos):
        if a[var] == 0:
            continue
        b = list(a)
        b[var] -= 1
        src.append(i)
        dst.append(index[tuple(b)])
        mul.append(float(a[var]))
    return (np.asarray(src, dtype=np.int64),
            np.asarray(dst, dtype=np.int64),
            np.asarray(mul))


class JetSpace:
    """Monomial bookkeeping for jets in n x-variables and n y-variables,
    truncated at total x-degree px and total y-degree py."""

    def __init__(self, n, px, py):
        self.n = n
        self.px = px
        self.py = py
        self.xm = _monomials(n, px)
        self.ym = _monomials(n, py)
        self.NX = len(self.xm)
        self.NY = len(self.ym)
        self.T = self.NX * self.NY
        xi = {m: i for i, m in enumerate(self.xm)}
        yi = {m: i for i, m in enumerate(self.ym)}

        xa, xb, xc = _pair_table(self.xm, xi, px)
        ya, yb, yc = _pair_table(self.ym, yi, py)
        NY = self.NY
        I = (xa[:, None] * NY + ya[None, :]).ravel()
        J = (xb[:, None] * NY + yb[None, :]).ravel()
        K = (xc[:, None] * NY + yc[None, :]).ravel()
        order = np.argsort(K, kind="stable")
        I, J, K = I[order], J[order], K[order]
        starts = np.flatnonzero(np.r_[True, K[1:] != K[:-1]])
        self.mI = I
        self.mJ = J
        self.red_starts = starts
        self.red_K = K[starts]

        self.xderiv = [_deriv_table(self.xm, xi, q) for q in range(n)]
        self.yderiv = [_deriv_table(self.ym, yi, q) for q in range(n)]

        # id of the degree-1 monomial for each variable
        e = lambda q: tuple(1 if t == q else 0 for t in range(n))
        self._xvar_id = [xi[e(q)] * NY for q in range(n)] if px >= 1 else None
        self._yvar_id = [yi[e(q)] for q in range(n)] if py >= 1 else None
        self._xi = xi
        self._yi = yi
        # factorial factor per combined monomial, for partial extraction
        fx = np.array([np.prod([math.factorial(a) for a in m]) for m in self.xm])
        fy = np.array([np.prod([math.factorial(a) for a in m]) for m in self.ym])
        self.fact = (fx[:, None] * fy[None, :]).ravel()

    # ---- constructors -------------------------------------------------
    def constant(self, value):
        value = np.asarray(value, dtype=float)
        c = np.zeros((self.T,) + value.shape)
        c[0] = value
        return Jet(self, c, self.px, self.py)

    def coordinate(self, group, q, value):
        """Seed jet for chart variable x_q or y_q (group 'x' or 'y')."""
        c = np.zeros((self.T,))
        c[0] = float(value)
        # with a zero-order truncation the coordinate degenerates to its
        # constant value (no linear term to carry)
        if group == "x":
            if self.px >= 1:
                c[self._xvar_id[q]] = 1.0
        else:
            if self.py >= 1:
                c[self._yvar_id[q]] = 1.0
        return Jet(self, c, self.px, self.py)

    def seed(self, x, y):
        """Seed jets for a full sample point; returns (x_jets, y_jets) lists."""
        xs = [self.coordinate("x", q, x[q]) for q in range(self.n)]
        ys = [self.coordinate("y", q, y[q]) for q in range(self.n)]
        return xs, ys

    def mono_id(self, ax, ay):
        """Combined monomial id for x-exponents ax and y-exponents ay."""
        return self._xi[tuple(ax)] * self.NY + self._yi[tuple(ay)]


@functools.lru_cache(maxsize=32)
def get_space(n, px, py):
    return JetSpace(n, px, py)


class Jet:
    """Tensor-valued truncated Taylor expansion; see module docstring."""

    __slots__ = ("space", "c", "vx", "vy")
    __array_ufunc__ = None  # keep numpy from elementwise-broadcasting us

    def __init__(self, space, c, vx, vy):
        self.space = space
        self.c = c
        self.vx = vx
        self.vy = vy

    # ---- basic info ---------------------------------------------------
    @property
    def shape(self):
        return self.c.shape[1:]

    def value(self):
        """Constant term (the value of the field at the base point)."""
        v = self.c[0]
        return float(v) if v.ndim == 0 else np.array(v)

    def partial(self, xs=(), ys=()):
        """Mixed partial derivative value; xs/ys are variable-index tuples."""
        sp = self.space
        ax = [0] * sp.n
        ay = [0] * sp.n
        for q in xs:
            ax[q] += 1
        for q in ys:
            ay[q] += 1
        if sum(ax) > self.vx or sum(ay) > self.vy:
            raise OrderUnsupported(
                f"partial of order (x:{sum(ax)}, y:{sum(ay)}) exceeds jet "
                f"validity (x:{self.vx}, y:{self.vy})")
        mid = sp.mono_id(ax, ay)
        v = self.c[mid] * sp.fact[mid]
        return float(v) if np.ndim(v) == 0 else np.array(v)

    # ---- arithmetic ---------------------------------------------------
    def _lift(self, other):
        if isinstance(other, Jet):
            if other.space is not self.space:
                raise ValueError("jets from different spaces")
            return other
        return None

    def __add__(self, other):
        o = self._lift(other)
        if o is None:
            other = np.asarray(other, dtype=float)
            shape = np.broadcast_shapes(self.shape, other.shape)
            c = np.zeros((self.space.T,) + shape)
            c += self.c
            c[0] += other
            return Jet(self.space, c, self.vx, self.vy)
        ca, cb = _align(self.c, o.c)
        return Jet(self.space, ca + cb, min(self.vx, o.vx),
                   min(self.vy, o.vy))

    __radd__ = __add__

    def __neg__(self):
        return Jet(self.space, -self.c, self.vx, self.vy)

    def __sub__(self, other):
        return self + (-other if isinstance(other, Jet)
                       else -np.asarray(other, dtype=float))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._lift(other)
        if o is None:
            return Jet(self.space, self.c * np.asarray(other, dtype=float),
                       self.vx, self.vy)
        sp = self.space
        ca, cb = _align(self.c, o.c)
        prod = ca[sp.mI] * cb[sp.mJ]
        seg = np.add.reduceat(prod, sp.red_starts, axis=0)
        c = np.zeros((sp.T,) + prod.shape[1:])
        c[sp.red_K] = seg
        return Jet(sp, c, min(self.vx, o.vx), min(self.vy, o.vy))

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, Jet):
            return self * other.reciprocal()
        return self * (1.0 / np.asarray(other, dtype=float))

    def __rtruediv__(self, other):
        return self.reciprocal() * other

    def __pow__(self, p):
        if isinstance(p, int) or (isinstance(p, float) and p.is_integer()):
            p = int(p)
            if p == 0:
                return self.space.constant(np.ones(self.shape))
            if p < 0:
                return self.reciprocal() ** (-p)
            out = self
            for _ in range(p - 1):
                out = out * self
            return out
        return jpow(self, p)

    # ---- structure ----------------------------------------------------
    def __getitem__(self, idx):
        if not isinstance(idx, tuple):
            idx = (idx,)
        return Jet(self.space, self.c[(slice(None),) + idx], self.vx, self.vy)

    def tr(self, *perm):
        """Permute trailing (component) axes."""
        axes = (0,) + tuple(p + 1 for p in perm)
        return Jet(self.space, self.c.transpose(axes), self.vx, self.vy)

    def sum(self, axis):
        return Jet(self.space, self.c.sum(axis=axis + 1 if axis >= 0 else axis),
                   self.vx, self.vy)

    def trace(self, a, b):
        """Contract two trailing axes of equal extent."""
        c = np.diagonal(self.c, axis1=a + 1, axis2=b + 1).sum(axis=-1)
        return Jet(self.space, c, self.vx, self.vy)

    # ---- formal differentiation --------------------------------------
    def dx(self, q):
        if self.vx <= 0:
            raise OrderUnsupported("x-derivative budget exhausted")
        sp = self.space
        cc = self.c.reshape((sp.NX, sp.NY) + self.shape)
        out = np.zeros_like(cc)
        src, dst, mul = sp.xderiv[q]
        out[dst] = cc[src] * mul.reshape((-1,) + (1,) * (cc.ndim - 1))
        return Jet(sp, out.reshape(self.c.shape), self.vx - 1, self.vy)

    def dy(self, q):
        if self.vy <= 0:
            raise OrderUnsupported("y-derivative budget exhausted")
        sp = self.space
        cc = self.c.reshape((sp.NX, sp.NY) + self.shape)
        out = np.zeros_like(cc)
        src, dst, mul = sp.yderiv[q]
        out[:, dst] = cc[:, src] * mul.reshape((-1,) + (1,) * (cc.ndim - 2))
        return Jet(sp, out.reshape(self.c.shape), self.vx, self.vy - 1)

    # ---- analytic functions ------------------------------------------
    def reciprocal(self):
        u0 = np.asarray(self.c[0])
        if np.any(np.abs(u0) < _DIV_EPS):
            raise EvalDomainError("division by (near) zero")
        w = self * (1.0 / u0)
        w.c[0] -= 1.0
        D = self.space.px + self.space.py
        coeffs = [(-1.0) ** k for k in range(D + 1)]
        return _series(w, coeffs) * (1.0 / u0)


def _series(w, coeffs):
    """Horner evaluation of sum_k coeffs[k] w^k for a jet w with zero
    constant term."""
    acc = w.space.constant(np.full(w.shape, coeffs[-1]))
    for ck in reversed(coeffs[:-1]):
        acc = acc * w + ck
    return acc


def _frac_series(u, coeffs, head):
    """head * sum_k coeffs[k] (u/u0 - 1)^k; shared by sqrt/pow/log."""
    u0 = np.asarray(u.c[0])
    w = u * (1.0 / u0)
    w.c[0] -= 1.0
    return _series(w, coeffs) * head


def jsqrt(u):
    if not isinstance(u, Jet):
        return np.sqrt(u)
    u0 = np.asarray(u.c[0])
    if np.any(u0 <= 0.0):
        raise EvalDomainError("sqrt of a non-positive value")
    D = u.space.px + u.space.py
    coeffs = [1.0]
    for k in range(1, D + 1):
        coeffs.append(coeffs[-1] * (0.5 - k + 1) / k)
    return _frac_series(u, coeffs, np.sqrt(u0))


def jpow(u, p):
    if not isinstance(u, Jet):
        return u ** p
    u0 = np.asarray(u.c[0])
    if np.any(u0 <= 0.0):
        raise EvalDomainError("non-integer power of a non-positive value")
    D = u.space.px + u.space.py
    coeffs = [1.0]
    for k in range(1, D + 1):
        coeffs.append(coeffs[-1] * (p - k + 1) / k)
    return _frac_series(u, coeffs, u0 ** p)


def jexp(u):
    if not isinstance(u, Jet):
        return np.exp(u)
    u0 = np.asarray(u.c[0])
    w = u - u0
    D = u.space.px + u.space.py
    coeffs = [1.0 / math.factorial(k) for k in range(D + 1)]
    return _series(w, coeffs) * np.exp(u0)


def jlog(u):
    if not isinstance(u, Jet):
        return np.log(u)
    u0 = np.asarray(u.c[0])
    if np.any(u0 <= 0.0):
        raise EvalDomainError("log of a non-positive value")
    D = u.space.px + u.space.py
    coeffs = [0.0] + [(-1.0) ** (k + 1) / k for k in range(1, D + 1)]
    res = _frac_series(u, coeffs, 1.0)
    res.c[0] += np.log(u0)
    return res


def _sincos(u):
    u0 = np.asarray(u.c[0])
    w = u - u0
    D = u.space.px + u.space.py
    cosc = [0.0] * (D + 1)
    sinc = [0.0] * (D + 1)
    for k in range(D + 1):
        f = 1.0 / math.factorial(k)
        if k % 4 == 0:
            cosc[k] = f
        elif k % 4 == 1:
            sinc[k] = f
        elif k % 4 == 2:
            cosc[k] = -f
        else:
            sinc[k] = -f
    cw = _series(w, cosc)
    sw = _series(w, sinc)
    s = cw * np.sin(u0) + sw * np.cos(u0)
    c = cw * np.cos(u0) - sw * np.sin(u0)
    return s, c


def jsin(u):
    if not isinstance(u, Jet):
        return np.sin(u)
    return _sincos(u)[0]


def jcos(u):
    if not isinstance(u, Jet):
        return np.cos(u)
    return _sincos(u)[1]


# generic names for metric evaluators, usable on floats, arrays and jets
sqrt = jsqrt
exp = jexp
log = jlog
sin = jsin
cos = jcos


def jstack(jets):
    """Stack same-shaped jets along a new last trailing axis."""
    sp = jets[0].space
    c = np.stack([j.c for j in jets], axis=-1)
    return Jet(sp, c, min(j.vx for j in jets), min(j.vy for j in jets))


def d_x(jet):
    """All x-derivatives, appended as a new last trailing axis."""
    return jstack([jet.dx(q) for q in range(jet.space.n)])


def d_y(jet):
    """All y-derivatives, appended as a new last trailing axis."""
    return jstack([jet.dy(q) for q in range(jet.space.n)])


def jet_einsum(subscripts, a, b):
    """Einsum over trailing (component) axes of two jets, convolving the
    Taylor coefficients.  ``subscripts`` uses lowercase labels ('Z' is
    reserved for the coefficient-pair axis)."""
    lhs, out = subscripts.split("->")
    s1, s2 = lhs.split(",")
    sp = a.space
    if b.space is not sp:
        raise ValueError("jets from different spaces")
    prod = np.einsum(f"Z{s1},Z{s2}->Z{out}", a.c[sp.mI], b.c[sp.mJ])
    seg = np.add.reduceat(prod, sp.red_starts, axis=0)
    c = np.zeros((sp.T,) + seg.shape[1:])
    c[sp.red_K] = seg
    return Jet(sp, c, min(a.vx, b.vx), min(a.vy, b.vy))


def jet_matrix_inverse(m):
    """Inverse of a square-matrix-valued jet via Gauss-Jordan elimination
    with partial pivoting on constant terms."""
    n = m.shape[0]
    sp = m.space
    # work on object grid of scalar jets; n <= 4 so this stays cheap
    a = [[m[i, j] for j in range(n)] for i in range(n)]
    eye = [[sp.constant(1.0 if i == j else 0.0) for j in range(n)]
           for i in range(n)]
    vx, vy = m.vx, m.vy
    for col in range(n):
        piv = max(range(col, n), key=lambda r: abs(a[r][col].c[0]))
        if abs(a[piv][col].c[0]) < 1e-14:
            raise EvalDomainError("singular matrix in jet inversion")
        a[col], a[piv] = a[piv], a[col]
        eye[col], eye[piv] = eye[piv], eye[col]
        inv = a[col][col].reciprocal()
        a[col] = [e * inv for e in a[col]]
        eye[col] = [e * inv for e in eye[col]]
        for r in range(n):
            if r == col:
                continue
            f = a[r][col]
            a[r] = [a[r][j] - f * a[col][j] for j in range(n)]
            eye[r] = [eye[r][j] - f * eye[col][j] for j in range(n)]
    c = np.stack([np.stack([eye[i][j].c for j in range(n)], axis=-1)
                  for i in range(n)], axis=-2)
    return Jet(sp, c, vx, vy)
