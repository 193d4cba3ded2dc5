"""Truncated-Taylor jet arithmetic against closed-form calculus."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from finsler.errors import EvalDomainError, OrderUnsupported
from finsler.jets import (Jet, d_x, d_y, get_space, jcos, jet_einsum,
                          jet_matrix_inverse, jexp, jlog, jsin, jsqrt,
                          jstack)


def seed(n=2, px=2, py=3, x=(0.3, -0.2), y=(1.1, 0.7)):
    sp = get_space(n, px, py)
    return sp.seed(list(x), list(y))


class TestBasics:
    def test_polynomial_partials(self):
        xs, ys = seed()
        f = xs[0] * ys[1] * ys[1] + 2.0 * ys[0]
        assert f.value() == pytest.approx(0.3 * 0.49 + 2.2)
        assert f.partial(xs=(0,), ys=(1, 1)) == pytest.approx(2.0)
        assert f.partial(ys=(0,)) == pytest.approx(2.0)
        assert f.partial(xs=(0,)) == pytest.approx(0.49)

    def test_quotient_and_power(self):
        xs, ys = seed()
        f = (1.0 + xs[0] * xs[0]) / (2.0 - ys[0])
        x0, y0 = 0.3, 1.1
        assert f.value() == pytest.approx((1 + x0 ** 2) / (2 - y0))
        assert f.partial(ys=(0,)) == pytest.approx(
            (1 + x0 ** 2) / (2 - y0) ** 2)
        g = ys[0] ** 1.5
        assert g.partial(ys=(0,)) == pytest.approx(1.5 * y0 ** 0.5)
        assert g.partial(ys=(0, 0)) == pytest.approx(0.75 * y0 ** -0.5)

    def test_schwarz_symmetry(self):
        xs, ys = seed()
        f = jsqrt(ys[0] * ys[0] + ys[1] * ys[1]) * jexp(xs[0] * ys[1])
        a = f.partial(xs=(0,), ys=(0, 1))
        b = f.partial(xs=(0,), ys=(1, 0))
        assert a == b  # identical storage: exact equality

    def test_order_budget(self):
        xs, ys = seed(px=1, py=2)
        f = xs[0] * ys[0]
        with pytest.raises(OrderUnsupported):
            f.dx(0).dx(0)
        with pytest.raises(OrderUnsupported):
            f.dy(0).dy(0).dy(0)
        with pytest.raises(OrderUnsupported):
            f.partial(xs=(0, 0))


class TestAnalytic:
    y0 = 1.1

    def _y(self):
        xs, ys = seed()
        return ys[0]

    def test_sqrt(self):
        f = jsqrt(self._y())
        assert f.partial(ys=(0,)) == pytest.approx(0.5 / math.sqrt(self.y0))
        assert f.partial(ys=(0, 0)) == pytest.approx(
            -0.25 * self.y0 ** -1.5)

    def test_exp_log(self):
        f = jexp(self._y())
        for order in range(4):
            assert f.partial(ys=(0,) * order) == pytest.approx(
                math.exp(self.y0))
        g = jlog(self._y())
        assert g.value() == pytest.approx(math.log(self.y0))
        assert g.partial(ys=(0,)) == pytest.approx(1.0 / self.y0)
        assert g.partial(ys=(0, 0)) == pytest.approx(-self.y0 ** -2)

    def test_sin_cos(self):
        s, c = jsin(self._y()), jcos(self._y())
        assert s.partial(ys=(0,)) == pytest.approx(math.cos(self.y0))
        assert c.partial(ys=(0,)) == pytest.approx(-math.sin(self.y0))
        ident = s * s + c * c
        assert ident.value() == pytest.approx(1.0)
        assert abs(ident.partial(ys=(0,))) < 1e-12

    def test_sqrt_domain(self):
        xs, ys = seed()
        with pytest.raises(EvalDomainError):
            jsqrt(ys[0] - 5.0)


class TestTensorStructure:
    def test_stack_and_derivative_axes(self):
        xs, ys = seed()
        v = jstack(ys)  # the direction vector as a jet
        assert v.shape == (2,)
        dv = d_y(v)  # identity matrix
        np.testing.assert_allclose(dv.value(), np.eye(2), atol=1e-14)
        assert np.allclose(d_x(v).value(), 0.0)

    def test_einsum_matches_manual(self):
        xs, ys = seed()
        a = jstack([ys[0] * ys[1], xs[0] + ys[0]])
        b = jstack([jexp(xs[0]), ys[1] * 2.0])
        dot = jet_einsum("i,i->", a, b)
        manual = ys[0] * ys[1] * jexp(xs[0]) + (xs[0] + ys[0]) * ys[1] * 2.0
        np.testing.assert_allclose(dot.c, manual.c, atol=1e-13)

    def test_matrix_inverse(self):
        xs, ys = seed()
        m = jstack([jstack([1.0 + ys[0] * ys[0], xs[0] * ys[1]]),
                    jstack([xs[0] * ys[1], 2.0 + ys[1]])]).tr(1, 0)
        inv = jet_matrix_inverse(m)
        prod = jet_einsum("ij,jk->ik", m, inv)
        np.testing.assert_allclose(prod.c[0], np.eye(2), atol=1e-12)
        # all derivative coefficients of the product vanish
        assert np.abs(prod.c[1:]).max() < 1e-12

    def test_trace_and_transpose(self):
        xs, ys = seed()
        m = jstack([jstack([ys[0], ys[1]]),
                    jstack([xs[0], ys[0] * ys[1]])]).tr(1, 0)
        tr = m.trace(0, 1)
        manual = ys[0] + ys[0] * ys[1]
        np.testing.assert_allclose(tr.c, manual.c, atol=1e-14)
        mt = m.tr(1, 0)
        np.testing.assert_allclose(mt.value(), m.value().T)


@settings(max_examples=25, deadline=None)
@given(st.lists(st.floats(-2.0, 2.0), min_size=2, max_size=2),
       st.lists(st.floats(0.5, 2.0), min_size=2, max_size=2))
def test_product_rule_property(xv, yv):
    """d(fg) = f dg + g df, for random base points."""
    sp = get_space(2, 1, 4)
    xs, ys = sp.seed(xv, yv)
    f = ys[0] * ys[0] + xs[1]
    g = ys[1] + xs[0] * ys[0]
    lhs = (f * g).dy(0)
    rhs = f.dy(0) * g + f * g.dy(0)
    # compare values and partials within the common validity budget
    assert lhs.value() == pytest.approx(rhs.value(), abs=1e-10)
    for q in range(2):
        assert lhs.partial(ys=(q,)) == pytest.approx(
            rhs.partial(ys=(q,)), abs=1e-10)
        assert lhs.partial(xs=(q,)) == pytest.approx(
            rhs.partial(xs=(q,)), abs=1e-10)
