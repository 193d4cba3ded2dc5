"""Metric expression language: parsing, evaluation, errors, round-trip."""

import numpy as np
import pytest

from finsler import catalog
from finsler.dsl import (ast_to_source, eval_ast, metric_from_dsl,
                         parse_metric, structurally_equal)
from finsler.errors import (ArityError, DslSyntaxError, EvalDomainError,
                            HomogeneityError, IndexOutOfRange,
                            UnknownIdentifier)
from finsler.metric import SamplePoint
from finsler.sampling import SamplingSpec, sample_points

EUCLID = "sqrt(norm2(y))"
FUNK = ("(sqrt((1 - norm2(x)) * norm2(y) + dot(x, y)^2) + dot(x, y))"
        " / (1 - norm2(x))")
RANDERS = "sqrt(norm2(y)) + dot(x, y)"


class TestParsing:
    def test_euclidean(self):
        ast = parse_metric(EUCLID, 3)
        assert ast.n == 3
        assert ast.constants == ()

    def test_syntax_error_position(self):
        with pytest.raises(DslSyntaxError) as info:
            parse_metric("sqrt(", 3)
        assert info.value.line == 1
        assert info.value.column == 6

    def test_multiline_position(self):
        with pytest.raises(DslSyntaxError) as info:
            parse_metric("sqrt(norm2(y))\n + @", 3)
        assert info.value.line == 2
        assert info.value.column == 4

    def test_unknown_function(self):
        with pytest.raises(UnknownIdentifier):
            parse_metric("foo(y1)", 3)

    def test_arity_error(self):
        with pytest.raises(ArityError):
            parse_metric("sqrt(y1, y2)", 3)
        with pytest.raises(ArityError):
            parse_metric("dot(x)", 3)

    def test_vector_args_only(self):
        with pytest.raises(ArityError):
            parse_metric("dot(x1, y)", 3)

    def test_index_out_of_range(self):
        with pytest.raises(IndexOutOfRange):
            parse_metric("y4", 3)
        with pytest.raises(IndexOutOfRange):
            parse_metric("x0", 3)

    def test_bare_vector_rejected(self):
        with pytest.raises(DslSyntaxError):
            parse_metric("x + y1", 3)

    def test_precedence(self):
        ast = parse_metric("1 + 2 * y1 ^ 2", 3)
        assert eval_ast(ast, [0, 0, 0], [3.0, 0, 0]) == pytest.approx(19.0)
        ast = parse_metric("-y1^2", 3)  # unary minus binds looser than ^
        assert eval_ast(ast, [0, 0, 0], [3.0, 0, 0]) == pytest.approx(-9.0)

    @pytest.mark.parametrize("src", [
        EUCLID, FUNK, RANDERS,
        "1 - 2 - 3", "2 ^ 3 ^ 2", "a * y1 + b / (y2 - c)",
        "-(y1 + y2) * y3", "6 / 2 / 3",
    ])
    def test_round_trip(self, src):
        ast = parse_metric(src, 3)
        printed = ast_to_source(ast)
        again = parse_metric(printed, 3)
        assert structurally_equal(ast, again), printed


class TestEvaluation:
    def test_euclidean_345(self):
        ast = parse_metric(EUCLID, 3)
        assert eval_ast(ast, [0, 0, 0], [3.0, 4.0, 0.0]) == pytest.approx(5.0)

    def test_funk_at_origin(self):
        ast = parse_metric(FUNK, 3)
        assert eval_ast(ast, [0.0, 0.0, 0.0],
                        [1.0, 0.0, 0.0]) == pytest.approx(1.0)

    def test_homogeneity(self):
        ast = parse_metric(FUNK, 3)
        rng = np.random.Generator(np.random.Philox(8))
        for _ in range(10):
            x = rng.uniform(-0.4, 0.4, 3)
            y = rng.normal(size=3)
            one = eval_ast(ast, list(x), list(y))
            two = eval_ast(ast, list(x), list(2.0 * y))
            assert two == pytest.approx(2.0 * one, rel=1e-12)

    def test_constants(self):
        ast = parse_metric("sqrt(norm2(y)) / (1 + kappa * norm2(x))", 3)
        assert ast.constants == ("kappa",)
        val = eval_ast(ast, [1.0, 0, 0], [2.0, 0, 0],
                       constants={"kappa": 3.0})
        assert val == pytest.approx(0.5)
        with pytest.raises(UnknownIdentifier):
            eval_ast(ast, [0, 0, 0], [1, 0, 0])

    def test_sqrt_domain_error(self):
        ast = parse_metric("sqrt(y1)", 3)
        with pytest.raises(EvalDomainError) as info:
            eval_ast(ast, [0, 0, 0], [-1.0, 1.0, 1.0])
        assert "sqrt" in str(info.value)

    def test_division_by_zero(self):
        ast = parse_metric("y1 / x1", 3)
        with pytest.raises(EvalDomainError):
            eval_ast(ast, [0.0, 0, 0], [1.0, 0, 0])

    @pytest.mark.parametrize("src,build", [
        (EUCLID, catalog.euclidean),
        (FUNK, catalog.funk),
        (RANDERS, catalog.randers_pflat),
    ])
    def test_matches_catalog(self, src, build):
        """DSL evaluation equals the native implementation at 100 random
        valid points."""
        metric = build(3)
        ast = parse_metric(src, 3)
        for p in sample_points(metric, SamplingSpec(count=100, seed=9)):
            native = metric.L(p)
            parsed = eval_ast(ast, list(p.x), list(p.y))
            assert parsed == pytest.approx(native, rel=1e-12)


class TestMetricConstruction:
    def test_jet_composition(self):
        """DSL metrics run through the whole pipeline."""
        from finsler.scalarclass import extract_k

        metric = metric_from_dsl(FUNK, 3, name="funk-dsl")
        p = SamplePoint([0.1, -0.2, 0.15], [0.7, -0.3, 1.1])
        assert extract_k(metric, p) == pytest.approx(-0.25, abs=1e-10)

    def test_homogeneity_rejection(self):
        with pytest.raises(HomogeneityError):
            metric_from_dsl("norm2(y)", 3)  # degree 2, not 1
