"""Built-in reference metrics: domains, homogeneity, and oracle hooks."""

import numpy as np
import pytest

from finsler import catalog
from finsler.errors import ConfigError, DomainError
from finsler.metric import SamplePoint
from finsler.sampling import SamplingSpec, sample_points

P = SamplePoint([0.1, -0.2, 0.15], [0.7, -0.3, 1.1])


class TestConstructors:
    def test_euclidean_value(self):
        metric = catalog.euclidean(3)
        assert metric.L(SamplePoint([0, 0, 0], [3, 4, 0])) == \
            pytest.approx(5.0)

    def test_funk_domain(self):
        metric = catalog.funk(3)
        with pytest.raises(DomainError):
            metric.L(SamplePoint([1.1, 0, 0], [1, 0, 0]))
        assert metric.L(SamplePoint([0, 0, 0], [1, 0, 0])) == \
            pytest.approx(1.0)

    def test_negative_curvature_domain(self):
        metric = catalog.riemannian_space_form(3, -1.0)
        with pytest.raises(DomainError):
            metric.L(SamplePoint([2.5, 0, 0], [1, 0, 0]))

    def test_randers_domain(self):
        metric = catalog.randers_pflat(3)
        with pytest.raises(DomainError):
            metric.L(SamplePoint([0.8, 0.8, 0], [1, 0, 0]))

    def test_unknown_key(self):
        with pytest.raises(ConfigError):
            catalog.build_catalog_metric("nope", 3)

    def test_build_with_params(self):
        metric = catalog.build_catalog_metric(
            "riemannian_space_form", 3, kappa=-1.0)
        assert "kappa=-1" in metric.name


class TestHomogeneity:
    @pytest.mark.parametrize("metric", catalog.default_metrics(3),
                             ids=lambda m: m.name)
    def test_euler_degree_one(self, metric):
        points = sample_points(metric, SamplingSpec(count=10, seed=31))
        metric.check_homogeneity(points)  # raises on failure


class TestPerturbed:
    def test_a_matrix_hook(self):
        metric = catalog.perturbed_riemannian(3, seed=0)
        a = metric.a_matrix(P.x)
        np.testing.assert_allclose(a, a.T, atol=1e-14)
        assert np.linalg.eigvalsh(a)[0] > 0
        # L^2 agrees with y.a(x).y
        L = metric.L(P)
        assert L * L == pytest.approx(float(P.y @ a @ P.y), rel=1e-12)

    def test_seed_determinism(self):
        a1 = catalog.perturbed_riemannian(3, seed=4).a_matrix(P.x)
        a2 = catalog.perturbed_riemannian(3, seed=4).a_matrix(P.x)
        a3 = catalog.perturbed_riemannian(3, seed=5).a_matrix(P.x)
        np.testing.assert_array_equal(a1, a2)
        assert np.abs(a1 - a3).max() > 1e-4
