"""Torsion, full curvature, deviation tensor, and the universal
identities relating them; oracles are the brute-force Riemann tensor on
Riemannian entries and closed forms on constant-curvature models."""

import numpy as np
import pytest

from finsler import catalog
from finsler.curvature import (bianchi_residual, curvature_bundle,
                               deviation, h_curvature, vh_torsion)
from finsler.engine import ChartJets
from finsler.metric import SamplePoint
from finsler.sampling import SamplingSpec, sample_points
from finsler.suites import suite_bianchi
from oracles import deviation_fd, riemann_fd, space_form_a

P = SamplePoint([0.1, -0.2, 0.15], [0.7, -0.3, 1.1])

ALL_METRICS = [
    catalog.euclidean(3),
    catalog.riemannian_space_form(3, 1.0),
    catalog.riemannian_space_form(3, -1.0),
    catalog.funk(3),
    catalog.randers_pflat(3),
    catalog.perturbed_riemannian(3, seed=0),
]


class TestTorsion:
    def test_euclidean_zero(self):
        assert np.abs(
            vh_torsion(catalog.euclidean(3), P).components).max() == 0.0

    @pytest.mark.parametrize("metric", ALL_METRICS, ids=lambda m: m.name)
    def test_antisymmetry(self, metric):
        arr = vh_torsion(metric, P).components
        scale = max(1.0, np.abs(arr).max())
        assert np.abs(arr + arr.transpose(0, 2, 1)).max() / scale < 1e-10

    @pytest.mark.parametrize("kappa", [1.0, -1.0])
    def test_constant_curvature_closed_form(self, kappa):
        metric = catalog.riemannian_space_form(3, kappa)
        cj = ChartJets(metric, P, 2, 4)
        Rhat = cj.Rhat.value()
        L, ell = cj.L.value(), cj.ell.value()
        pred = kappa * L * (np.einsum("x,iy->ixy", ell, np.eye(3))
                            - np.einsum("y,ix->ixy", ell, np.eye(3)))
        np.testing.assert_allclose(Rhat, pred, atol=1e-10)


class TestDeviation:
    def test_euclidean_zero(self):
        assert np.abs(
            deviation(catalog.euclidean(3), P).components).max() == 0.0

    @pytest.mark.parametrize("kappa", [1.0, -1.0])
    def test_riemann_oracle_space_form(self, kappa):
        metric = catalog.riemannian_space_form(3, kappa)
        H = deviation(metric, P).components
        oracle = deviation_fd(space_form_a(kappa), P.x, P.y)
        np.testing.assert_allclose(H, oracle, atol=1e-6)
        # closed form: H = kappa L^2 phi
        cj = ChartJets(metric, P, 2, 4)
        pred = kappa * cj.L.value() ** 2 * cj.phi.value()
        np.testing.assert_allclose(H, pred, atol=1e-10)

    def test_riemann_oracle_perturbed(self):
        metric = catalog.perturbed_riemannian(3, seed=0)
        H = deviation(metric, P).components
        oracle = deviation_fd(metric.a_matrix, P.x, P.y)
        assert np.abs(H - oracle).max() < 1e-5 * max(1, np.abs(H).max())

    @pytest.mark.parametrize("metric", ALL_METRICS, ids=lambda m: m.name)
    def test_kills_direction(self, metric):
        H = deviation(metric, P).components
        assert np.abs(H @ P.y).max() < 1e-10 * max(1, np.abs(H).max())


class TestFullCurvature:
    def test_euclidean_zero(self):
        R, Rlow = h_curvature(catalog.euclidean(3), P)
        assert np.abs(R.components).max() == 0.0
        assert np.abs(Rlow.components).max() == 0.0

    @pytest.mark.parametrize("metric", ALL_METRICS, ids=lambda m: m.name)
    def test_contracts_to_torsion(self, metric):
        bundle = curvature_bundle(metric, P)
        back = np.einsum("ixyz,z->ixy", bundle.R.components, P.y)
        scale = max(1.0, np.abs(bundle.Rhat.components).max())
        assert np.abs(back - bundle.Rhat.components).max() / scale < 1e-10

    @pytest.mark.parametrize("kappa", [1.0, -1.0])
    def test_lowered_matches_riemann_oracle(self, kappa):
        metric = catalog.riemannian_space_form(3, kappa)
        _, Rlow = h_curvature(metric, P)
        riem = riemann_fd(space_form_a(kappa), P.x)
        a0 = space_form_a(kappa)(P.x)
        lowered = np.einsum("wi,ijkl->jklw", a0, riem)
        oracle = lowered.transpose(2, 1, 0, 3)  # slot arrangement
        np.testing.assert_allclose(Rlow.components, oracle, atol=1e-6)

    @pytest.mark.parametrize("kappa", [1.0, -1.0])
    def test_lowered_closed_form(self, kappa):
        metric = catalog.riemannian_space_form(3, kappa)
        cj = ChartJets(metric, P, 2, 5)
        g = cj.g.value()
        pred = kappa * (np.einsum("zx,yw->xyzw", g, g)
                        - np.einsum("zy,xw->xyzw", g, g))
        np.testing.assert_allclose(cj.R_low.value(), pred, atol=1e-10)


class TestUniversalIdentities:
    @pytest.mark.parametrize("metric", ALL_METRICS, ids=lambda m: m.name)
    def test_reconstruction_from_deviation(self, metric):
        """The torsion is one third of the antisymmetrized fiber
        derivative of the deviation tensor — on every metric, including
        the non-isotropic control."""
        cj = ChartJets(metric, P, 3, 5)
        res = suite_bianchi(cj)
        assert res["torsion_from_deviation"] < 1e-10

    @pytest.mark.parametrize("metric", ALL_METRICS, ids=lambda m: m.name)
    def test_bianchi_cyclic_sum(self, metric):
        assert bianchi_residual(metric, P) < 1e-10

    def test_bianchi_funk_many_points(self):
        metric = catalog.funk(3)
        for p in sample_points(metric, SamplingSpec(count=20, seed=17)):
            assert bianchi_residual(metric, p) < 1e-6

    def test_bianchi_sphere(self):
        metric = catalog.riemannian_space_form(3, 1.0)
        for p in sample_points(metric, SamplingSpec(count=5, seed=18)):
            assert bianchi_residual(metric, p) < 1e-6
