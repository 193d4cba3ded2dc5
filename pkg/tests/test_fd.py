"""Finite-difference pipeline as an independent cross-check of the jet
engine."""

import numpy as np
import pytest

from finsler import catalog
from finsler.engine import ChartJets
from finsler.fdpipe import FDPipeline
from finsler.metric import SamplePoint
from finsler.sampling import SamplingSpec, sample_points

P = SamplePoint([0.1, -0.2, 0.15], [0.7, -0.3, 1.1])


class TestAgreement:
    def test_funk_all_quantities(self):
        metric = catalog.funk(3)
        fd = FDPipeline(metric)
        for p in sample_points(metric, SamplingSpec(count=5, seed=41)):
            cj = ChartJets(metric, p, 2, 4)
            T = fd.tensors(p)
            for name, jet in [("g", cj.g), ("G", cj.G), ("N", cj.N),
                              ("Rhat", cj.Rhat), ("H", cj.H),
                              ("k", cj.k)]:
                jv = np.asarray(jet.value())
                fv = np.asarray(T[name])
                rel = np.abs(jv - fv).max() / max(np.abs(jv).max(), 1e-12)
                assert rel < 1e-4, (name, rel)

    def test_c_form_randers(self):
        metric = catalog.randers_pflat(3)
        fd = FDPipeline(metric)
        C_fd = fd.c_form(P)
        C_jet = ChartJets(metric, P, 2, 5).C.value()
        assert np.abs(C_fd - C_jet).max() < 1e-3

    def test_c_form_vanishes_on_constant(self):
        fd = FDPipeline(catalog.funk(3))
        assert np.abs(fd.c_form(P)).max() < 1e-3

    def test_euclidean_exact_zeros(self):
        fd = FDPipeline(catalog.euclidean(3))
        T = fd.tensors(P)
        assert np.abs(T["G"]).max() < 1e-10
        assert np.abs(T["Rhat"]).max() < 1e-9
        assert abs(T["k"]) < 1e-9

    def test_space_form_k(self):
        fd = FDPipeline(catalog.riemannian_space_form(3, 1.0))
        assert fd.tensors(P)["k"] == pytest.approx(1.0, abs=1e-4)
