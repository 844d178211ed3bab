import math

import numpy as np
import pytest

from isogeo.chart import Chart, MetricChart, riemann
from isogeo.local import LocalGeometry
from isogeo.models import registry_get
from isogeo.models.geometry import jet, sample_points
from isogeo.numkit import kn_sym_tensor, max_abs


@pytest.mark.parametrize("theta", [math.pi / 2, 0.6])
def test_induced_curvature_of_small_sphere(theta):
    # a sphere of radius sin(theta) has sectional curvature 1 / sin(theta)^2
    spec = registry_get("g1-sphere", n=3, theta=theta)
    p = sample_points(spec, 1, seed=0)[0]
    j = jet(spec, p)
    G, dG, ddG = MetricChart(Chart(spec.surface, j.x, j.frame_f), form="induced").metric_derivatives()
    expected = kn_sym_tensor(G, G) / math.sin(theta) ** 2
    assert max_abs(riemann(G, dG, ddG) - expected) < 1e-5


def test_chart_stays_on_surface(g3):
    j = jet(g3, sample_points(g3, 1, seed=1)[0])
    chart = Chart(g3.surface, j.x, j.frame_f)
    for u in ([0.01, 0, 0], [0.02, -0.01, 0.03]):
        phi, d = chart.tangent_map(np.array(u))
        assert g3.surface.membership(phi) < 1e-12
        assert max_abs(d.T @ g3.surface.normal(phi)) < 1e-10


def test_chart_origin_metric_is_ghat(g3):
    p = sample_points(g3, 1, seed=2)[0]
    local = LocalGeometry(g3, p)
    j = local.jet
    assert np.allclose(local.metric[0], np.diag((1 + j.lam ** 2) / 2), atol=1e-10)
