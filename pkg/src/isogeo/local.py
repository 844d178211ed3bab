"""Chart-based local differential geometry at one surface point.

Coordinates are graph coordinates over the tangent space with basis frame_f, so the
coordinate vectors at the origin are exactly the f-frame. Spatial derivatives of alpha
and B are central differences of chart-coordinate components.
"""
from __future__ import annotations

from functools import cached_property

import numpy as np

from .chart import Chart, MetricChart, christoffel, riemann
from .models.geometry import jet as make_jet, tangent_basis
from .numkit import FIRST_DERIVATIVE, NESTED_DERIVATIVE, StepPolicy, symmetrize
from .quadric import alpha_tensor_at, b_operator, invariant_set


class LocalGeometry:
    def __init__(self, spec, point, policy: StepPolicy = FIRST_DERIVATIVE,
                 nested: StepPolicy = NESTED_DERIVATIVE):
        self.spec, self.point = spec, point
        self.policy, self.nested = policy, nested
        self.jet = make_jet(spec, point)
        self.surface = spec.surface
        self.chart = Chart(self.surface, self.jet.x, self.jet.frame_f)

    # -- metric -------------------------------------------------------------------
    @cached_property
    def metric(self):
        return MetricChart(self.chart, self.nested.step()).metric_derivatives()

    @cached_property
    def induced_metric(self):
        return MetricChart(self.chart, self.nested.step(), form="induced").metric_derivatives()

    @cached_property
    def gamma(self) -> np.ndarray:
        G, dG, _ = self.metric
        return christoffel(G, dG)

    @cached_property
    def gamma0(self) -> np.ndarray:
        G, dG, _ = self.induced_metric
        return christoffel(G, dG)

    @cached_property
    def riemann(self) -> np.ndarray:
        """Curvature of ghat in f-frame coordinates."""
        return riemann(*self.metric)

    @cached_property
    def riemann0(self) -> np.ndarray:
        """Curvature of the induced metric g0 in f-frame coordinates."""
        return riemann(*self.induced_metric)

    # -- alpha and B in coordinates --------------------------------------------------
    @cached_property
    def alpha(self) -> np.ndarray:
        return alpha_tensor_at(self.surface, self.jet.x, self.jet.frame_f, "lift", self.policy)

    @cached_property
    def invariants(self):
        return invariant_set(self.jet, alpha_f=self.alpha)

    def alpha_coords(self, u) -> np.ndarray:
        phi, d = self.chart.tangent_map(u)
        return alpha_tensor_at(self.surface, phi, d, "lift", self.policy)

    def b_coords(self, u) -> np.ndarray:
        """B_0 at phi(u) as a (1,1)-tensor in chart coordinates: B[a, b] = dx^a(B d_b)."""
        phi, d = self.chart.tangent_map(u)
        W = symmetrize(self.surface.weingarten(phi))
        T = tangent_basis(phi, self.surface.normal(phi))
        B_amb = T @ b_operator(T.T @ W @ T) @ T.T
        return np.linalg.pinv(d) @ B_amb @ d

    def _partial(self, fn) -> np.ndarray:
        h = self.nested.step()
        n = self.jet.n
        out = []
        for i in range(n):
            e = np.zeros(n)
            e[i] = h
            out.append((fn(e) - fn(-e)) / (2 * h))
        return np.array(out)

    @cached_property
    def dalpha(self) -> np.ndarray:
        """dalpha[i, j, k, l] = d_i alpha_{jkl}."""
        return self._partial(self.alpha_coords)

    @cached_property
    def b0(self) -> np.ndarray:
        return self.b_coords(np.zeros(self.jet.n))

    @cached_property
    def db(self) -> np.ndarray:
        return self._partial(self.b_coords)

    # -- covariant derivatives ----------------------------------------------------------
    @cached_property
    def nabla_alpha(self) -> np.ndarray:
        """(nabla_i alpha)_{jkl} for the Levi-Civita connection of ghat."""
        gam, a = self.gamma, self.alpha
        return (
            self.dalpha
            - np.einsum("mij,mkl->ijkl", gam, a)
            - np.einsum("mik,jml->ijkl", gam, a)
            - np.einsum("mil,jkm->ijkl", gam, a)
        )

    @cached_property
    def nabla_b(self) -> np.ndarray:
        """(nabla_i B)^a_b."""
        gam, B = self.gamma, self.b0
        return self.db + np.einsum("aic,cb->iab", gam, B) - np.einsum("ac,cib->iab", B, gam)
