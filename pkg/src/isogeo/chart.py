"""Local graph charts over the tangent space and intrinsic curvature of the invariant metric.

The chart at ``x`` with tangent basis ``E`` is ``phi(u) = x + E u + a(u) x + b(u) nu``,
where ``(a, b)`` is the Newton solution of ``|phi| = 1, c(phi) = 0``. Its differential
follows from differentiating the two constraints, so only the metric needs finite
differences.
"""
from __future__ import annotations

import numpy as np

from .errors import StencilError
from .numkit import symmetrize

CHART_MAXITER = 50
CHART_TOL = 1e-15
METRIC_STEP = 1e-4


class Chart:
    def __init__(self, surface, x, basis):
        self.surface = surface
        self.x = np.asarray(x, dtype=float)
        self.nu = surface.normal(self.x)
        self.basis = np.asarray(basis, dtype=float)

    @property
    def dim(self) -> int:
        return self.basis.shape[1]

    def _solve(self, v):
        x, nu, surf = self.x, self.nu, self.surface
        a = np.sqrt(max(1.0 - v @ v, 0.0)) - 1.0
        b = 0.0
        for _ in range(CHART_MAXITER):
            phi = x + v + a * x + b * nu
            r = np.array([phi @ phi - 1.0, surf.constraint(phi)])
            grad = surf.constraint_grad(phi)
            jac = np.array([[2 * phi @ x, 2 * phi @ nu], [grad @ x, grad @ nu]])
            step = np.linalg.solve(jac, -r)
            a, b = a + step[0], b + step[1]
            if np.max(np.abs(step)) < CHART_TOL:
                break
        else:
            raise StencilError(v.tolist(), "chart Newton solve did not converge")
        return x + v + a * x + b * nu

    def through(self, v) -> np.ndarray:
        """Point of the surface over the ambient tangent displacement ``v``."""
        return self._solve(np.asarray(v, dtype=float))

    def point(self, u) -> np.ndarray:
        return self._solve(self.basis @ np.asarray(u, dtype=float))

    def tangent_map(self, u):
        """``(phi(u), dphi(u))`` with the columns of dphi the coordinate vectors."""
        phi = self.point(u)
        grad = self.surface.constraint_grad(phi)
        lhs = np.array([[phi @ self.x, phi @ self.nu], [grad @ self.x, grad @ self.nu]])
        rhs = -np.vstack([phi @ self.basis, grad @ self.basis])
        ab = np.linalg.solve(lhs, rhs)
        return phi, self.basis + np.outer(self.x, ab[0]) + np.outer(self.nu, ab[1])

    def curve(self, X):
        """``h -> phi(h X)`` for an ambient tangent vector X at the base point."""
        X = np.asarray(X, dtype=float)
        return lambda h: self.through(h * X)


def invariant_form(surface, y) -> np.ndarray:
    """Ambient matrix Q with ghat(U, V) = U^T Q V for tangent U, V at y."""
    W = symmetrize(surface.weingarten(y))
    P = surface.tangent_projector(y)
    return 0.5 * (P + W @ W)


def induced_form(surface, y) -> np.ndarray:
    return surface.tangent_projector(y)


FORMS = {"hat": invariant_form, "induced": induced_form}


class MetricChart:
    """A metric (the invariant one by default, or the induced g0) in chart coordinates."""

    def __init__(self, chart: Chart, step: float = METRIC_STEP, form: str = "hat"):
        self.chart, self.h = chart, step
        self.form = FORMS[form]
        self._cache: dict[tuple, np.ndarray] = {}

    def metric(self, u) -> np.ndarray:
        key = tuple(np.round(np.asarray(u, dtype=float) / self.h * 4).astype(int))
        if key not in self._cache:
            phi, d = self.chart.tangent_map(u)
            self._cache[key] = symmetrize(d.T @ self.form(self.chart.surface, phi) @ d)
        return self._cache[key]

    def _u(self, *pairs):
        u = np.zeros(self.chart.dim)
        for i, s in pairs:
            u[i] += s * self.h
        return u

    def metric_derivatives(self):
        """``(G, dG, ddG)`` at the chart origin; dG[k] = d_k G, ddG[k, l] = d_k d_l G."""
        n, h = self.chart.dim, self.h
        G = self.metric(np.zeros(n))
        dG = np.zeros((n, n, n))
        ddG = np.zeros((n, n, n, n))
        for k in range(n):
            gp, gm = self.metric(self._u((k, 1))), self.metric(self._u((k, -1)))
            dG[k] = (gp - gm) / (2 * h)
            ddG[k, k] = (gp - 2 * G + gm) / (h * h)
        for k in range(n):
            for l in range(k + 1, n):
                mixed = (
                    self.metric(self._u((k, 1), (l, 1)))
                    - self.metric(self._u((k, 1), (l, -1)))
                    - self.metric(self._u((k, -1), (l, 1)))
                    + self.metric(self._u((k, -1), (l, -1)))
                ) / (4 * h * h)
                ddG[k, l] = ddG[l, k] = mixed
        return G, dG, ddG


def christoffel(G, dG):
    """Gamma[k, i, j] = Gamma^k_{ij} from the Koszul formula."""
    Ginv = np.linalg.inv(G)
    # lower[l, i, j] = 1/2 (d_i G_jl + d_j G_il - d_l G_ij)
    lower = 0.5 * (np.einsum("ijl->lij", dG) + np.einsum("jil->lij", dG) - dG)
    return np.einsum("kl,lij->kij", Ginv, lower)


def christoffel_derivative(G, dG, ddG):
    """dGamma[m, k, i, j] = d_m Gamma^k_{ij}."""
    Ginv = np.linalg.inv(G)
    dGinv = -np.einsum("ka,mab,bl->mkl", Ginv, dG, Ginv)
    lower = 0.5 * (np.einsum("ijl->lij", dG) + np.einsum("jil->lij", dG) - dG)
    # ddG[m, i, j, l] = d_m d_i G_jl
    dlower = 0.5 * (
        np.einsum("mijl->mlij", ddG) + np.einsum("mjil->mlij", ddG) - np.einsum("mlij->mlij", ddG)
    )
    return np.einsum("mkl,lij->mkij", dGinv, lower) + np.einsum("kl,mlij->mkij", Ginv, dlower)


def riemann(G, dG, ddG) -> np.ndarray:
    """R[i, j, k, l] = g(R(d_i, d_j) d_k, d_l) with R(X,Y) = [nabla_X, nabla_Y] - nabla_[X,Y].

    With this convention the unit sphere satisfies R = g o g (Kulkarni-Nomizu)."""
    gam = christoffel(G, dG)
    dgam = christoffel_derivative(G, dG, ddG)
    # R^l_{ijk} = d_i Gamma^l_{jk} - d_j Gamma^l_{ik} + Gamma^l_{im} Gamma^m_{jk} - Gamma^l_{jm} Gamma^m_{ik}
    up = (
        np.einsum("iljk->ijkl", dgam)
        - np.einsum("jlik->ijkl", dgam)
        + np.einsum("lim,mjk->ijkl", gam, gam)
        - np.einsum("ljm,mik->ijkl", gam, gam)
    )
    return np.einsum("ijkm,ml->ijkl", up, G)
