"""Per-point geometry of hypersurfaces in the unit sphere S^{n+1} of R^{n+2}.

Every surface is described ambiently: a scalar constraint ``c(y) = 0`` that cuts
it out of the sphere, the unit normal field ``nu(y)`` tangent to the sphere, and
the ambient Weingarten operator ``W(y)`` whose restriction to the tangent space is
the shape operator ``A = -(d nu)^T``. Explicit models supply closed forms, level-set
models derive everything from a polynomial.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .. import surd
from ..errors import FocalPointError, InputError, ModelConsistencyError, SamplingError
from ..numkit import DEFAULT_CLUSTER_TOL, eig_sym, symmetrize
from ..residual import Residual, residual

NEWTON_MAXITER = 50
NEWTON_TOL = 1e-12
FOCAL_GUARD = 1e-8


# -- polynomials ----------------------------------------------------------------

def _coeff(value) -> float:
    if isinstance(value, str):
        return float(surd.parse(value))
    return float(value)


class Polynomial:
    """Real polynomial on R^N given as a list of ``(coefficient, exponents)`` terms."""

    def __init__(self, terms):
        terms = list(terms)
        if not terms:
            raise InputError("polynomial needs at least one term")
        self.coeffs = np.array([_coeff(c) for c, _ in terms])
        self.exps = np.array([list(e) for _, e in terms], dtype=int)
        if self.exps.ndim != 2 or (self.exps < 0).any():
            raise InputError("exponents must be non-negative integer vectors of equal length")
        self.nvars = self.exps.shape[1]
        degrees = self.exps.sum(axis=1)
        self.degree = int(degrees.max())
        self.homogeneous = bool((degrees == self.degree).all())

    @classmethod
    def from_json(cls, items) -> "Polynomial":
        return cls((it["coeff"], it["exponents"]) for it in items)

    def _powers(self, y):
        # pw[v, k] = y_v ** k for k up to degree
        return np.vander(y, self.degree + 1, increasing=True)

    def __call__(self, y) -> float:
        y = np.asarray(y, dtype=float)
        pw = self._powers(y)
        mons = np.prod(pw[np.arange(self.nvars), self.exps], axis=1)
        return float(self.coeffs @ mons)

    def grad(self, y) -> np.ndarray:
        y = np.asarray(y, dtype=float)
        pw = self._powers(y)
        idx = np.arange(self.nvars)
        out = np.zeros(self.nvars)
        for v in range(self.nvars):
            e = self.exps.copy()
            fac = e[:, v].astype(float)
            e[:, v] = np.maximum(e[:, v] - 1, 0)
            out[v] = self.coeffs @ (fac * np.prod(pw[idx, e], axis=1))
        return out

    def hessian(self, y) -> np.ndarray:
        y = np.asarray(y, dtype=float)
        pw = self._powers(y)
        idx = np.arange(self.nvars)
        out = np.zeros((self.nvars, self.nvars))
        for a in range(self.nvars):
            for b in range(a, self.nvars):
                e = self.exps.copy()
                fac = e[:, a].astype(float)
                e[:, a] = np.maximum(e[:, a] - 1, 0)
                fac = fac * e[:, b]
                e[:, b] = np.maximum(e[:, b] - 1, 0)
                out[a, b] = out[b, a] = self.coeffs @ (fac * np.prod(pw[idx, e], axis=1))
        return out


# -- surfaces -------------------------------------------------------------------

def _tangent_projector(y, nu):
    return np.eye(len(y)) - np.outer(y, y) - np.outer(nu, nu)


class Surface:
    """Hypersurface of the unit sphere in R^N, N = n + 2."""

    n: int
    g: int

    @property
    def ambient_dim(self) -> int:
        return self.n + 2

    def constraint(self, y) -> float:
        raise NotImplementedError

    def constraint_grad(self, y) -> np.ndarray:
        raise NotImplementedError

    def normal(self, y) -> np.ndarray:
        raise NotImplementedError

    def weingarten(self, y) -> np.ndarray:
        """Ambient operator P W P whose tangential block is the shape operator."""
        raise NotImplementedError

    def tangent_projector(self, y) -> np.ndarray:
        return _tangent_projector(y, self.normal(y))

    def draw(self, rng) -> np.ndarray:
        """A starting point for projection, roughly near the surface."""
        return rng.standard_normal(self.ambient_dim)

    def membership(self, y) -> float:
        y = np.asarray(y, dtype=float)
        return max(abs(self.constraint(y)), abs(float(y @ y) - 1.0))

    def project(self, y0) -> np.ndarray:
        """Damped Newton on ``(c(y), |y|^2 - 1)`` with minimal-norm steps."""
        y = np.asarray(y0, dtype=float) / np.linalg.norm(y0)

        def resid(z):
            return np.array([self.constraint(z), z @ z - 1.0])

        r = resid(y)
        for it in range(NEWTON_MAXITER):
            if np.max(np.abs(r)) < NEWTON_TOL:
                return y / np.linalg.norm(y)
            jac = np.vstack([self.constraint_grad(y), 2 * y])
            step = -np.linalg.lstsq(jac, r, rcond=None)[0]
            lam = 1.0
            while lam > 1e-6:
                cand = y + lam * step
                rc = resid(cand)
                if np.linalg.norm(rc) < np.linalg.norm(r):
                    break
                lam *= 0.5
            y, r = cand, rc
        raise SamplingError(
            f"Newton projection did not converge after {NEWTON_MAXITER} iterations "
            f"(residual {np.max(np.abs(r)):.3e}, start {np.round(y0, 6).tolist()})"
        )

    def sample(self, rng) -> np.ndarray:
        return self.project(self.draw(rng))

    def round_factors(self, y):
        """``[(P_k, r_k, d_k)]`` when the surface is a product of round spheres through y:
        ambient projector onto the factor's tangent space, its radius and dimension."""
        return None


class GreatOrSmallSphere(Surface):
    """{y : <p, y> = cos(theta)}, with p the last coordinate axis."""

    g = 1

    def __init__(self, n: int, theta: float):
        self.n, self.theta = n, theta
        self.pole = np.zeros(n + 2)
        self.pole[-1] = 1.0

    def constraint(self, y):
        return float(self.pole @ y) - math.cos(self.theta)

    def constraint_grad(self, y):
        return self.pole.copy()

    def normal(self, y):
        y = np.asarray(y, dtype=float)
        v = self.pole - (self.pole @ y) * y
        return v / np.linalg.norm(v)

    def weingarten(self, y):
        y = np.asarray(y, dtype=float)
        c = float(self.pole @ y)
        return c / math.sqrt(1.0 - c * c) * self.tangent_projector(y)

    def draw(self, rng):
        u = rng.standard_normal(self.n + 2)
        u[-1] = 0.0
        u /= np.linalg.norm(u)
        return math.cos(self.theta) * self.pole + math.sin(self.theta) * u

    def sample(self, rng):
        return self.draw(rng)

    def round_factors(self, y):
        c = float(self.pole @ np.asarray(y, dtype=float))
        return [(self.tangent_projector(y), math.sqrt(1.0 - c * c), self.n)]


class SphereProduct(Surface):
    """S^{d1}(cos theta) x S^{d2}(sin theta) in S^{d1+d2+1}."""

    g = 2

    def __init__(self, d1: int, d2: int, theta: float):
        self.d1, self.d2, self.theta = d1, d2, theta
        self.n = d1 + d2
        self.split = d1 + 1

    def _parts(self, y):
        y = np.asarray(y, dtype=float)
        return y[: self.split], y[self.split:]

    def constraint(self, y):
        u, v = self._parts(y)
        return float(u @ u - v @ v) - math.cos(2 * self.theta)

    def constraint_grad(self, y):
        u, v = self._parts(y)
        return np.concatenate([2 * u, -2 * v])

    def normal(self, y):
        u, v = self._parts(y)
        ru, rv = np.linalg.norm(u), np.linalg.norm(v)
        nu = np.concatenate([(rv / ru) * u, -(ru / rv) * v])
        return nu / np.linalg.norm(nu)

    def weingarten(self, y):
        u, v = self._parts(y)
        ru, rv = np.linalg.norm(u), np.linalg.norm(v)
        diag = np.concatenate([np.full(len(u), -rv / ru), np.full(len(v), ru / rv)])
        p = self.tangent_projector(y)
        return p @ np.diag(diag) @ p

    def draw(self, rng):
        u = rng.standard_normal(self.split)
        v = rng.standard_normal(self.d2 + 1)
        return np.concatenate([
            math.cos(self.theta) * u / np.linalg.norm(u),
            math.sin(self.theta) * v / np.linalg.norm(v),
        ])

    def sample(self, rng):
        return self.draw(rng)

    def round_factors(self, y):
        u, v = self._parts(y)
        out = []
        for part, lo, hi, d in ((u, 0, self.split, self.d1), (v, self.split, self.n + 2, self.d2)):
            r = np.linalg.norm(part)
            P = np.zeros((self.n + 2, self.n + 2))
            P[lo:hi, lo:hi] = np.eye(hi - lo) - np.outer(part, part) / (r * r)
            out.append((P, float(r), d))
        return out


class LevelSet(Surface):
    """{poly = level} within the unit sphere; the normal points toward increasing poly."""

    def __init__(self, poly: Polynomial, level: float, n: int, g: int):
        if poly.nvars != n + 2:
            raise ModelConsistencyError(f"polynomial has {poly.nvars} variables, expected {n + 2}")
        if not poly.homogeneous or poly.degree != g:
            raise ModelConsistencyError(f"polynomial must be homogeneous of degree g={g}")
        self.poly, self.level, self.n, self.g = poly, level, n, g

    def constraint(self, y):
        return self.poly(y) - self.level

    def constraint_grad(self, y):
        return self.poly.grad(y)

    def _sphere_gradient(self, y):
        grad = self.poly.grad(y)
        return grad - (y @ grad) * y, grad

    def normal(self, y):
        y = np.asarray(y, dtype=float)
        gs, _ = self._sphere_gradient(y)
        size = np.linalg.norm(gs)
        if size < FOCAL_GUARD:
            raise FocalPointError(f"spherical gradient {size:.2e} below {FOCAL_GUARD} at {y.tolist()}")
        return gs / size

    def weingarten(self, y):
        y = np.asarray(y, dtype=float)
        gs, grad = self._sphere_gradient(y)
        size = np.linalg.norm(gs)
        if size < FOCAL_GUARD:
            raise FocalPointError(f"spherical gradient {size:.2e} below {FOCAL_GUARD} at {y.tolist()}")
        nu = gs / size
        p = _tangent_projector(y, nu)
        radial = float(y @ grad)
        return -p @ (self.poly.hessian(y) - radial * np.eye(len(y))) @ p / size


def build_surface(spec) -> Surface:
    if spec.kind == "explicit":
        if spec.name == "g1-sphere":
            return GreatOrSmallSphere(spec.n, spec.params["theta"])
        if spec.name == "g2-product":
            return SphereProduct(spec.params["d1"], spec.params["d2"], spec.params["theta"])
        raise ModelConsistencyError(f"no explicit surface for {spec.name}")
    if spec.kind == "level-set":
        poly = Polynomial.from_json(spec.params["poly"])
        surf = LevelSet(poly, spec.params["level"], spec.n, spec.g)
        _validate_level_set(spec, surf)
        return surf
    raise SamplingError(f"model {spec.name} is tabulated and has no point geometry")


def _validate_level_set(spec, surf: LevelSet) -> None:
    rng = np.random.default_rng(12345)
    y = rng.standard_normal(surf.ambient_dim)
    for s in (0.5, 2.0, -1.3):
        if abs(surf.poly(s * y) - s ** spec.g * surf.poly(y)) > 1e-10 * max(1.0, abs(surf.poly(y))) * max(1.0, abs(s) ** spec.g):
            raise ModelConsistencyError(f"{spec.name}: polynomial fails the homogeneity scaling test")
    pts = [SurfacePoint(surf.sample(rng), spec) for _ in range(3)]
    bad = [r for r in model_self_test(spec, pts, surface=surf)
           if r.name != "self.angle_structure" and not r.passed]
    if bad:
        raise ModelConsistencyError(f"{spec.name} failed load-time validation: "
                                    + "; ".join(f"{r.name}={r.value:.3e}" for r in bad))


# -- points and jets ------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class SurfacePoint:
    x: np.ndarray
    model: object = field(repr=False)

    def __post_init__(self):
        x = np.asarray(self.x, dtype=float)
        x.setflags(write=False)
        object.__setattr__(self, "x", x)


def sample_points(spec, count: int, seed: int) -> list[SurfacePoint]:
    if spec.kind == "tabulated":
        raise SamplingError(f"model {spec.name} is tabulated and has no point geometry")
    if count < 1:
        raise InputError("count must be positive")
    surf = spec.surface
    rng = np.random.default_rng(seed)
    return [SurfacePoint(surf.sample(rng), spec) for _ in range(count)]


def tangent_basis(y, nu) -> np.ndarray:
    """Orthonormal basis (columns) of the complement of span{y, nu}."""
    q, _ = np.linalg.qr(np.column_stack([y, nu, np.eye(len(y))]))
    return q[:, 2:]


@dataclass(frozen=True, eq=False)
class SurfaceJet:
    point: SurfacePoint
    normal: np.ndarray
    frame_f: np.ndarray  # ambient columns, g0-orthonormal eigenvectors of A0
    frame_e: np.ndarray  # ambient columns, ghat-orthonormal
    labels: np.ndarray  # 1-based distribution index of each frame vector
    A0: np.ndarray  # shape operator in frame_f
    lambdas: np.ndarray  # distinct principal curvatures, descending
    W: np.ndarray = field(repr=False)  # ambient Weingarten operator at x

    @property
    def x(self) -> np.ndarray:
        return self.point.x

    @property
    def model(self):
        return self.point.model

    @property
    def surface(self) -> Surface:
        return self.point.model.surface

    @property
    def n(self) -> int:
        return self.frame_f.shape[1]

    @property
    def g(self) -> int:
        return len(self.lambdas)

    @property
    def lam(self) -> np.ndarray:
        """Principal curvature attached to each frame vector."""
        return self.lambdas[self.labels - 1]

    @property
    def sigma(self) -> np.ndarray:
        return np.sqrt(2.0 / (1.0 + self.lam ** 2))

    @property
    def P(self) -> np.ndarray:
        return self.frame_f @ self.frame_f.T

    def distribution(self, j: int) -> np.ndarray:
        """f-frame columns spanning D_j (1-based)."""
        return self.frame_f[:, self.labels == j]


def jet(spec, p: SurfacePoint, cluster_tol: float = DEFAULT_CLUSTER_TOL) -> SurfaceJet:
    surf = spec.surface
    x = np.asarray(p.x, dtype=float)
    nu = surf.normal(x)
    W = symmetrize(surf.weingarten(x))
    basis = tangent_basis(x, nu)
    clusters = eig_sym(symmetrize(basis.T @ W @ basis), cluster_tol)
    if len(clusters.values) != spec.g or clusters.multiplicities != tuple(spec.multiplicities):
        raise ModelConsistencyError(
            f"{spec.name}: shape operator spectrum {np.round(clusters.raw, 8).tolist()} does not cluster "
            f"into multiplicities {spec.multiplicities}"
        )
    frame_f = basis @ clusters.basis
    labels = clusters.labels + 1
    lam = clusters.values[labels - 1]
    frame_e = frame_f * np.sqrt(2.0 / (1.0 + lam ** 2))
    A0 = symmetrize(frame_f.T @ W @ frame_f)
    return SurfaceJet(p, nu, frame_f, frame_e, labels, A0, clusters.values, W)


def model_self_test(spec, points, tol: float = 1e-6, surface: Surface | None = None) -> list[Residual]:
    """Constancy of the principal curvatures, angle structure and multiplicity pattern."""
    if len(points) < 2:
        raise InputError("model_self_test needs at least two points")
    surf = surface or spec.surface
    spectra, mismatched, measured = [], 0, []
    for p in points:
        x = np.asarray(p.x, dtype=float)
        nu = surf.normal(x)
        basis = tangent_basis(x, nu)
        A = symmetrize(basis.T @ surf.weingarten(x) @ basis)
        spectra.append(np.sort(np.linalg.eigvalsh(A))[::-1])
        clusters = eig_sym(A)
        if clusters.multiplicities != tuple(spec.multiplicities):
            mismatched += 1
        measured.append(clusters.values)
    spectra = np.array(spectra)
    ctx = {"model": spec.name, "points": len(points)}
    const = float(np.max(np.abs(spectra - spectra[0])))
    g = spec.g

    def spacing(values):
        # angles theta_j = arccot(lambda_j) in (0, pi) must be phi + (j - 1) pi / g
        if len(values) != g:
            return math.inf
        th = np.sort(np.arctan2(1.0, np.asarray(values)))
        return float(np.max(np.abs(th - th[0] - np.arange(g) * math.pi / g)))

    angle = max(spacing(v) for v in measured)
    return [
        residual("self.spectrum_constancy", const, tol, **ctx),
        residual("self.angle_structure", angle, tol, **ctx),
        residual("self.multiplicities", float(mismatched), 0.5, **ctx),
    ]
