"""Parallel surfaces, transported shape operators, focal angles and the reflections tau_j."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import surd
from .chart import invariant_form
from .errors import FocalTimeError, InputError, ModelConsistencyError
from .numkit import max_abs, symmetrize

FOCAL_TIME_GUARD = 1e-6


@dataclass(frozen=True)
class AngleData:
    g: int
    phi: float
    thetas: np.ndarray
    lambdas: np.ndarray
    multiplicities: tuple[int, ...]

    @property
    def mu(self) -> np.ndarray:
        """Eigenvalues exp(2 i theta_j) of B_0."""
        return np.exp(2j * self.thetas)


def angle_data(g: int, multiplicities=None, phi: float | None = None) -> AngleData:
    if g < 1:
        raise InputError("g must be positive")
    phi = math.pi / (2 * g) if phi is None else float(phi)
    if not 0 < phi < math.pi / g:
        raise InputError(f"phi={phi} outside (0, pi/g)")
    mult = tuple(multiplicities) if multiplicities is not None else (1,) * g
    if len(mult) != g:
        raise InputError("need one multiplicity per distribution")
    thetas = phi + np.arange(g) * math.pi / g
    return AngleData(g, phi, thetas, 1.0 / np.tan(thetas), mult)


def angles_from_jet(jet) -> AngleData:
    lam = np.asarray(jet.lambdas, dtype=float)
    thetas = np.arctan2(1.0, lam)  # arccot into (0, pi)
    mult = tuple(int((jet.labels == j + 1).sum()) for j in range(len(lam)))
    return AngleData(len(lam), float(thetas[0]), thetas, lam, mult)


def _twelfths(g: int, num: int) -> int:
    """num * pi / (2g) expressed in units of pi/12."""
    k = Fraction(12 * num, 2 * g)
    if k.denominator != 1:
        raise InputError(f"g={g} angles are not multiples of pi/12")
    return int(k)


def exact_lambdas(g: int) -> list[surd.Surd]:
    """cot(theta_j) for phi = pi/(2g), exactly in Q(sqrt2, sqrt3)."""
    return [surd.cot12(_twelfths(g, 1 + 2 * j)) for j in range(g)]


def exact_thetas12(g: int) -> list[int]:
    """theta_j in units of pi/12."""
    return [_twelfths(g, 1 + 2 * j) for j in range(g)]


def focal_spectrum(g: int, j: int, exact: bool = False):
    """Principal curvatures of the focal submanifold at theta_j: {cot((i - j) pi / g) : i != j}, descending."""
    if not 1 <= j <= g:
        raise InputError(f"focal index j={j} outside 1..{g}")
    if exact:
        vals = [surd.cot12(_twelfths(g, 2 * (i - j))) for i in range(1, g + 1) if i != j]
        return sorted(vals, reverse=True)
    vals = [1.0 / math.tan((i - j) * math.pi / g) for i in range(1, g + 1) if i != j]
    return sorted(vals, reverse=True)


# -- parallel surfaces ------------------------------------------------------------

def _focal_index(values, lam):
    distinct = sorted(set(np.round(values, 8)), reverse=True)
    return 1 + int(np.argmin([abs(d - lam) for d in distinct]))


def shape_at_t(A0, t: float) -> np.ndarray:
    """Shape operator of the parallel surface F_t in the frame of A0.

    Equals (I + cot t A0)(cot t I - A0)^{-1}; evaluated spectrally in the form
    (sin t + cos t A0)(cos t - sin t A0)^{-1}, which is also valid at sin t = 0.
    """
    A0 = symmetrize(np.asarray(A0, dtype=float))
    w, v = np.linalg.eigh(A0)
    s, c = math.sin(t), math.cos(t)
    if abs(s) > 0:
        cot = c / s
        for lam in w:
            if abs(cot - lam) <= FOCAL_TIME_GUARD:
                raise FocalTimeError(t, _focal_index(w, lam), math.atan2(1.0, lam))
    mapped = (s + c * w) / (c - s * w)
    return (v * mapped) @ v.T


def shape_at_t_derivative(A0, t: float) -> np.ndarray:
    """d/dt A_t = I + A_t^2 (closed form of the derivative of the spectral map)."""
    At = shape_at_t(A0, t)
    return np.eye(len(At)) + At @ At


@dataclass(frozen=True, eq=False)
class ParallelState:
    t: float
    Ft: np.ndarray
    nut: np.ndarray
    At: np.ndarray | None
    singular_values: np.ndarray = field(repr=False)

    @property
    def rank(self) -> int:
        return int((self.singular_values > 1e-8).sum())


def parallel(jet, t: float) -> ParallelState:
    x, nu = jet.x, jet.normal
    Ft = math.cos(t) * x + math.sin(t) * nu
    nut = -math.sin(t) * x + math.cos(t) * nu
    try:
        At = shape_at_t(jet.A0, t)
    except FocalTimeError:
        At = None
    n = jet.n
    sv = np.linalg.svd(math.cos(t) * np.eye(n) - math.sin(t) * jet.A0, compute_uv=False)
    return ParallelState(t, Ft, nut, At, sv)


def velocity(jet, t: float) -> np.ndarray:
    """Ambient matrix of dF_t on the tangent space: (cos t P - sin t W)."""
    return math.cos(t) * jet.P - math.sin(t) * jet.W


# -- reflections -----------------------------------------------------------------

def tau_map(surface, y, theta: float) -> np.ndarray:
    y = np.asarray(y, dtype=float)
    return math.cos(2 * theta) * y + math.sin(2 * theta) * surface.normal(y)


@dataclass(frozen=True, eq=False)
class Reflection:
    j: int
    theta: float
    source: np.ndarray
    image: np.ndarray
    dtau: np.ndarray  # ambient matrix acting on T_p; image tangent space is the same subspace
    normal_sign: float  # nu(tau(p)) = normal_sign * (sin 2theta x - cos 2theta nu(p))
    membership: float
    involution: float
    surface: object = field(repr=False)

    def __call__(self, y):
        return tau_map(self.surface, y, self.theta)

    def push(self, X) -> np.ndarray:
        return self.dtau @ X


def reflection_tau(jet, j: int, tol: float = 1e-8) -> Reflection:
    if not 1 <= j <= jet.g:
        raise InputError(f"distribution index {j} outside 1..{jet.g}")
    surf = jet.surface
    theta = float(math.atan2(1.0, jet.lambdas[j - 1]))
    x, nu = jet.x, jet.normal
    c2, s2 = math.cos(2 * theta), math.sin(2 * theta)
    image = c2 * x + s2 * nu
    member = surf.membership(image)
    if member > tol:
        raise ModelConsistencyError(f"tau_{j}(p) is off the surface (residual {member:.2e})")
    expected = s2 * x - c2 * nu
    sign = float(np.sign(surf.normal(image) @ expected))
    back = tau_map(surf, image, theta)
    dtau = c2 * jet.P - s2 * jet.W
    return Reflection(j, theta, x.copy(), image, dtau, sign, member, max_abs(back - x), surf)


def reflection_residuals(jet, refl: Reflection) -> dict[str, float]:
    """Normal flip, shape-operator intertwining and invariant-metric isometry at tau_j(p)."""
    surf = refl.surface
    x, nu, F = jet.x, jet.normal, jet.frame_f
    c2, s2 = math.cos(2 * refl.theta), math.sin(2 * refl.theta)
    flip = max_abs(surf.normal(refl.image) + (-s2 * x + c2 * nu))
    pushed = refl.dtau @ F
    A2 = shape_at_t(jet.A0, 2 * refl.theta)
    W_img = symmetrize(surf.weingarten(refl.image))
    intertwine = max_abs(W_img @ pushed + pushed @ A2)
    iso = max_abs(pushed.T @ invariant_form(surf, refl.image) @ pushed - F.T @ invariant_form(surf, x) @ F)
    return {"normal_flip": flip, "intertwining": intertwine, "isometry": iso}


def dihedral_order(surface, y, theta_a: float, theta_b: float, max_order: int, tol: float = 1e-8) -> int | None:
    """Smallest k <= max_order with (tau_a tau_b)^k (y) = y, or None."""
    z = np.asarray(y, dtype=float)
    for k in range(1, max_order + 1):
        z = tau_map(surface, tau_map(surface, z, theta_b), theta_a)
        if max_abs(z - y) < tol:
            return k
    return None
