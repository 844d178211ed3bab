"""The Lagrangian lift into the complex quadric and its invariants.

Ambient conventions: points of the surface are unit vectors y in R^N, tangent vectors
are ambient vectors orthogonal to y and nu(y), and W(y) is the ambient Weingarten
operator. The lift is F^_t = (F_t + i nu_t)/sqrt2 and on tangent vectors
dF^_0 X = (X - i W X)/sqrt2. Hermitian products are <u, v>_h = sum u_k conj(v_k).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .chart import Chart, invariant_form
from .errors import InputError
from .family import AngleData, angles_from_jet, shape_at_t
from .numkit import FIRST_DERIVATIVE, StepPolicy, fd_dir, kn_skew, kn_sym, max_abs, symmetrize
from .models.geometry import tangent_basis

SQRT2 = math.sqrt(2.0)


def herm(u, v) -> complex:
    return complex(np.sum(np.asarray(u) * np.conj(v)))


# -- Stiefel points and the lift ------------------------------------------------

@dataclass(frozen=True, eq=False)
class StiefelPoint:
    z: np.ndarray

    @property
    def null_residual(self) -> float:
        return abs(complex(np.sum(self.z * self.z)))

    @property
    def norm_residual(self) -> float:
        return abs(float(np.real(herm(self.z, self.z))) - 1.0)


def lift(state) -> StiefelPoint:
    return StiefelPoint((state.Ft + 1j * state.nut) / SQRT2)


def dlift_matrix(surface, y) -> np.ndarray:
    """Ambient complex matrix of dF^_0 at y, applied to (projections onto) T_y."""
    W = symmetrize(surface.weingarten(y))
    P = surface.tangent_projector(y)
    return (P - 1j * W) / SQRT2


@dataclass(frozen=True, eq=False)
class LagrangianJet:
    base: StiefelPoint
    dF: np.ndarray  # N x n, images of frame_e
    frame: np.ndarray = field(repr=False)

    @property
    def N(self) -> np.ndarray:
        """Normal vectors N_Z = -i dF^_0 Z."""
        return -1j * self.dF

    @property
    def horizontality(self) -> float:
        z = self.base.z
        return max(max_abs(z @ self.dF), max_abs(np.conj(self.dF).T @ z))

    @property
    def lagrangian(self) -> float:
        # Re<i u_a, u_b>_h for all a, b
        return max_abs(np.real(1j * self.dF.T @ np.conj(self.dF)))


def lagrangian_jet(jet) -> LagrangianJet:
    z = (jet.x + 1j * jet.normal) / SQRT2
    M = dlift_matrix(jet.surface, jet.x)
    return LagrangianJet(StiefelPoint(z), M @ jet.frame_e, jet.frame_e)


# -- the invariant metric ----------------------------------------------------------

def ghat(jet, frame=None) -> np.ndarray:
    """ghat = g0(., (1 + A0^2)/2 .) on the columns of ``frame`` (default frame_f)."""
    F = jet.frame_f if frame is None else frame
    return symmetrize(F.T @ invariant_form(jet.surface, jet.x) @ F)


def ghat_at_t(jet, t: float) -> np.ndarray:
    """g_t(., (1 + A_t^2)/2 .) in frame_f, built from the parallel surface F_t."""
    n = jet.n
    dFt = math.cos(t) * np.eye(n) - math.sin(t) * jet.A0
    At = shape_at_t(jet.A0, t)
    gt = dFt.T @ dFt
    return symmetrize(gt @ (0.5 * (np.eye(n) + At @ At)))


def ghat_hermitian(jet, frame=None) -> np.ndarray:
    """Re<dF^_0 X, dF^_0 Y>_h on frame columns."""
    F = jet.frame_f if frame is None else frame
    U = dlift_matrix(jet.surface, jet.x) @ F
    return np.real(U.T @ np.conj(U))


# -- alpha: two independent routes ---------------------------------------------------

def _tangent_frame(surface, y, nu=None):
    nu = surface.normal(y) if nu is None else nu
    return tangent_basis(y, nu)


def alpha_lift_dir(surface, x, X, cols, policy: StepPolicy = FIRST_DERIVATIVE) -> np.ndarray:
    """Matrix alpha(X, cols_b, cols_c) = -2 Re<d_X(dF^_0 Z~), i dF^_0 Y>_h.

    Z~ is the extension of Z along the X-curve by projection onto the moving tangent space."""
    chart = Chart(surface, x, _tangent_frame(surface, x))
    curve = chart.curve(X)

    def moved(h):
        y = curve(h)
        return dlift_matrix(surface, y) @ (surface.tangent_projector(y) @ cols)

    D, _ = fd_dir(moved, 0.0, policy)
    M0 = dlift_matrix(surface, x) @ cols
    # [b, c] -> -2 Re <D[:, c], i M0[:, b]>_h
    return -2.0 * np.real(np.conj(1j * M0).T @ D)


def _extension(kind: str, dim: int):
    if kind == "projection":
        return None
    if kind == "twisted":
        # a fixed non-symmetric ambient matrix; Y~(h) = P(c(h)) (Y + h K Y)
        idx = np.arange(dim)
        return np.sin(np.add.outer(idx, 2 * idx) + 1.0)
    raise InputError(f"unknown extension {kind!r}")


def alpha_connection_dir(surface, x, X, cols, policy: StepPolicy = FIRST_DERIVATIVE,
                         extension: str = "projection", t: float = 0.0) -> np.ndarray:
    """Matrix alpha^t(X, cols_b, cols_c) = g_t((nabla^t_X A_t) Y, Z).

    For t = 0 this is g0((nabla0_X A0) Y, Z) with nabla0 the tangential part of the
    ambient derivative. For other t the same recipe is applied to the immersion F_t,
    whose tangent space at p is the same ambient subspace and whose Weingarten
    operator is the spectral transport of W."""
    chart = Chart(surface, x, _tangent_frame(surface, x))
    curve = chart.curve(X)
    K = _extension(extension, len(x))
    c, s = math.cos(t), math.sin(t)

    def fields(y, h):
        P = surface.tangent_projector(y)
        W = symmetrize(surface.weingarten(y))
        ext = cols if K is None else cols + h * (K @ cols)
        V = (c * P - s * W) @ (P @ ext)  # dF_t Y~
        if t == 0.0:
            Wt = W
        else:
            T = _tangent_frame(surface, y)
            Wt = T @ shape_at_t(T.T @ W @ T, t) @ T.T
        return np.stack([Wt @ V, V])

    D, _ = fd_dir(lambda h: fields(curve(h), h), 0.0, policy)
    P0 = surface.tangent_projector(x)
    W0 = symmetrize(surface.weingarten(x))
    if t == 0.0:
        Wt0 = W0
    else:
        T0 = _tangent_frame(surface, x)
        Wt0 = T0 @ shape_at_t(T0.T @ W0 @ T0, t) @ T0.T
    nabla = P0 @ D[0] - Wt0 @ (P0 @ D[1])
    dFt = (c * P0 - s * W0) @ cols
    return dFt.T @ nabla  # [c, b]; alpha is symmetric in (b, c) up to FD error


def alpha_tensor(jet, route: str = "lift", frame=None, policy: StepPolicy = FIRST_DERIVATIVE,
                 extension: str = "projection", t: float = 0.0) -> np.ndarray:
    """alpha on frame columns (default frame_f): A[a, b, c] = alpha(F_a, F_b, F_c)."""
    F = jet.frame_f if frame is None else frame
    return alpha_tensor_at(jet.surface, jet.x, F, route, policy, extension, t)


def alpha_tensor_at(surface, x, F, route="lift", policy=FIRST_DERIVATIVE, extension="projection", t=0.0):
    out = np.empty((F.shape[1],) * 3)
    for a in range(F.shape[1]):
        if route == "lift":
            out[a] = alpha_lift_dir(surface, x, F[:, a], F, policy)
        elif route == "connection":
            out[a] = alpha_connection_dir(surface, x, F[:, a], F, policy, extension, t).T
        else:
            raise InputError(f"unknown alpha route {route!r}")
    return out


def alpha_via_lift(jet, X, Y, Z, policy: StepPolicy = FIRST_DERIVATIVE) -> float:
    return float(alpha_lift_dir(jet.surface, jet.x, X, np.column_stack([Y, Z]), policy)[0, 1])


def alpha_via_connection(jet, X, Y, Z, policy: StepPolicy = FIRST_DERIVATIVE,
                         extension: str = "projection", t: float = 0.0) -> float:
    m = alpha_connection_dir(jet.surface, jet.x, X, np.column_stack([Y, Z]), policy, extension, t)
    return float(m[1, 0])


def symmetry_defect(alpha) -> float:
    a = np.asarray(alpha)
    perms = [(0, 2, 1), (1, 0, 2), (1, 2, 0), (2, 0, 1), (2, 1, 0)]
    return max(max_abs(a - a.transpose(p)) for p in perms)


# -- B_t and projectors ------------------------------------------------------------

def b_operator(At, t: float = 0.0) -> np.ndarray:
    """B_t = (A_t + i)(A_t - i)^{-1}, built spectrally so it is exactly unitary."""
    At = np.asarray(At, dtype=float)
    w, v = np.linalg.eigh(symmetrize(At))
    return (v * ((w + 1j) / (w - 1j))) @ v.T


def b_identities(A0, g: int, t_grid) -> dict[str, float]:
    """Residuals of the B_t identities over a t-grid (A0 in a g0-orthonormal frame)."""
    n = len(A0)
    eye = np.eye(n)
    B0 = b_operator(A0)
    out = {"power": 0.0, "conjugate_inverse": 0.0, "shift": 0.0, "trace": 0.0, "tensor": 0.0}
    for t in t_grid:
        B = b_operator(shape_at_t(A0, t))
        out["power"] = max(out["power"], max_abs(np.linalg.matrix_power(B, g) + np.exp(-2j * g * t) * eye))
        out["conjugate_inverse"] = max(out["conjugate_inverse"], max_abs(np.conj(B) @ B - eye))
        out["shift"] = max(out["shift"], max_abs(B - np.exp(-2j * t) * B0))
        out["trace"] = max(out["trace"], abs(np.trace(B)))
        out["tensor"] = max(out["tensor"], max_abs(np.kron(B, np.linalg.inv(B)) - np.kron(B0, np.linalg.inv(B0))))
    return out


def projector(angles: AngleData, j: int, B_thetaj) -> np.ndarray:
    """pi_j = (1/g) sum_k B_{theta_j}^k; returns the real part (the imaginary part is checked separately)."""
    return np.real(projector_complex(angles, j, B_thetaj))


def projector_complex(angles: AngleData, j: int, B_thetaj) -> np.ndarray:
    if not 1 <= j <= angles.g:
        raise InputError(f"distribution index {j} outside 1..{angles.g}")
    B = np.asarray(B_thetaj)
    acc = np.zeros_like(B, dtype=complex)
    power = np.eye(len(B), dtype=complex)
    for _ in range(angles.g):
        acc += power
        power = power @ B
    return acc / angles.g


# -- invariant set ----------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class InvariantSet:
    """(ghat, alpha, B0, b, bbar, projectors) in a ghat-orthonormal e-frame."""

    ghat: np.ndarray
    alpha: np.ndarray
    B0: np.ndarray
    projs: tuple
    labels: np.ndarray  # 1-based distribution index per frame vector
    angles: AngleData
    frame: str = "e"

    @property
    def n(self) -> int:
        return len(self.ghat)

    @property
    def g(self) -> int:
        return self.angles.g

    @property
    def b(self) -> np.ndarray:
        return self.B0.T @ self.ghat

    @property
    def bbar(self) -> np.ndarray:
        return np.linalg.inv(self.B0).T @ self.ghat

    @property
    def T(self) -> np.ndarray:
        return np.imag(np.einsum("xy,zw->xyzw", self.b, self.bbar))

    def residuals(self) -> dict[str, float]:
        eye = np.eye(self.n)
        a = self.alpha
        same = 0.0
        for P in self.projs:
            same = max(same, max_abs(np.einsum("ia,jb,kc,abc->ijk", P.T, P.T, eye, a)))
        trace = max_abs(np.einsum("ij,ijk->k", np.linalg.inv(self.ghat), a))
        power = max_abs(np.linalg.matrix_power(self.B0, self.g) + eye)
        unitary = max_abs(self.B0.conj().T @ self.ghat @ self.B0 - self.ghat)
        conj_inv = max_abs(np.conj(self.B0) @ self.B0 - eye)
        total = max_abs(sum(self.projs) - eye)
        algebra = max(max_abs(P @ Q - (P if j == k else 0 * P))
                      for j, P in enumerate(self.projs) for k, Q in enumerate(self.projs))
        lhs = sum(np.einsum("ab,cd->abcd", P, P) for P in self.projs)
        Binv = np.linalg.inv(self.B0)
        rhs = sum(
            np.einsum("ab,cd->abcd", np.linalg.matrix_power(self.B0, k), np.linalg.matrix_power(Binv, k))
            for k in range(self.g)
        ) / self.g
        return {
            "alpha_symmetry": symmetry_defect(a),
            "alpha_same_distribution": same,
            "alpha_trace_free": trace,
            "B_power": power,
            "B_unitary": unitary,
            "B_conjugate_inverse": conj_inv,
            "projector_sum": total,
            "projector_algebra": algebra,
            "projector_tensor": max_abs(lhs - rhs),
        }


def invariant_set_from_data(ghat_m, alpha, B0, labels, angles: AngleData) -> InvariantSet:
    projs = []
    for j in range(1, angles.g + 1):
        Bj = np.exp(-2j * angles.thetas[j - 1]) * B0  # B_{theta_j}
        projs.append(projector(angles, j, Bj))
    return InvariantSet(np.asarray(ghat_m), np.asarray(alpha), np.asarray(B0), tuple(projs),
                        np.asarray(labels), angles)


def invariant_set(jet, policy: StepPolicy = FIRST_DERIVATIVE, alpha_f=None) -> InvariantSet:
    """InvariantSet at a surface point; alpha from the lift route unless supplied (in frame_f)."""
    angles = angles_from_jet(jet)
    if alpha_f is None:
        alpha_f = alpha_tensor(jet, "lift", policy=policy)
    s = jet.sigma
    alpha_e = alpha_f * s[:, None, None] * s[None, :, None] * s[None, None, :]
    S, Sinv = np.diag(s), np.diag(1.0 / s)
    B0 = Sinv @ b_operator(jet.A0) @ S
    return invariant_set_from_data(ghat(jet, jet.frame_e), alpha_e, B0, jet.labels, angles)


def t_tensor(inv: InvariantSet, X, Y, Z, W) -> float:
    return float(np.imag((X @ inv.b @ Y) * (Z @ inv.bbar @ W)))


# -- quadric curvature ----------------------------------------------------------------

def quadric_curvature(z, U1, U2, U3, U4, tol: float = 1e-8) -> float:
    """R^Q = gQ o gQ + w o w + q o qbar at the point z of the quadric (complex ambient vectors).

    gQ(u, v) = Re<u, v>_h, w(u, v) = Re<i u, v>_h, q(u, v) = sum u_k v_k at t = 0
    (the complex bilinear form of the quadric at z), qbar = conj(q)."""
    z = np.asarray(z)
    vecs = [np.asarray(u, dtype=complex) for u in (U1, U2, U3, U4)]
    for u in vecs:
        if max(abs(np.sum(z * u)), abs(herm(u, z))) > tol:
            raise InputError("quadric curvature needs horizontal tangent vectors")
    gq = np.array([[np.real(herm(u, v)) for v in vecs] for u in vecs])
    om = np.array([[np.real(herm(1j * u, v)) for v in vecs] for u in vecs])
    q = np.array([[np.sum(u * v) for v in vecs] for u in vecs])
    e = np.eye(4)
    return float(np.real(
        kn_sym(gq, gq, *e) + kn_skew(om, *e) + kn_sym(q, np.conj(q), *e)
    ))


def connection_difference(jet, alpha_f) -> np.ndarray:
    """Predicted (ghat-connection minus g0-connection)^k_ij in frame_f:
    lambda_k / (1 + lambda_k^2) alpha(f_i, f_j, f_k)."""
    lam = jet.lam
    return np.einsum("k,ijk->kij", lam / (1.0 + lam ** 2), alpha_f)
