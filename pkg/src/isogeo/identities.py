"""Identity checks: Cartan, Weyl (classical, polarized, invariant), Codazzi, Gauss, the
derivative of B, and the reflection symmetry of alpha. Each check returns a Residual."""
from __future__ import annotations

import math

import numpy as np

from .errors import InputError
from .family import AngleData, reflection_tau, tau_map
from .models.geometry import SurfaceJet
from .numkit import FIRST_DERIVATIVE, kn_sym_tensor, max_abs
from .quadric import InvariantSet, alpha_tensor_at, invariant_set
from .residual import Residual, residual

ALGEBRAIC_TOL = 1e-10
FD_TOL = 1e-5
FD2_TOL = 1e-3


def _as_invariants(source) -> InvariantSet:
    if isinstance(source, InvariantSet):
        return source
    if isinstance(source, SurfaceJet):
        return invariant_set(source)
    if hasattr(source, "invariants"):
        return source.invariants
    raise InputError(f"cannot build invariants from {type(source).__name__}")


# -- Cartan --------------------------------------------------------------------------

def cartan_sums(angles: AngleData) -> np.ndarray:
    lam, m = angles.lambdas, angles.multiplicities
    out = []
    for i in range(angles.g):
        out.append(sum(m[j] * (1 + lam[i] * lam[j]) / (lam[i] - lam[j]) for j in range(angles.g) if j != i))
    return np.array(out, dtype=float)


def cartan_identity(angles: AngleData, tol: float = 1e-12) -> Residual:
    sums = cartan_sums(angles)
    value = float(np.max(np.abs(sums))) if len(sums) else 0.0
    return residual("cartan", value, tol, g=angles.g)


# -- classical and polarized Weyl ---------------------------------------------------------

def _f_frame(inv: InvariantSet):
    """alpha in the g0-orthonormal f-frame, principal curvature per vector."""
    lam = inv.angles.lambdas[inv.labels - 1]
    s = np.sqrt(2.0 / (1.0 + lam ** 2))
    alpha_f = inv.alpha / (s[:, None, None] * s[None, :, None] * s[None, None, :])
    return alpha_f, lam


def _default_vector(inv: InvariantSet, i: int) -> np.ndarray:
    v = np.zeros(inv.n)
    v[np.flatnonzero(inv.labels == i)[0]] = 1.0
    return v


def _check_pair(inv, i, j):
    if i == j:
        raise InputError("Weyl identities need distinct distributions i != j")
    for k in (i, j):
        if not 1 <= k <= inv.g:
            raise InputError(f"distribution index {k} outside 1..{inv.g}")


def _weyl_sides(inv, i, j, vi, vti, vj, vtj):
    alpha_f, lam = _f_frame(inv)
    li, lj = inv.angles.lambdas[i - 1], inv.angles.lambdas[j - 1]
    lhs = (1 + li * lj) * (vi @ vti) * (vj @ vtj)
    # (lambda_i - A0)^{-1} (lambda_j - A0)^{-1} on the complement of D_i + D_j
    keep = (inv.labels != i) & (inv.labels != j)
    weight = np.zeros(inv.n)
    weight[keep] = 1.0 / ((li - lam[keep]) * (lj - lam[keep]))

    def pair(a, b, c, d):
        return float(np.einsum("k,k,k->", np.einsum("x,y,xyk->k", a, b, alpha_f),
                               weight, np.einsum("x,y,xyk->k", c, d, alpha_f)))

    rhs = pair(vi, vj, vti, vtj) + pair(vti, vj, vi, vtj)
    return lhs, rhs


def classical_weyl(source, i: int, j: int, v_i=None, v_j=None, tol: float = FD_TOL) -> Residual:
    """Classical form of the Weyl identity; vectors are f-frame coordinates in D_i, D_j."""
    inv = _as_invariants(source)
    _check_pair(inv, i, j)
    vi = _default_vector(inv, i) if v_i is None else np.asarray(v_i, dtype=float)
    vj = _default_vector(inv, j) if v_j is None else np.asarray(v_j, dtype=float)
    lhs, rhs = _weyl_sides(inv, i, j, vi, vi, vj, vj)
    return residual("weyl.classical", abs(lhs - rhs), tol, i=i, j=j, lhs=lhs, rhs=rhs)


def polarized_weyl(source, i: int, j: int, v_i=None, vt_i=None, v_j=None, vt_j=None,
                   tol: float = FD_TOL) -> Residual:
    inv = _as_invariants(source)
    _check_pair(inv, i, j)
    vi = _default_vector(inv, i) if v_i is None else np.asarray(v_i, dtype=float)
    vj = _default_vector(inv, j) if v_j is None else np.asarray(v_j, dtype=float)
    vti = vi if vt_i is None else np.asarray(vt_i, dtype=float)
    vtj = vj if vt_j is None else np.asarray(vt_j, dtype=float)
    lhs, rhs = _weyl_sides(inv, i, j, vi, vti, vj, vtj)
    return residual("weyl.polarized", abs(lhs - rhs), tol, i=i, j=j, lhs=lhs, rhs=rhs)


def all_classical_weyl(source, tol: float = FD_TOL, rng=None) -> Residual:
    """Max classical Weyl residual over all ordered pairs (i, j), with random unit vectors
    inside each distribution when ``rng`` is given."""
    inv = _as_invariants(source)
    worst = 0.0
    for i in range(1, inv.g + 1):
        for j in range(1, inv.g + 1):
            if i == j:
                continue
            vi, vj = _default_vector(inv, i), _default_vector(inv, j)
            if rng is not None:
                vi, vj = _random_in(inv, i, rng), _random_in(inv, j, rng)
            worst = max(worst, classical_weyl(inv, i, j, vi, vj, tol).value)
    return residual("weyl.classical", worst, tol, pairs=inv.g * (inv.g - 1))


def _random_in(inv, i, rng):
    v = np.zeros(inv.n)
    idx = np.flatnonzero(inv.labels == i)
    v[idx] = rng.standard_normal(len(idx))
    return v / np.linalg.norm(v)


# -- invariant Weyl --------------------------------------------------------------------------

def _transform(alpha, M1, M2, M3):
    """alpha(M1 ., M2 ., M3 .) for operator matrices (columns are images of frame vectors)."""
    return np.einsum("abc,ax,by,cz->xyz", alpha, M1, M2, M3, optimize=True)


def invariant_weyl_sides(inv: InvariantSet):
    """Both sides of the invariant Weyl identity as complex 4-index arrays (e-frame)."""
    g, n = inv.g, inv.n
    B = np.asarray(inv.B0, dtype=complex)
    Binv = np.linalg.inv(B)
    pw = {0: np.eye(n, dtype=complex)}
    for k in range(1, g + 1):
        pw[k] = pw[k - 1] @ B
        pw[-k] = pw[-(k - 1)] @ Binv
    a = inv.alpha.astype(complex)
    Ginv = np.linalg.inv(inv.ghat)
    eye = pw[0]

    # S[p, q][u, v, c] = sum_{k<q} a(B^p u, B^{k+1} v, B^{q-k-1} c) + a(B^p u, B^k v, B^{q-k} c)
    # L[p, q][u, v, c] = a(B^-p u, B^-q v, c);  M[u, v, s, r] = sum_{p,q} tr(L[p,q][u,v,.] S[p,q][s,r,.])
    M = np.zeros((n,) * 4, dtype=complex)
    for p in range(g):
        for q in range(g):
            if q == 0:
                continue
            S = sum(
                _transform(a, pw[p], pw[k + 1], pw[q - k - 1]) + _transform(a, pw[p], pw[k], pw[q - k])
                for k in range(q)
            )
            L = _transform(a, pw[-p], pw[-q], eye)
            M += np.einsum("uvc,cd,srd->uvsr", L, Ginv, S, optimize=True)
    rhs = (
        np.einsum("ywxz->xyzw", M)
        + np.einsum("yzxw->xyzw", M)
        - np.einsum("wyzx->xyzw", M)
        - np.einsum("wxzy->xyzw", M)
    )
    lhs = -4j * g * g * inv.T
    return lhs, rhs


def invariant_weyl(source, tol: float = ALGEBRAIC_TOL) -> Residual:
    inv = _as_invariants(source)
    lhs, rhs = invariant_weyl_sides(inv)
    flipped = max_abs(lhs + rhs)
    note = ""
    value = max_abs(lhs - rhs)
    if value >= tol and flipped < tol:
        note = "identity holds only after a uniform sign flip of the right-hand side"
    return residual("weyl.invariant", value, tol, note=note, g=inv.g, n=inv.n,
                    scale=max_abs(lhs))


def weyl_implies_cartan(weyl: Residual, cartan: Residual) -> Residual:
    """Suite-level implication: a passing Weyl identity must come with a passing Cartan identity."""
    violated = weyl.passed and not cartan.passed
    return residual("implication.weyl_cartan", 1.0 if violated else 0.0, 0.5,
                    weyl=weyl.status, cartan=cartan.status)


# -- tensoriality -------------------------------------------------------------------------

def rotate_invariants(inv: InvariantSet, rng) -> InvariantSet:
    """Re-express the invariants in a frame rotated randomly inside each distribution."""
    n = inv.n
    Q = np.zeros((n, n))
    for j in range(1, inv.g + 1):
        idx = np.flatnonzero(inv.labels == j)
        block, _ = np.linalg.qr(rng.standard_normal((len(idx), len(idx))))
        Q[np.ix_(idx, idx)] = block
    Qi = Q.T  # orthogonal, and the e-frame is ghat-orthonormal inside each distribution
    return InvariantSet(
        Q.T @ inv.ghat @ Q,
        _transform(inv.alpha, Q, Q, Q),
        Qi @ inv.B0 @ Q,
        tuple(Qi @ P @ Q for P in inv.projs),
        inv.labels,
        inv.angles,
    )


def tensoriality(check, inv: InvariantSet, rng, tol: float = 1e-9) -> Residual:
    base = check(inv).value
    rotated = check(rotate_invariants(inv, rng)).value
    return residual("tensoriality", abs(base - rotated), tol, base=base, rotated=rotated)


# -- Codazzi, Gauss, derivative of B ------------------------------------------------------

def _coord_forms(local):
    G = local.metric[0]
    B = local.b0
    b = B.T @ G
    bbar = np.linalg.inv(B).T @ G
    return G, B, b, bbar


def _to_e(tensor, local):
    """Rescale an all-lower f-frame tensor to e-frame components."""
    s = local.jet.sigma
    out = tensor
    for axis in range(tensor.ndim):
        shape = [1] * tensor.ndim
        shape[axis] = len(s)
        out = out * s.reshape(shape)
    return out


def codazzi_check(local, tol: float = FD2_TOL) -> Residual:
    G, B, b, bbar = _coord_forms(local)
    T = np.imag(np.einsum("xy,zw->xyzw", b, bbar))
    na = local.nabla_alpha
    lhs = na - np.einsum("yxzw->xyzw", na)
    rhs = 2 * (np.einsum("xzyw->xyzw", T) + np.einsum("xwyz->xyzw", T))
    value = max_abs(_to_e(lhs - rhs, local))
    return residual("codazzi", value, tol, model=local.spec.name, scale=max_abs(_to_e(lhs, local)))


def gauss_sides(local):
    G, B, b, bbar = _coord_forms(local)
    a = local.alpha
    Gi = np.linalg.inv(G)
    aa = np.einsum("xwm,mn,yzn->xyzw", a, Gi, a) - np.einsum("xzm,mn,ywn->xyzw", a, Gi, a)
    rhs = kn_sym_tensor(G, G) + np.real(kn_sym_tensor(b, bbar)) + 0.25 * aa
    return local.riemann, rhs


def gauss_check(local, tol: float = FD2_TOL) -> Residual:
    R, rhs = gauss_sides(local)
    value = max_abs(_to_e(R - rhs, local))
    return residual("gauss", value, tol, model=local.spec.name, scale=max_abs(_to_e(R, local)))


def nabla_b_check(local, tol: float = 1e-4) -> Residual:
    G, B, b, bbar = _coord_forms(local)
    a = local.alpha
    lhs = np.einsum("iab,az->ibz", local.nabla_b, G)
    rhs = -0.5j * (np.einsum("cy,xcz->xyz", B, a) + np.einsum("cz,xyc->xyz", B, a))
    return residual("nabla_b", max_abs(_to_e(lhs - rhs, local)), tol, model=local.spec.name)


def connection_relation_check(local, tol: float = FD_TOL) -> Residual:
    from .quadric import connection_difference

    diff = local.gamma - local.gamma0
    pred = connection_difference(local.jet, local.alpha)
    return residual("connection_relation", max_abs(diff - pred), tol, model=local.spec.name)


def sphere_gauss_route(local, i: int, j: int, v_i=None, vt_i=None, v_j=None, vt_j=None,
                       tol: float = FD2_TOL) -> Residual:
    """R0(v_j, v_i, vt_i, vt_j) of g0 against (g0 o g0 + h0 o h0), h0 = g0(A0 ., .)."""
    inv = local.invariants
    vi = _default_vector(inv, i) if v_i is None else np.asarray(v_i, dtype=float)
    vj = _default_vector(inv, j) if v_j is None else np.asarray(v_j, dtype=float)
    vti = vi if vt_i is None else np.asarray(vt_i, dtype=float)
    vtj = vj if vt_j is None else np.asarray(vt_j, dtype=float)
    G0 = local.induced_metric[0]
    A0 = local.jet.A0
    model = kn_sym_tensor(G0, G0) + kn_sym_tensor(A0, A0)
    R0 = local.riemann0
    lhs = np.einsum("abcd,a,b,c,d->", R0, vj, vi, vti, vtj)
    rhs = np.einsum("abcd,a,b,c,d->", model, vj, vi, vti, vtj)
    return residual("sphere_gauss", abs(lhs - rhs), tol, i=i, j=j, lhs=float(lhs), rhs=float(rhs))


# -- symmetry under the reflections ---------------------------------------------------------

def symmetry_check(jet, j: int, alpha_f=None, policy=FIRST_DERIVATIVE, tol: float = FD_TOL) -> Residual:
    refl = reflection_tau(jet, j)
    surf = jet.surface
    a_p = alpha_tensor_at(surf, jet.x, jet.frame_f, "lift", policy) if alpha_f is None else alpha_f
    pushed = refl.dtau @ jet.frame_f
    a_img = alpha_tensor_at(surf, refl.image, pushed, "lift", policy)
    value = max_abs(a_p + a_img)
    return residual("symmetry", value, tol, j=j, normal_sign=refl.normal_sign,
                    involution=refl.involution, scale=max_abs(a_p))


def symmetry_composition_check(jet, j1: int, j2: int, alpha_f=None, policy=FIRST_DERIVATIVE,
                               tol: float = FD_TOL) -> Residual:
    """tau_{j1} o tau_{j2} preserves alpha (two sign flips)."""
    surf = jet.surface
    th1 = math.atan2(1.0, jet.lambdas[j1 - 1])
    th2 = math.atan2(1.0, jet.lambdas[j2 - 1])
    q = tau_map(surf, jet.x, th2)
    r = tau_map(surf, q, th1)

    def dtau(y, theta):
        P = surf.tangent_projector(y)
        W = surf.weingarten(y)
        return math.cos(2 * theta) * P - math.sin(2 * theta) * W

    pushed = dtau(q, th1) @ dtau(jet.x, th2) @ jet.frame_f
    a_p = alpha_tensor_at(surf, jet.x, jet.frame_f, "lift", policy) if alpha_f is None else alpha_f
    a_r = alpha_tensor_at(surf, r, pushed, "lift", policy)
    return residual("symmetry.composition", max_abs(a_p - a_r), tol, j1=j1, j2=j2)


def alpha_route_check(jet, policy=FIRST_DERIVATIVE, tol: float = 1e-6):
    """Lift route vs connection route, and extension independence of the connection route."""
    surf, F = jet.surface, jet.frame_f
    a_lift = alpha_tensor_at(surf, jet.x, F, "lift", policy)
    a_conn = alpha_tensor_at(surf, jet.x, F, "connection", policy)
    a_twist = alpha_tensor_at(surf, jet.x, F, "connection", policy, extension="twisted")
    return a_lift, [
        residual("alpha.routes", max_abs(a_lift - a_conn), tol),
        residual("alpha.extension", max_abs(a_conn - a_twist), tol),
    ]


def alpha_t_independence(jet, t_grid, alpha_f, policy=FIRST_DERIVATIVE, tol: float = FD_TOL) -> Residual:
    surf, F = jet.surface, jet.frame_f
    worst = 0.0
    for t in t_grid:
        at = alpha_tensor_at(surf, jet.x, F, "connection", policy, t=float(t))
        worst = max(worst, max_abs(at - alpha_f))
    return residual("alpha.t_independence", worst, tol, t_values=len(t_grid))


# -- closed-form route for products of round spheres ------------------------------------------

def closed_form_sides(jet):
    """Codazzi and Gauss with the intrinsic side in closed form, e-frame components.

    On a product of round spheres the shape operator is parallel, so alpha = 0, and ghat
    is a product of round metrics: a factor of radius r with principal curvature lambda
    has curvature K = 2 / (r^2 (1 + lambda^2)) under ghat (flat when it is a circle)."""
    factors = jet.surface.round_factors(jet.x)
    if factors is None:
        return None
    inv = invariant_set(jet, alpha_f=np.zeros((jet.n,) * 3))
    E = jet.frame_e
    Q = 0.5 * (jet.P + jet.W @ jet.W)
    R = np.zeros((jet.n,) * 4)
    for P, r, d in factors:
        if d < 2:
            continue
        Ek = P @ E
        lam = float(np.trace(Ek.T @ jet.W @ Ek) / np.trace(Ek.T @ Ek))
        gk = Ek.T @ Q @ Ek
        R += 2.0 / (r * r * (1.0 + lam * lam)) * kn_sym_tensor(gk, gk)
    T = inv.T
    codazzi_rhs = 2 * (np.einsum("xzyw->xyzw", T) + np.einsum("xwyz->xyzw", T))
    gauss_rhs = kn_sym_tensor(inv.ghat, inv.ghat) + np.real(kn_sym_tensor(inv.b, inv.bbar))
    return {"codazzi": (np.zeros_like(codazzi_rhs), codazzi_rhs), "gauss": (R, gauss_rhs)}


def closed_form_checks(jet, tol: float = ALGEBRAIC_TOL) -> list[Residual]:
    sides = closed_form_sides(jet)
    if sides is None:
        return []
    return [
        residual(f"{name}.closed_form", max_abs(lhs - rhs), tol, scale=max_abs(lhs))
        for name, (lhs, rhs) in sides.items()
    ]
