"""Dense linear algebra helpers, clustered symmetric eigensolves, finite differences
and Kulkarni-Nomizu products."""
from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import InputError, StencilError

DEFAULT_CLUSTER_TOL = 1e-6


def max_abs(a) -> float:
    a = np.asarray(a)
    return float(np.max(np.abs(a))) if a.size else 0.0


def is_symmetric(m, rtol=1e-12) -> bool:
    m = np.asarray(m)
    return max_abs(m - m.T) <= rtol * max(max_abs(m), 1.0)


def is_unitary(m, atol=1e-10) -> bool:
    m = np.asarray(m)
    return max_abs(m.conj().T @ m - np.eye(m.shape[1])) < atol


def symmetrize(m):
    m = np.asarray(m)
    return 0.5 * (m + m.T)


# --------------------------------------------------------------------------
# Kulkarni-Nomizu products
# --------------------------------------------------------------------------

def _check_forms(*forms):
    dims = {np.shape(f) for f in forms}
    if len(dims) != 1:
        raise InputError(f"bilinear forms have mismatched shapes {sorted(dims)}")
    (shape,) = dims
    if len(shape) != 2 or shape[0] != shape[1]:
        raise InputError(f"bilinear form must be square, got shape {shape}")
    return shape[0]


def _check_vectors(dim, *vecs):
    for v in vecs:
        if np.ndim(v) != 1 or len(v) != dim:
            raise InputError(f"vector of shape {np.shape(v)} does not match form dimension {dim}")


def _pair(h, x, y):
    return x @ np.asarray(h) @ y


def kn_sym(h1, h2, X, Y, Z, W):
    """Kulkarni-Nomizu product of two symmetric 2-tensors evaluated on (X, Y, Z, W).

    Works for complex bilinear forms as well (no conjugation is applied).
    """
    dim = _check_forms(h1, h2)
    _check_vectors(dim, X, Y, Z, W)
    return 0.5 * (
        _pair(h1, X, W) * _pair(h2, Y, Z)
        + _pair(h2, X, W) * _pair(h1, Y, Z)
        - _pair(h1, X, Z) * _pair(h2, Y, W)
        - _pair(h2, X, Z) * _pair(h1, Y, W)
    )


def kn_skew(w, X, Y, Z, W):
    """Kulkarni-Nomizu square of a skew 2-form evaluated on (X, Y, Z, W)."""
    dim = _check_forms(w)
    _check_vectors(dim, X, Y, Z, W)
    return (
        _pair(w, X, W) * _pair(w, Y, Z)
        - _pair(w, X, Z) * _pair(w, Y, W)
        - 2.0 * _pair(w, X, Y) * _pair(w, Z, W)
    )


def kn_sym_tensor(h1, h2):
    """All components ``(h1 o h2)[x, y, z, w]`` as a 4-index array."""
    _check_forms(h1, h2)
    h1, h2 = np.asarray(h1), np.asarray(h2)
    return 0.5 * (
        np.einsum("xw,yz->xyzw", h1, h2)
        + np.einsum("xw,yz->xyzw", h2, h1)
        - np.einsum("xz,yw->xyzw", h1, h2)
        - np.einsum("xz,yw->xyzw", h2, h1)
    )


def kn_skew_tensor(w):
    _check_forms(w)
    w = np.asarray(w)
    return (
        np.einsum("xw,yz->xyzw", w, w)
        - np.einsum("xz,yw->xyzw", w, w)
        - 2.0 * np.einsum("xy,zw->xyzw", w, w)
    )


# --------------------------------------------------------------------------
# Clustered symmetric eigendecomposition
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class SpectralClusters:
    """Distinct eigenvalues (descending) with orthonormal bases grouped per cluster."""

    values: np.ndarray
    multiplicities: tuple[int, ...]
    bases: tuple[np.ndarray, ...]
    cluster_tol: float
    ambiguous: bool = False
    raw: np.ndarray = field(default=None, repr=False)

    @property
    def basis(self) -> np.ndarray:
        return np.hstack(self.bases)

    @property
    def labels(self) -> np.ndarray:
        """Cluster index (0-based) of each column of :attr:`basis`."""
        return np.repeat(np.arange(len(self.multiplicities)), self.multiplicities)

    def reconstruct(self) -> np.ndarray:
        return sum(lam * (b @ b.T) for lam, b in zip(self.values, self.bases))


def eig_sym(m, cluster_tol: float = DEFAULT_CLUSTER_TOL) -> SpectralClusters:
    m = np.asarray(m, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise InputError(f"expected a square matrix, got shape {m.shape}")
    if not is_symmetric(m):
        raise InputError("matrix is not symmetric to 1e-12")
    w, v = np.linalg.eigh(symmetrize(m))
    order = np.argsort(w)[::-1]
    w, v = w[order], v[:, order]

    groups = [[0]]
    ambiguous = False
    for k in range(1, len(w)):
        gap = w[k - 1] - w[k]
        if gap < cluster_tol:
            groups[-1].append(k)
        else:
            if gap < 10 * cluster_tol:
                ambiguous = True
            groups.append([k])
    if ambiguous:
        warnings.warn("eigenvalue gap between cluster_tol and 10*cluster_tol", RuntimeWarning, stacklevel=2)
    values = np.array([w[g].mean() for g in groups])
    bases = tuple(v[:, g] for g in groups)
    return SpectralClusters(values, tuple(len(g) for g in groups), bases, cluster_tol, ambiguous, w)


def spectral_function(m, fn):
    """Apply a scalar function to a real symmetric matrix through its eigendecomposition."""
    w, v = np.linalg.eigh(symmetrize(np.asarray(m, dtype=float)))
    return (v * fn(w)) @ v.conj().T


# --------------------------------------------------------------------------
# Finite differences
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class StepPolicy:
    order: int = 2
    base_step: float | None = None
    richardson: bool = True

    def __post_init__(self):
        if self.order != 2:
            raise InputError("only second-order central differences are supported")
        if self.base_step is not None and not (1e-8 <= self.base_step <= 1e-2):
            raise InputError(f"base_step {self.base_step} outside [1e-8, 1e-2]")

    def step(self, t0: float = 0.0) -> float:
        if self.base_step is not None:
            return self.base_step
        return 1e-5 * (1.0 + abs(t0))


FIRST_DERIVATIVE = StepPolicy()
NESTED_DERIVATIVE = StepPolicy(base_step=1e-4, richardson=False)


def _eval(f, t):
    try:
        return np.asarray(f(t))
    except Exception as exc:  # noqa: BLE001 - re-raised with location
        raise StencilError(t, exc) from exc


def fd_dir(f: Callable, t0: float, policy: StepPolicy = FIRST_DERIVATIVE):
    """Central-difference derivative of ``f`` at ``t0``.

    Returns ``(value, error_estimate)``. With Richardson extrapolation the steps
    ``h`` and ``2h`` are combined, so ``f`` must be evaluable on ``[t0-2h, t0+2h]``.
    """
    h = policy.step(t0)
    d1 = (_eval(f, t0 + h) - _eval(f, t0 - h)) / (2 * h)
    d2 = (_eval(f, t0 + 2 * h) - _eval(f, t0 - 2 * h)) / (4 * h)
    if policy.richardson:
        value = (4 * d1 - d2) / 3
        err = max_abs(d1 - d2) / 3
    else:
        value = d1
        err = max_abs(d1 - d2)
    return value, err


def fd_second(f: Callable, t0: float, h: float):
    return (_eval(f, t0 + h) - 2 * _eval(f, t0) + _eval(f, t0 - h)) / (h * h)
