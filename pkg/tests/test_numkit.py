import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from isogeo.errors import InputError
from isogeo.numkit import (
    StepPolicy,
    eig_sym,
    fd_dir,
    kn_skew_tensor,
    kn_sym,
    kn_sym_tensor,
    max_abs,
    spectral_function,
)

seeds = st.integers(min_value=0, max_value=2**32 - 1)


def _sym(rng, n):
    a = rng.standard_normal((n, n))
    return a + a.T


@given(seeds, st.integers(min_value=2, max_value=5))
def test_kn_sym_has_curvature_symmetries(seed, n):
    rng = np.random.default_rng(seed)
    R = kn_sym_tensor(_sym(rng, n), _sym(rng, n))
    assert max_abs(R + R.transpose(1, 0, 2, 3)) < 1e-12
    assert max_abs(R - R.transpose(2, 3, 0, 1)) < 1e-12
    bianchi = R + np.einsum("xzwy->xyzw", R) + np.einsum("xwyz->xyzw", R)
    assert max_abs(bianchi) < 1e-12


def test_kn_of_metric_gives_unit_sectional_curvature():
    g = np.eye(3)
    e = np.eye(3)
    assert kn_sym(g, g, e[0], e[1], e[1], e[0]) == pytest.approx(1.0)
    assert kn_sym_tensor(g, g)[0, 1, 1, 0] == pytest.approx(1.0)


@given(seeds)
def test_kn_skew_symmetries(seed):
    rng = np.random.default_rng(seed)
    w = rng.standard_normal((4, 4))
    w = w - w.T
    R = kn_skew_tensor(w)
    assert max_abs(R + R.transpose(1, 0, 2, 3)) < 1e-12
    assert max_abs(R - R.transpose(2, 3, 0, 1)) < 1e-12


def test_eig_sym_clusters_repeated_eigenvalues():
    rng = np.random.default_rng(0)
    q, _ = np.linalg.qr(rng.standard_normal((5, 5)))
    m = q @ np.diag([2.0, 2.0, -1.0, 0.5, 0.5 + 1e-9]) @ q.T
    c = eig_sym(m)
    assert c.multiplicities == (2, 2, 1)
    assert c.values[0] == pytest.approx(2.0)
    assert max_abs(c.reconstruct() - m) < 1e-8


@settings(max_examples=25)
@given(seeds)
def test_spectral_function_matches_matrix_exp(seed):
    rng = np.random.default_rng(seed)
    a = _sym(rng, 4) / 4
    from scipy.linalg import expm

    assert max_abs(spectral_function(a, np.exp) - expm(a)) < 1e-10


@pytest.mark.parametrize("t0", [0.0, 0.7, -2.0])
def test_fd_dir_on_sine(t0):
    value, err = fd_dir(np.sin, t0)
    assert value == pytest.approx(math.cos(t0), abs=1e-10)
    assert err < 1e-6


def test_step_policy_validation():
    with pytest.raises(InputError):
        StepPolicy(order=4)
    with pytest.raises(InputError):
        StepPolicy(base_step=1.0)
    assert StepPolicy().step(1.0) == pytest.approx(2e-5)
