import math

import numpy as np
import pytest

from isogeo.errors import InputError
from isogeo.family import parallel
from isogeo.numkit import max_abs
from isogeo.quadric import (
    alpha_tensor,
    b_identities,
    b_operator,
    ghat,
    ghat_at_t,
    invariant_set,
    lagrangian_jet,
    lift,
    quadric_curvature,
    symmetry_defect,
)


def test_lift_is_null_and_unit(g3_jets):
    for jet in g3_jets:
        for t in (0.0, 0.3, -0.4):
            z = lift(parallel(jet, t))
            assert z.null_residual < 1e-12 and z.norm_residual < 1e-12


def test_lift_is_horizontal_lagrangian(g3_jets):
    for jet in g3_jets:
        lj = lagrangian_jet(jet)
        assert lj.horizontality < 1e-12
        assert lj.lagrangian < 1e-12


def test_ghat_independent_of_t(g3_jets, g2_wide_jets):
    for jet in g3_jets + g2_wide_jets:
        g0 = ghat(jet)
        for t in np.linspace(-0.4, 0.4, 10):
            assert max_abs(ghat_at_t(jet, t) - g0) < 1e-10


def test_ghat_formula_on_cartan(g3_jets):
    # in the principal frame ghat = (1 + lambda^2) / 2
    jet = g3_jets[1]
    assert np.allclose(np.diag(ghat(jet)), [2.0, 0.5, 2.0], atol=1e-10)


def test_b_operator_eigenvalues():
    A = np.diag([math.sqrt(3), 0.0, -math.sqrt(3)])
    vals = np.linalg.eigvals(b_operator(A))
    thetas = np.array([math.pi / 6, math.pi / 2, 5 * math.pi / 6])
    assert np.allclose(sorted(vals, key=np.angle), sorted(np.exp(2j * thetas), key=np.angle))


def test_b_identities_on_grid(g3_jets):
    vals = b_identities(g3_jets[0].A0, 3, [-0.3, 0.1, 0.4])
    assert all(v < 1e-9 for v in vals.values())


def test_alpha_is_symmetric_and_nonzero(g3_jets):
    a = alpha_tensor(g3_jets[0])
    assert symmetry_defect(a) < 1e-7
    assert max_abs(a) > 0.1


def test_alpha_vanishes_for_products(g2_wide_jets):
    for jet in g2_wide_jets:
        assert max_abs(alpha_tensor(jet)) < 1e-7


def test_invariant_set_algebra(g3_jets):
    inv = invariant_set(g3_jets[2])
    res = inv.residuals()
    assert res["B_power"] < 1e-9 and res["projector_sum"] < 1e-9
    assert res["projector_algebra"] < 1e-9 and res["projector_tensor"] < 1e-9
    assert res["alpha_same_distribution"] < 1e-7 and res["alpha_trace_free"] < 1e-7


def test_quadric_curvature_holomorphic_sectional():
    # holomorphic sectional curvature of Q_2 in the Fubini-Study metric of curvature 4
    # ranges over [2, 4]: 4 on isotropic directions (q(u, u) = 0), 2 on real ones
    z = np.array([1, 1j, 0, 0]) / math.sqrt(2)
    u = np.array([0, 0, 1, 0], dtype=complex)
    v = np.array([0, 0, 0, 1], dtype=complex)
    w = (u + 1j * v) / math.sqrt(2)
    assert quadric_curvature(z, w, 1j * w, 1j * w, w) == pytest.approx(4.0)
    assert quadric_curvature(z, u, 1j * u, 1j * u, u) == pytest.approx(2.0)
    assert quadric_curvature(z, u, v, v, u) == pytest.approx(2.0)
    with pytest.raises(InputError):
        quadric_curvature(z, z, u, u, z)
