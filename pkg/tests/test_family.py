import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from isogeo.errors import FocalTimeError, InputError
from isogeo.family import (
    angle_data,
    dihedral_order,
    exact_lambdas,
    focal_spectrum,
    parallel,
    reflection_residuals,
    reflection_tau,
    shape_at_t,
    shape_at_t_derivative,
)
from isogeo.numkit import max_abs
from isogeo.surd import Surd


@given(st.floats(min_value=-1.2, max_value=1.2), st.integers(min_value=0, max_value=2**31))
def test_shape_at_t_matches_resolvent_form(t, seed):
    rng = np.random.default_rng(seed)
    a = rng.standard_normal((3, 3))
    A0 = (a + a.T) / 4
    if abs(math.sin(t)) < 1e-3:
        return
    cot = 1 / math.tan(t)
    if np.min(np.abs(np.linalg.eigvalsh(A0) - cot)) < 1e-2:
        return
    eye = np.eye(3)
    expected = (eye + cot * A0) @ np.linalg.inv(cot * eye - A0)
    assert max_abs(shape_at_t(A0, t) - expected) < 1e-8 * max(1, max_abs(expected))


def test_shape_at_t_derivative_by_differences():
    A0 = np.diag([math.sqrt(3), 0.0, -math.sqrt(3)])
    h, t = 1e-6, 0.2
    fd = (shape_at_t(A0, t + h) - shape_at_t(A0, t - h)) / (2 * h)
    assert max_abs(fd - shape_at_t_derivative(A0, t)) < 1e-6


def test_focal_time_raises_with_index():
    A0 = np.diag([math.sqrt(3), 0.0, -math.sqrt(3)])
    with pytest.raises(FocalTimeError) as info:
        shape_at_t(A0, math.pi / 6)
    assert info.value.index == 1


def test_parallel_rank_drops_at_focal_time(g3_jets):
    j = g3_jets[0]
    assert parallel(j, 0.3).rank == 3
    focal = parallel(j, math.pi / 6)
    assert focal.rank == 2 and focal.At is None


def test_angle_data_g3():
    a = angle_data(3)
    assert np.allclose(a.lambdas, [math.sqrt(3), 0.0, -math.sqrt(3)], atol=1e-15)
    with pytest.raises(InputError):
        angle_data(3, phi=2.0)


@pytest.mark.parametrize("g", [1, 2, 3, 6])
def test_exact_lambdas_match_cotangents(g):
    vals = [float(x) for x in exact_lambdas(g)]
    expected = [1 / math.tan((2 * j + 1) * math.pi / (2 * g)) for j in range(g)]
    assert np.allclose(vals, expected, atol=1e-14)


def test_exact_lambdas_need_twelfths():
    with pytest.raises(InputError):
        exact_lambdas(4)


def test_focal_spectrum_g6_exact():
    r3 = Surd(0, 0, 1)
    target = [r3, r3.inverse(), Surd(0), -r3.inverse(), -r3]
    for j in range(1, 7):
        assert focal_spectrum(6, j, exact=True) == target


def test_reflections_are_isometric_involutions(g3_jets):
    for jet in g3_jets:
        for j in (1, 2, 3):
            refl = reflection_tau(jet, j)
            assert refl.involution < 1e-10
            assert refl.normal_sign == 1.0
            assert all(v < 1e-8 for v in reflection_residuals(jet, refl).values())


def test_reflections_generate_dihedral_group(g3_jets):
    jet = g3_jets[0]
    th = np.arctan2(1.0, jet.lambdas)
    assert dihedral_order(jet.surface, jet.x, th[0], th[1], 10) == 3
