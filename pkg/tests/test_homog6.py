import math

import numpy as np
import pytest

from isogeo import homog6
from isogeo.errors import InputError, UndefinedEntryError
from isogeo.surd import Surd, parse

# entries of the two tables, written out independently of the data files
M1 = {(1, 2, 3): "sqrt(3/2)", (3, 4, 5): "sqrt(3/2)", (1, 5, 6): "sqrt(3/2)",
      (2, 4, 6): "-sqrt(3/2)", (1, 3, 5): "-2*sqrt(3/2)"}


@pytest.fixture(scope="module")
def t1():
    return homog6.load_alpha_table(1)


@pytest.fixture(scope="module")
def t2():
    return homog6.load_alpha_table(2)


def test_m1_entries(t1):
    assert {k: t1.expression(*k) for k in t1.entries} == M1
    assert t1.expression(3, 2, 1) == "sqrt(3/2)"
    assert t1.value(1, 1, 2) == Surd(0)


def _bar(i):
    return i + 6


# each m=2 block: (entry with one bar on the middle slot, sign of that entry,
# entries with bars on slots 0, 2 and all three, which carry the opposite sign)
M2_BLOCKS = [((1, 5, 6), -1, 1), ((2, 4, 6), -1, 1), ((1, 2, 3), -1, 1), ((3, 4, 5), 1, 1), ((1, 3, 5), 2, 2)]


def test_m2_entries(t2):
    expected = {}
    for (i, j, k), first, scale in M2_BLOCKS:
        sign = 1 if first > 0 else -1
        base = scale * sign
        expected[tuple(sorted((i, _bar(j), k)))] = base
        for key in ((_bar(i), j, k), (i, j, _bar(k)), (_bar(i), _bar(j), _bar(k))):
            expected[tuple(sorted(key))] = -base
    text = {1: "sqrt(3/2)", -1: "-sqrt(3/2)", 2: "2*sqrt(3/2)", -2: "-2*sqrt(3/2)"}
    assert {k: t2.expression(*k) for k in t2.entries} == {k: text[v] for k, v in expected.items()}


def test_file_strings_round_trip(t1, t2):
    for table in (t1, t2):
        for key, text in table.expressions.items():
            assert text.replace(" ", "") == table.expression(*key)


def test_dense_table_is_symmetric_and_trace_free(t2):
    a = t2.dense()
    assert np.array_equal(a, a.transpose(1, 0, 2)) and np.array_equal(a, a.transpose(2, 1, 0))
    assert np.max(np.abs(np.einsum("iik->k", a))) == 0.0


def test_index_range(t1):
    with pytest.raises(InputError):
        t1.value(0, 1, 2)
    with pytest.raises(InputError):
        homog6.load_alpha_table(3)


def test_frame_conversion(t1):
    fc = homog6.frame_convert(t1)
    # alpha_f(1,3,5) / (lambda_3 - lambda_5) with lambda_3 = 2 - sqrt3, lambda_5 = -1
    lam = fc.lambdas
    assert float(lam[2]) == pytest.approx(2 - math.sqrt(3))
    assert float(lam[4]) == pytest.approx(-1.0)
    value = fc.christoffel(1, 3, 5)
    assert value == fc.alpha_f_value(1, 3, 5) / (Surd(3) - Surd(0, 0, 1))
    assert float(value) == pytest.approx(-math.sqrt(6) - math.sqrt(2))
    with pytest.raises(UndefinedEntryError):
        fc.christoffel(1, 3, 3)


def test_family_coefficients_reproduce_display():
    expected = {(1, 2): "sqrt(2/3)", (1, 3): "1/sqrt(2)", (1, 5): "sqrt(2)", (2, 4): "sqrt(2)/3",
                (2, 3): "1/sqrt(6)", (4, 5): "sqrt(2/3)"}
    for (a, b), text in expected.items():
        assert homog6.family_coefficient(a, b, 6) == parse(text)


def test_family_matrices_m1(t1):
    fam = homog6.build_isospectral_family(t1, 6)
    r3 = math.sqrt(3)
    assert np.allclose(np.diag(fam.L0), [r3, 1 / r3, 0, -1 / r3, -r3])
    assert fam.L1[1, 3] == pytest.approx(-1 / r3)
    assert np.allclose(fam.L1, fam.L1.T)


@pytest.mark.parametrize("m", [1, 2])
def test_families_isospectral_with_constant_kernel(m):
    table = homog6.load_alpha_table(m)
    for fam in homog6.all_families(table):
        assert homog6.isospectral_scan(fam).value < 1e-9
        assert homog6.kernel_constancy(fam).value < 1e-8


def test_rotating_kernel_control():
    fam = homog6.rotating_kernel_family()
    assert homog6.isospectral_scan(fam).passed
    assert homog6.kernel_constancy(fam).value > 0.1


@pytest.mark.parametrize("m", [1, 2])
def test_criteria_hold(m):
    reports = homog6.homogeneity_criteria(homog6.load_alpha_table(m))
    assert [r.criterion for r in reports] == ["i", "ii", "iii", "iv", "v", "vi"]
    assert all(r.passed for r in reports)


def test_criteria_fail_on_violating_table(t1):
    bad = t1.with_entry(1, 3, 6, parse("sqrt(3/2)"))
    reports = {r.criterion: r for r in homog6.homogeneity_criteria(bad)}
    assert not any(r.passed for r in reports.values())


@pytest.mark.parametrize("m", [1, 2])
def test_invariant_weyl_on_tables(m):
    from isogeo.identities import invariant_weyl

    inv = homog6.table_invariants(homog6.load_alpha_table(m))
    assert invariant_weyl(inv).value < 1e-10
    assert max(inv.residuals().values()) < 1e-10
