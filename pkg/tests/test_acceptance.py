"""Acceptance criteria, one test per criterion, each with its runtime budget."""
import json
import math
import time
from fractions import Fraction

import numpy as np
import pytest

from isogeo import homog6
from isogeo.cli import main
from isogeo.family import angle_data, focal_spectrum, reflection_tau
from isogeo.identities import (
    alpha_route_check,
    alpha_t_independence,
    cartan_identity,
    closed_form_checks,
    codazzi_check,
    gauss_check,
    invariant_weyl,
    symmetry_check,
)
from isogeo.local import LocalGeometry
from isogeo.models import registry_get
from isogeo.models.geometry import jet, model_self_test, sample_points
from isogeo.numkit import max_abs
from isogeo.quadric import ghat, ghat_at_t, invariant_set
from isogeo.report import report_body
from isogeo.surd import Surd

POINT_MODELS = ["g1-sphere", "g2-product", "g3-cartan"]


class Budget:
    def __init__(self, seconds):
        self.seconds = seconds

    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.elapsed = time.perf_counter() - self.start
        if exc[0] is None:
            assert self.elapsed < self.seconds, f"took {self.elapsed:.1f} s, budget {self.seconds} s"


@pytest.fixture(scope="module")
def cartan_points():
    spec = registry_get("g3-cartan")
    return spec, sample_points(spec, 16, seed=2024)


@pytest.mark.criterion(1, "focal spectrum of g=6 is {+-sqrt3, +-1/sqrt3, 0}, exactly")
def test_focal_spectrum():
    with Budget(1):
        r3 = Surd.sqrt(3)
        target = [r3, Surd.sqrt(Fraction(1, 3)), Surd(0), -Surd.sqrt(Fraction(1, 3)), -r3]
        floats = [math.sqrt(3), 1 / math.sqrt(3), 0.0, -1 / math.sqrt(3), -math.sqrt(3)]
        for j in range(1, 7):
            assert focal_spectrum(6, j, exact=True) == target
            assert max_abs(np.array(focal_spectrum(6, j)) - floats) < 1e-12


M1 = {(1, 2, 3): "sqrt(3/2)", (3, 4, 5): "sqrt(3/2)", (1, 5, 6): "sqrt(3/2)",
      (2, 4, 6): "-sqrt(3/2)", (1, 3, 5): "-2*sqrt(3/2)"}
# m=2, barred index i written as i + 6
M2 = {(1, 6, 11): "-sqrt(3/2)", (5, 6, 7): "sqrt(3/2)", (1, 5, 12): "sqrt(3/2)", (11, 12, 7): "sqrt(3/2)",
      (2, 6, 10): "-sqrt(3/2)", (4, 6, 8): "sqrt(3/2)", (2, 4, 12): "sqrt(3/2)", (8, 10, 12): "sqrt(3/2)",
      (1, 3, 8): "-sqrt(3/2)", (2, 3, 7): "sqrt(3/2)", (1, 2, 9): "sqrt(3/2)", (7, 8, 9): "sqrt(3/2)",
      (3, 5, 10): "sqrt(3/2)", (4, 5, 9): "-sqrt(3/2)", (3, 4, 11): "-sqrt(3/2)", (9, 10, 11): "-sqrt(3/2)",
      (1, 5, 9): "2*sqrt(3/2)", (3, 5, 7): "-2*sqrt(3/2)", (1, 3, 11): "-2*sqrt(3/2)", (7, 9, 11): "-2*sqrt(3/2)"}


@pytest.mark.criterion(2, "alpha tables reproduced exactly; criteria (i)-(iv) hold in exact arithmetic")
def test_alpha_tables():
    with Budget(1):
        for m, literal in ((1, M1), (2, M2)):
            table = homog6.load_alpha_table(m)
            expected = {tuple(sorted(k)): v for k, v in literal.items()}
            assert {k: table.expression(*k) for k in table.entries} == expected
            for criterion in (homog6.criterion_i, homog6.criterion_ii, homog6.criterion_iii, homog6.criterion_iv):
                assert criterion(table) == Surd(0)


@pytest.mark.criterion(3, "linear isospectral families: spectrum and kernel constant; rotating kernel flagged")
def test_isospectral_families():
    with Budget(5):
        for m in (1, 2):
            for fam in homog6.all_families(homog6.load_alpha_table(m)):
                assert homog6.isospectral_scan(fam, 64).value < 1e-9
                assert homog6.kernel_constancy(fam, 64).value < 1e-8
        control = homog6.rotating_kernel_family()
        assert homog6.isospectral_scan(control, 64).value < 1e-9
        assert homog6.kernel_constancy(control, 64).value > 0.1


@pytest.mark.criterion(4, "invariant Weyl identity on both tables and at g3-cartan points")
def test_invariant_weyl(cartan_points):
    with Budget(60):
        for m in (1, 2):
            assert invariant_weyl(homog6.table_invariants(homog6.load_alpha_table(m))).value < 1e-10
        spec, pts = cartan_points
        for p in pts[:4]:
            assert invariant_weyl(invariant_set(jet(spec, p)), 1e-4).value < 1e-4


@pytest.mark.criterion(5, "alpha by lift and by connection agree; alpha independent of t")
def test_alpha_two_routes(cartan_points):
    with Budget(120):
        spec, pts = cartan_points
        grid = [-0.35, -0.2, 0.1, 0.25, 0.4]
        for p in pts[:8]:
            j = jet(spec, p)
            a_lift, routes = alpha_route_check(j)
            assert routes[0].value < 1e-6 and routes[1].value < 1e-6
            assert alpha_t_independence(j, grid, a_lift).value < 1e-5


@pytest.mark.criterion(6, "invariant metric independent of t on all point models")
def test_ghat_t_independence():
    with Budget(30):
        grid = np.linspace(-0.45, 0.45, 10)
        for name in POINT_MODELS:
            spec = registry_get(name)
            for p in sample_points(spec, 6, seed=6):
                j = jet(spec, p)
                g0 = ghat(j)
                assert max(max_abs(ghat_at_t(j, t) - g0) for t in grid) < 1e-8


@pytest.mark.criterion(7, "Cartan identity for g in {2,3,6}; Weyl passing implies Cartan passing")
def test_cartan(tmp_path):
    with Budget(1):
        for g in (2, 3, 6):
            assert cartan_identity(angle_data(g)).value < 1e-12
        for model in ("g2-product", "g3-cartan", "g6-hom-m1"):
            out = tmp_path / f"{model}.json"
            main(["verify", "--model", model, "--suites", "weyl,cartan", "--points", "1", "--out", str(out)])
            rows = json.loads(out.read_text())["results"]
            assert [r["status"] for r in rows if r["name"] == "implication.weyl_cartan"] == ["pass"]


@pytest.mark.criterion(8, "Codazzi and Gauss equations of the lift: g3 by finite differences, g=2 exactly")
def test_codazzi_gauss(cartan_points):
    with Budget(180):
        spec, pts = cartan_points
        for p in pts[:2]:
            local = LocalGeometry(spec, p)
            assert codazzi_check(local).value < 1e-3
            assert gauss_check(local).value < 1e-3
        for kw in ({}, dict(d1=2, d2=3, theta=0.6)):
            g2 = registry_get("g2-product", **kw)
            for p in sample_points(g2, 4, seed=8):
                assert all(r.value < 1e-10 for r in closed_form_checks(jet(g2, p)))


@pytest.mark.criterion(9, "reflections reverse alpha and are involutions")
def test_symmetry(cartan_points):
    with Budget(60):
        spec, pts = cartan_points
        for p in pts[:4]:
            j = jet(spec, p)
            for k in (1, 2, 3):
                assert symmetry_check(j, k).value < 1e-5
                assert reflection_tau(j, k).involution < 1e-8


@pytest.mark.criterion(10, "model self-tests, B0^6 = -I and projector algebra")
def test_self_tests(cartan_points):
    with Budget(30):
        spec, pts = cartan_points
        res = {r.name: r for r in model_self_test(spec, pts)}
        assert res["self.spectrum_constancy"].value < 1e-6
        for p in pts:
            assert np.allclose(jet(spec, p).lambdas, [math.sqrt(3), 0, -math.sqrt(3)], atol=1e-6)
        keys = ("projector_sum", "projector_algebra")
        for m in (1, 2):
            inv = homog6.table_invariants(homog6.load_alpha_table(m))
            assert max_abs(np.linalg.matrix_power(inv.B0, 6) + np.eye(inv.n)) < 1e-9
            assert all(inv.residuals()[k] < 1e-9 for k in keys)
        for name in POINT_MODELS:
            model = registry_get(name)
            for p in sample_points(model, 4, seed=10):
                inv = invariant_set(jet(model, p))
                assert all(inv.residuals()[k] < 1e-9 for k in keys)


@pytest.mark.criterion(11, "CLI reports are byte-identical for equal seeds; exit codes 0/1/2")
def test_cli_contract(tmp_path):
    with Budget(10):
        texts = []
        for k in range(2):
            out = tmp_path / f"r{k}.json"
            assert main(["verify", "--model", "g3-cartan", "--suites", "self,invariants,weyl,cartan",
                         "--points", "3", "--seed", "42", "--out", str(out)]) == 0
            body = report_body(json.loads(out.read_text()))
            texts.append(json.dumps(body, sort_keys=True, indent=2))
        assert texts[0] == texts[1]
        assert main(["verify", "--model", "g2-product", "--suites", "self,invariants,weyl",
                     "--points", "16", "--seed", "1"]) == 0
        assert main(["verify", "--model", "g6-hom-m1", "--suites", "homog6,weyl"]) == 0
        assert main(["verify", "--model", "g3-cartan", "--suites", "cartan", "--tol", "cartan=1e-30"]) == 1
        assert main(["verify", "--model", "nonexistent"]) == 2
        assert main(["verify", "--model", "g3-cartan", "--suites", "nope"]) == 2
