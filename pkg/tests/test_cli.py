import json

import pytest

from isogeo.cli import main, run_verify, RunConfig, UsageError
from isogeo.report import render_markdown, report_body


def test_list_models(capsys):
    assert main(["list-models"]) == 0
    rows = capsys.readouterr().out.strip().splitlines()
    assert [r.split()[0] for r in rows[1:]] == ["g1-sphere", "g2-product", "g3-cartan", "g6-hom-m1", "g6-hom-m2"]


@pytest.mark.parametrize(
    "argv",
    [
        ["verify", "--model", "nonexistent"],
        ["verify", "--model", "g2-product", "--suites", "bogus"],
        ["verify", "--model", "g2-product", "--points", "0"],
        ["verify", "--model", "g2-product", "--tol", "weyl"],
        ["verify", "--model", "g2-product", "--fd-step", "1.0"],
        ["export-alpha", "--model", "g6-hom-m1", "--point", "0"],
        ["frobnicate"],
    ],
)
def test_usage_errors_exit_2(argv):
    assert main(argv) == 2


def test_verify_passes_on_product(tmp_path):
    out = tmp_path / "r.json"
    code = main(["verify", "--model", "g2-product", "--suites", "self,invariants,weyl",
                 "--points", "16", "--seed", "1", "--out", str(out)])
    report = json.loads(out.read_text())
    assert code == 0 and report["summary"]["failed"] == 0
    s = report["summary"]
    assert s["passed"] + s["failed"] + s["skipped"] == s["total"] == len(report["results"])


def test_verify_tables():
    assert main(["verify", "--model", "g6-hom-m1", "--suites", "homog6,weyl"]) == 0


def test_tabulated_models_skip_point_suites():
    report = run_verify(RunConfig("g6-hom-m2", ("self", "lift", "cartan")))
    skipped = [r for r in report["results"] if r["status"] == "skipped"]
    assert {r["name"] for r in skipped} == {"self", "lift"}
    assert all(r["note"].startswith("skipped: not applicable") for r in skipped)


def test_failing_check_exits_1():
    assert main(["verify", "--model", "g3-cartan", "--suites", "cartan", "--tol", "cartan=1e-30"]) == 1


def test_tolerance_override_and_warning():
    report = run_verify(RunConfig("g3-cartan", ("cartan",), tol_overrides={"cartan": 0.5, "nope": 1.0}))
    assert report["results"][0]["tol"] == 0.5
    assert any("nope" in w for w in report["warnings"])


def test_reports_are_deterministic(tmp_path):
    bodies = []
    for k in range(2):
        out = tmp_path / f"r{k}.json"
        main(["verify", "--model", "g3-cartan", "--suites", "invariants,symmetry", "--points", "2",
              "--seed", "5", "--out", str(out)])
        bodies.append(report_body(json.loads(out.read_text())))
    assert json.dumps(bodies[0], sort_keys=True) == json.dumps(bodies[1], sort_keys=True)


def test_markdown_rendering(tmp_path):
    out = tmp_path / "r.md"
    assert main(["verify", "--model", "g6-hom-m1", "--suites", "cartan", "--out", str(out)]) == 0
    text = out.read_text()
    assert text.startswith("# Verification report: g6-hom-m1") and "| cartan | pass |" in text
    report = run_verify(RunConfig("g6-hom-m1", ("cartan",)))
    assert render_markdown(report).count("\n|") == 3


def test_export_table(capsys):
    assert main(["export-alpha", "--model", "g6-hom-m1"]) == 0
    data = json.loads(capsys.readouterr().out)
    triples = [(c["i"], c["j"], c["k"]) for c in data["components"]]
    assert triples == sorted(triples) and len(triples) == 5
    assert data["components"][1]["value_expression"] == "-2*sqrt(3/2)"


def test_export_points(capsys):
    assert main(["export-alpha", "--model", "g2-product"]) == 0
    assert json.loads(capsys.readouterr().out)["components"] == []
    assert main(["export-alpha", "--model", "g3-cartan", "--point", "2", "--seed", "4"]) == 0
    data = json.loads(capsys.readouterr().out)
    labels = data["frame_labels"]
    assert data["components"]
    for c in data["components"]:
        assert len({labels[c["i"] - 1], labels[c["j"] - 1], labels[c["k"] - 1]}) == 3


def test_run_config_validation():
    with pytest.raises(UsageError):
        RunConfig("g3-cartan", ())
