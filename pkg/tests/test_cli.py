import json
import subprocess
import sys
from pathlib import Path

import pytest

from birkhoff_sections import io as bio
from birkhoff_sections.cli import main
from birkhoff_sections.separable import build_level_foliation
from birkhoff_sections.toric import ellipsoid_curve, round_sphere_curve, toric_model

from corpus import hand_models

TWO_WELL = [{"y": 0, "value": 0, "kind": "min"}, {"y": 1, "value": 0.3, "kind": "max"},
            {"y": 2, "value": 0.2, "kind": "min"}]


def run(argv, capsys):
    code = main([str(a) for a in argv])
    return code, json.loads(capsys.readouterr().out)


@pytest.fixture
def files(tmp_path):
    sphere = tmp_path / "sphere.json"
    sphere.write_text(bio.curve_to_json(round_sphere_curve()))
    ell = tmp_path / "e12.csv"
    ell.write_text("x,y\n" + "\n".join(f"{x!r},{y!r}" for x, y in ellipsoid_curve(1, 2).points.tolist()))
    prof = tmp_path / "two_well.json"
    prof.write_text(json.dumps({"g1": TWO_WELL, "g2": TWO_WELL}))
    fol = tmp_path / "sphere_model.json"
    fol.write_text(bio.dumps(bio.manifold_to_dict(toric_model(round_sphere_curve()))))
    fe = tmp_path / "figure_eight.json"
    fe.write_text(bio.dumps(bio.manifold_to_dict(hand_models()["figure-eight"])))
    return {"sphere": sphere, "ell": ell, "prof": prof, "fol": fol, "fe": fe, "dir": tmp_path}


def test_toric_sphere_report(files, capsys):
    code, r = run(["analyze-toric", files["sphere"]], capsys)
    assert code == 0 and r["schema_version"] == 1 and r["ok"]
    cl = r["clauses"]
    assert cl["disk_at_end_0"] and cl["disk_at_end_1"] and cl["annulus"]["class"] == [1, -1]
    assert r["boundary_orbit_lower_bound"] == 0 and r["capacity"]["r"] == 1.0
    assert r["plan"]["n_boundary"] == 1 and r["plan"]["numeric_check"]["ok"]


def test_toric_ellipsoid_capacity(files, capsys):
    code, r = run(["analyze-toric", files["ell"]], capsys)
    assert code == 0
    assert r["capacity"]["r"] == pytest.approx(1.0) and r["capacity"]["c_B"] == r["capacity"]["c_Z"] == r["capacity"]["r"]


def test_semicircle_pipeline(files, capsys):
    k3 = files["dir"] / "k3.json"
    assert main(["gen-semicircle", "3", "--out", str(k3)]) == 0
    code, r = run(["analyze-toric", k3, "--svg", files["dir"] / "k3.svg"], capsys)
    assert code == 0 and r["boundary_orbit_lower_bound"] == 3 and r["plan"]["n_boundary"] >= 3
    assert (files["dir"] / "k3.svg").read_text().startswith("<?xml")


@pytest.mark.parametrize("c, answer, extra", [(0.1, True, None), (0.35, False, "A + B < c fails"),
                                              (0.7, True, None)])
def test_separable_golden(files, capsys, c, answer, extra):
    code, r = run(["analyze-separable", files["prof"], "--c", c], capsys)
    assert code == 0
    d = r["disk_gss"]
    assert d["answer"] is answer and d["violated_clause"] == extra
    if c == 0.7:
        assert 0.3 < d["witness"] < 0.4
    assert r["plan"]["genus"] is not None and r["plan"]["numeric_check"]["ok"]


def test_singular_level_error(files, capsys):
    code, r = run(["analyze-separable", files["prof"], "--c", 0.5], capsys)
    assert code == 1 and not r["ok"]
    (e,) = r["errors"]
    assert e["type"] == "singular-level" and sorted([e["v1"], e["v2"]]) == [0.2, 0.3]


def test_foliation_reports(files, capsys):
    code, r = run(["analyze-foliation", files["fol"]], capsys)
    assert code == 0 and r["plan"]["n_boundary"] == 1
    code, r = run(["analyze-foliation", files["fe"], "--svg", files["dir"] / "fe.svg"], capsys)
    assert code == 0 and r["plan"]["numeric_check"]["ok"]


def test_foliation_dangling_reference(files, capsys):
    d = json.loads(files["fe"].read_text())
    d["families"][0]["end_hi"]["face_id"] = "ghost"
    bad = files["dir"] / "bad.json"
    bad.write_text(json.dumps(d))
    code, r = run(["analyze-foliation", bad], capsys)
    assert code == 1 and r["errors"] and all("location" in e for e in r["errors"])


def test_user_plan_checked(files, capsys):
    plan = files["dir"] / "plan.json"
    plan.write_text(json.dumps({"segments": [{"family": "T", "s_lo": 0, "s_hi": 1, "class": [1, 1]}],
                                "boundaries": []}))
    code, r = run(["analyze-foliation", files["fol"], "--plan", plan], capsys)
    assert code == 1 and r["user_plan"]["valid"] is False
    plan.write_text(json.dumps({"segments": [{"family": "T", "s_lo": 0, "s_hi": 1, "class": [0, -1]}],
                                "boundaries": [{"kind": "orbit-end", "family": "T", "end": "lo",
                                                "multiplicity": 1}]}))
    code, r = run(["analyze-foliation", files["fol"], "--plan", plan], capsys)
    assert code == 0 and r["user_plan"]["valid"] and r["user_plan"]["topology"]["genus"] == 0


def test_malformed_curve_reports_line(files, capsys):
    bad = files["dir"] / "bad.csv"
    bad.write_text("0,1\n0.5;0.5\n1,0\n")
    code, r = run(["analyze-toric", bad], capsys)
    assert code == 1 and "line 2" in r["errors"][0]["message"]


def test_bad_bound_is_config_error(files, capsys):
    code, r = run(["analyze-toric", files["sphere"], "--bound", 0], capsys)
    assert code == 1 and r["errors"][0]["type"] == "config"


def test_reports_are_byte_identical(files):
    outs = []
    for i in range(2):
        out = files["dir"] / f"r{i}.json"
        main(["analyze-separable", str(files["prof"]), "--c", "0.35", "--out", str(out)])
        outs.append(out.read_bytes())
    assert outs[0] == outs[1] and outs[0].endswith(b"\n") and b"\r" not in outs[0]


def test_module_entry_point(files):
    done = subprocess.run([sys.executable, "-m", "birkhoff_sections.cli", "analyze-toric", str(files["sphere"])],
                          capture_output=True, text=True, check=True)
    assert json.loads(done.stdout)["plan"]["n_boundary"] == 1
