import json

import numpy as np
import pytest

from birkhoff_sections import io as bio
from birkhoff_sections.sections import plan_is_valid
from birkhoff_sections.synthesis import synthesize_section
from birkhoff_sections.toric import make_k_semicircle_curve

from corpus import full_corpus


def test_manifold_round_trip():
    for name, m in full_corpus().items():
        d = bio.manifold_to_dict(m)
        again = bio.manifold_from_dict(json.loads(bio.dumps(d)))
        assert bio.manifold_to_dict(again) == json.loads(bio.dumps(d)), name


def test_plan_round_trip_validates(two_well):
    from birkhoff_sections.separable import build_level_foliation
    from birkhoff_sections.sections import plan_to_dict
    m = build_level_foliation(two_well, 0.35)
    plan = synthesize_section(m)
    again = bio.plan_from_dict(json.loads(bio.dumps(plan_to_dict(plan, m))), m)
    assert plan_is_valid(m, again)[0]
    assert again.n_boundary == plan.n_boundary


def test_curve_csv_with_header_and_comments():
    c = bio.parse_curve_text("x,y\n# sphere\n0,1\n0.5,0.5\n\n1,0\n")
    assert c.points.shape == (3, 2)


def test_curve_csv_error_has_line():
    with pytest.raises(bio.InputError, match="line 3"):
        bio.parse_curve_text("0,1\n0.5,0.5\nabc,1\n1,0\n")


def test_curve_json_error_has_line():
    with pytest.raises(bio.InputError, match="line 2"):
        bio.parse_curve_text("[[0, 1],\n [0.5 0.5]]")


def test_curve_json_round_trip(tmp_path):
    c = make_k_semicircle_curve(2)
    p = tmp_path / "k2.json"
    p.write_text(bio.curve_to_json(c))
    assert np.allclose(bio.read_curve(p).points, c.points, atol=1e-9)


def test_dumps_is_stable():
    text = bio.dumps({"b": 0.1 + 0.2, "a": [np.float64(-0.0), np.int64(3), float("nan")]})
    assert text == '{\n  "a": [\n    0.0,\n    3,\n    null\n  ],\n  "b": 0.3\n}\n'


def test_bad_manifold_reports_location():
    with pytest.raises(bio.InputError, match=r"families\[0\]"):
        bio.manifold_from_dict({"families": [{"id": "x"}]})
