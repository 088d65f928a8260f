"""Byte-for-byte comparison of CLI reports against checked-in files.

Regenerate after an intended schema change with
``BIRKHOFF_UPDATE_GOLDEN=1 python3 -m pytest tests/test_golden.py``.
"""
import os
from pathlib import Path

import pytest

from birkhoff_sections.cli import main

HERE = Path(__file__).parent / "golden"

CASES = {
    "toric_sphere": ["analyze-toric", HERE / "sphere_curve.json"],
    "separable_two_well_c0.1": ["analyze-separable", HERE / "two_well_profiles.json", "--c", "0.1"],
    "separable_two_well_c0.35": ["analyze-separable", HERE / "two_well_profiles.json", "--c", "0.35"],
    "separable_two_well_c0.7": ["analyze-separable", HERE / "two_well_profiles.json", "--c", "0.7"],
    "foliation_figure_eight": ["analyze-foliation", HERE / "figure_eight_model.json"],
    "semicircle_2": ["gen-semicircle", "2"],
}


@pytest.mark.parametrize("name", sorted(CASES))
def test_report_matches_golden(name, tmp_path):
    out = tmp_path / "report.json"
    main([str(a) for a in CASES[name]] + ["--out", str(out)])
    expected = HERE / f"{name}.expected.json"
    if os.environ.get("BIRKHOFF_UPDATE_GOLDEN"):
        expected.write_bytes(out.read_bytes())
    assert out.read_bytes() == expected.read_bytes()
