import sys
from pathlib import Path

import pytest
from hypothesis import settings

sys.path.insert(0, str(Path(__file__).parent))

settings.register_profile("ci", max_examples=60, deadline=None)
settings.load_profile("ci")

from birkhoff_sections.separable import SeparableSystem, two_well_profile  # noqa: E402
from birkhoff_sections.toric import round_sphere_curve, toric_model  # noqa: E402


@pytest.fixture
def sphere_curve():
    return round_sphere_curve()


@pytest.fixture
def sphere_model():
    return toric_model(round_sphere_curve())


@pytest.fixture
def two_well():
    g = two_well_profile()
    return SeparableSystem(g, g)


def pytest_terminal_summary(terminalreporter):
    """One pass/fail line per acceptance criterion that ran."""
    acc = sys.modules.get("test_acceptance")
    if acc is None or not acc.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(acc.RESULTS):
        title, ok, detail = acc.RESULTS[n]
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] criterion {n}: {title} -- {detail}")
