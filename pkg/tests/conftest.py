import json
import sys

import pytest

from pcnroute import _backend
from pcnroute.fees import TabulatedFeeMap
from pcnroute.graph import ArcPolicy, build_graph
from pcnroute.ingest import fixture_path, load_snapshot_file

AMPLE = 1_000_000


@pytest.fixture(params=sorted(_backend.KERNELS))
def backend(request):
    return request.param


@pytest.fixture
def fig3():
    return build_graph([
        ("s", "i", ArcPolicy(2, 0.2, AMPLE)),
        ("s", "j", ArcPolicy(2, 0.1, AMPLE)),
        ("i", "t", ArcPolicy(2, 0.1, AMPLE)),
        ("j", "t", ArcPolicy(15, 0.5, AMPLE)),
    ])


@pytest.fixture
def fig4():
    g, _ = load_snapshot_file(fixture_path("fig4"))
    with open(fixture_path("fig4_fees")) as fh:
        fees = TabulatedFeeMap.from_json(json.load(fh), g)
    return g, fees


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance") or sys.modules.get("tests.test_acceptance")
    lines = getattr(mod, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
