from __future__ import annotations

import sys

import pytest

from rcmphase.graph_model import parse_graph_spec

SPECS = {
    "k2": "r=2 m=0 edges=1-2",
    "p3": "r=3 m=0 edges=1-2,2-3",
    "c3": "r=3 m=0 edges=1-2,2-3,3-1",
    "c4": "r=4 m=0 edges=1-2,2-3,3-4,1-4",
    # 4-cycle with one pinned vertex: core path 1-2-3, endpoint 4 joined to 1 and 3
    "rooted_c4": "r=3 m=1 edges=1-2,2-3,1-4,3-4",
    # core 1-2, 1-3, 3-4 with endpoint 5 hanging from core vertex 1
    "pendant_tree": "r=4 m=1 edges=1-2,1-3,3-4,1-5",
    # triangle 1-2-3 with a pendant edge 3-4; balanced but not strongly balanced
    "paw": "r=4 m=0 edges=1-2,2-3,3-4,1-3",
}


@pytest.fixture(params=sorted(SPECS))
def any_graph(request):
    return parse_graph_spec(SPECS[request.param])


@pytest.fixture
def graphs():
    return {k: parse_graph_spec(v) for k, v in SPECS.items()}


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(results):
        ok, detail = results[k]
        terminalreporter.write_line(f"criterion {k}: {'PASS' if ok else 'FAIL'}  {detail}")
