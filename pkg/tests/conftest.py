import json
import os
import sys
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

sys.path.insert(0, os.path.dirname(__file__))

from mlsr.kripke import Model  # noqa: E402

settings.register_profile("default", deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

GOLDEN = Path(__file__).parent / "golden"


def loop_model() -> Model:
    return Model(frozenset("ab"), {"r": {("a", "b"), ("b", "a")}}, {})


def isolated_reflexive() -> Model:
    return Model(frozenset("ab"), {"r": {("a", "a"), ("b", "b")}}, {})


def universal_pair() -> Model:
    return Model(frozenset("ab"), {"r": {(x, y) for x in "ab" for y in "ab"}}, {})


def edgeless(n: int, props=None) -> Model:
    ws = [f"w{i}" for i in range(n)]
    return Model(frozenset(ws), {"r": set()}, props or {})


@pytest.fixture
def golden():
    def read(name: str):
        text = (GOLDEN / name).read_text()
        return json.loads(text) if name.endswith(".json") else text
    return read


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is not None and getattr(mod, "RESULTS", None):
        terminalreporter.section("acceptance criteria")
        for line in mod.RESULTS:
            terminalreporter.write_line(line)
