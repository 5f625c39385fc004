"""Shared fixtures for the nlos_link test suite."""
import json
import os

import pytest

from nlos_link.core.key_agreement import PublicParams
from nlos_link.core.location_mgmt import CellGrid, LocationDB
from nlos_link.simulator.config import load_config, load_script, parse_config

ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
SCENARIOS = os.path.join(ROOT, "scenarios")
DEMO_CONFIG = os.path.join(SCENARIOS, "demo.json")
DEMO_SCRIPT = os.path.join(SCENARIOS, "demo_script.json")
GOLDEN_TRACE = os.path.join(ROOT, "tests", "golden", "demo_trace.jsonl")
DEMO_TICKS = 5


def pytest_addoption(parser):
    parser.addoption(
        "--update-golden",
        action="store_true",
        default=False,
        help="Rewrite tests/golden/demo_trace.jsonl from the current build",
    )


@pytest.fixture
def update_golden(request):
    return request.config.getoption("--update-golden")


@pytest.fixture
def seed():
    return 20240611


@pytest.fixture
def column_grid():
    """4x4 grid, 4-neighbor, column 1 reporting"""
    return CellGrid(rows=4, cols=4, cell_size=1.0, reporting=frozenset((r, 1) for r in range(4)))


@pytest.fixture
def db():
    return LocationDB()


@pytest.fixture
def small_params():
    """n = 23, g = 5"""
    return PublicParams(n=23, g=5)


@pytest.fixture
def demo_config_path():
    return DEMO_CONFIG


@pytest.fixture
def demo_script_path():
    return DEMO_SCRIPT


@pytest.fixture
def golden_path():
    return GOLDEN_TRACE


@pytest.fixture
def demo_ticks():
    return DEMO_TICKS


@pytest.fixture
def demo_data():
    with open(DEMO_CONFIG, "r", encoding="utf-8") as f:
        return json.load(f)


@pytest.fixture
def demo_config():
    return load_config(DEMO_CONFIG)


@pytest.fixture
def demo_requests():
    return load_script(DEMO_SCRIPT)


@pytest.fixture
def quiet_config(demo_data):
    """The demo room without time-of-flight noise"""
    demo_data["noise"]["tof_sigma"] = 0.0
    return parse_config(demo_data)


@pytest.fixture
def write_json(tmp_path):
    def _write(name, data):
        path = tmp_path / name
        path.write_text(json.dumps(data), encoding="utf-8")
        return str(path)
    return _write
