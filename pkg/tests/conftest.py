import os
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "repo", deadline=None, max_examples=40, suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "repo"))

ROOT = Path(__file__).resolve().parent.parent
MINI = ROOT / "benchmarks" / "mini"
GOLDEN = Path(__file__).resolve().parent / "golden"


@pytest.fixture
def mini_dir():
    return MINI


@pytest.fixture
def golden_dir():
    return GOLDEN
