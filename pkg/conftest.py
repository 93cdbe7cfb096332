import os
from pathlib import Path

import hypothesis
import pytest

from components.family_generator import minimal_nonheroes
from utils.settings_manager import SettingsManager

hypothesis.settings.register_profile("fast", max_examples=25, deadline=None)
hypothesis.settings.register_profile("thorough", max_examples=300, deadline=None)
hypothesis.settings.load_profile(os.getenv("HYPOTHESIS_PROFILE", "fast"))

FIXTURES = Path(__file__).parent / "data" / "fixtures"


def pytest_addoption(parser):
    parser.addoption("--runslow", action="store_true", default=False, help="run slow exhaustive tests")


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: exhaustive sweep, needs --runslow")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--runslow"):
        return
    skip_slow = pytest.mark.skip(reason="needs --runslow")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip_slow)


@pytest.fixture
def settings_override():
    """Apply settings overrides for one test and restore the previous settings afterwards."""
    manager = SettingsManager()
    saved = manager.get()

    def apply(**overrides):
        manager.update(**overrides)
        return manager.get()

    yield apply
    manager.restore(saved)


@pytest.fixture(scope="session")
def nonheroes():
    return minimal_nonheroes()


@pytest.fixture(scope="session")
def fixtures_dir():
    return FIXTURES
