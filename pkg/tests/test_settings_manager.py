import pytest
from pydantic import ValidationError

from utils.memo_cache import CanonicalMemo
from utils.settings_manager import HeroixSettings, SettingsManager, get_settings


@pytest.fixture
def manager():
    manager = SettingsManager()
    saved = manager.get()
    yield manager
    manager.restore(saved)


def test_singleton():
    assert SettingsManager() is SettingsManager()


def test_environment_overrides(manager, monkeypatch):
    monkeypatch.setenv("HEROIX_MAX_N", "6")
    monkeypatch.setenv("HEROIX_LOG_LEVEL", "debug")
    settings = manager.reload()
    assert settings.max_n == 6
    assert settings.log_level == "DEBUG"
    assert get_settings() is settings


def test_family_caps_come_from_the_environment(manager, monkeypatch):
    monkeypatch.setenv("HEROIX_D_MAX_N", "20")
    monkeypatch.setenv("HEROIX_A_MAX_N", "5")
    settings = manager.reload()
    assert (settings.d_max_n, settings.a_max_n) == (20, 5)


def test_update_returns_the_previous_settings(manager):
    before = manager.get()
    previous = manager.update(forest_max_n=4)
    assert previous is before
    assert get_settings().forest_max_n == 4


def test_invalid_values_are_rejected(manager):
    with pytest.raises(ValidationError):
        manager.update(max_n=-1)
    with pytest.raises(ValidationError):
        HeroixSettings(log_level="loud")


def test_memo_counts_hits_and_misses():
    memo = CanonicalMemo("test")
    assert memo.get("x") is None
    memo.put("x", 1)
    assert "x" in memo
    assert memo.get("x") == 1
    assert (memo.hits, memo.misses, len(memo)) == (1, 1, 1)
    memo.clear()
    assert len(memo) == 0 and memo.hits == 0


def test_memo_evicts_the_least_recently_used_code():
    memo = CanonicalMemo("test", maxsize=2)
    memo.put("a", 1)
    memo.put("b", 2)
    assert memo.get("a") == 1
    memo.put("c", 3)
    assert "b" not in memo
    assert "a" in memo and "c" in memo
    assert (len(memo), memo.evictions) == (2, 1)
    with pytest.raises(ValueError):
        CanonicalMemo("test", maxsize=0)
