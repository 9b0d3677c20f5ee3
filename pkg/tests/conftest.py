import pytest

from oscillator_entropy.config import LOG_LEVEL_ENV, PRECISION_ENV, get_settings


@pytest.fixture(autouse=True)
def default_settings(monkeypatch):
    """Every test starts from the built-in defaults."""
    monkeypatch.delenv(PRECISION_ENV, raising=False)
    monkeypatch.delenv(LOG_LEVEL_ENV, raising=False)
    get_settings.cache_clear()
    yield
    get_settings.cache_clear()
