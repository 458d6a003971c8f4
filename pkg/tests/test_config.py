import pytest

from biharp.config import get_settings


@pytest.fixture
def fresh_settings():
    get_settings.cache_clear()
    yield get_settings
    get_settings.cache_clear()


def test_comma_separated_origins(monkeypatch, fresh_settings):
    monkeypatch.setenv("ALLOWED_ORIGINS", " http://a, http://b ,,")
    assert fresh_settings().ALLOWED_ORIGINS == ["http://a", "http://b"]


def test_json_list_origins(monkeypatch, fresh_settings):
    monkeypatch.setenv("ALLOWED_ORIGINS", '["http://a", "http://b"]')
    assert fresh_settings().ALLOWED_ORIGINS == ["http://a", "http://b"]


def test_default_origin_and_budgets(monkeypatch, fresh_settings):
    monkeypatch.delenv("ALLOWED_ORIGINS", raising=False)
    monkeypatch.setenv("ADVERSARIAL_BUDGET", "500")
    settings = fresh_settings()
    assert settings.ALLOWED_ORIGINS == ["http://localhost:8080"]
    assert settings.ADVERSARIAL_BUDGET == 500
