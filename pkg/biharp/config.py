from functools import lru_cache

from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """
    Centralized runtime configuration loaded from environment variables.
    CLI flags override these values.
    """

    APP_NAME: str = "biharp"
    API_PREFIX: str = "/api"
    ALLOWED_ORIGINS: list[str] | str = ["http://localhost:8080"]
    LOG_LEVEL: str = "INFO"

    DEFAULT_SEED: int = 42
    DEFAULT_DEPTH: int = 4
    DEFAULT_TRIALS: int = 100  # random multipliers per fixture
    ADVERSARIAL_BUDGET: int = 2000
    TWO_SUMMING_SEQUENCES: int = 10
    X0_BUDGET: int = 200
    MAX_DEPTH: int = 8

    model_config = SettingsConfigDict(env_file=".env", env_file_encoding="utf-8", extra="ignore")


@lru_cache
def get_settings() -> Settings:
    settings = Settings()
    # pydantic-settings decodes a JSON list itself; anything else is comma-separated
    if isinstance(settings.ALLOWED_ORIGINS, str):
        settings.ALLOWED_ORIGINS = [s.strip() for s in settings.ALLOWED_ORIGINS.split(",") if s.strip()]
    return settings
