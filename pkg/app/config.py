"""Application configuration."""
import logging
import sys

from pydantic_settings import BaseSettings, SettingsConfigDict
from pythonjsonlogger import jsonlogger


class Settings(BaseSettings):
    """Application settings."""

    model_config = SettingsConfigDict(env_file=".env", case_sensitive=False)

    app_name: str = "Q-Generic Point Sets"
    app_version: str = "0.2.0"
    debug: bool = False
    host: str = "0.0.0.0"
    port: int = 8000
    log_level: str = "INFO"
    log_json: bool = False

    # Use SQLite in-memory database for development without PostgreSQL
    database_url: str = "sqlite+aiosqlite:///:memory:"
    database_echo: bool = False

    verify_threads: int = 1
    default_seed: int = 0

    # p^d above this switches the rich-basis search to random slices
    enumeration_limit: int = 2_000_000
    # |D| above this skips the incidence-counting pass
    incidence_limit: int = 200
    random_search_attempts: int = 10_000


settings = Settings()

LOG_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'


def setup_logging(level: str | None = None, json_format: bool | None = None) -> None:
    """Configure root logging on stderr.

    Args:
        level: Log level name, defaults to settings.log_level
        json_format: Emit JSON lines, defaults to settings.log_json
    """
    level = (level or settings.log_level).upper()
    json_format = settings.log_json if json_format is None else json_format

    handler = logging.StreamHandler(sys.stderr)
    if json_format:
        handler.setFormatter(jsonlogger.JsonFormatter(LOG_FORMAT))
    else:
        handler.setFormatter(logging.Formatter(LOG_FORMAT))

    root = logging.getLogger()
    root.handlers[:] = [handler]
    root.setLevel(level)
