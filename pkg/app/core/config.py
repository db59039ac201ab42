import os

from pydantic import ValidationInfo, field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    model_config = SettingsConfigDict(case_sensitive=True, env_file=".env", env_file_encoding="utf-8")

    # Application
    PROJECT_NAME: str = "Selfmap Chow API"
    API_V1_STR: str = "/api/v1"
    API_VERSION: str = "1.0.0"
    DEBUG: bool = os.getenv("DEBUG", "False").lower() in ("true", "1", "t")

    # Server
    SERVER_HOST: str = "0.0.0.0"
    SERVER_PORT: int = 8000
    WORKERS: int = 2

    # Logging
    LOG_LEVEL: str = "INFO"
    LOG_DIR: str = "logs"
    LOG_FILE: str = "selfmap_chow.log"
    LOG_TO_FILE: bool = True

    # Persistent result cache
    SELFMAP_CHOW_CACHE: str = ".selfmap-chow.cache"

    # Engine
    JOBS: int = 1
    SELFCHECK_SEED: int = 20240611
    MAX_QUERY_DEGREE: int = 4

    @field_validator("JOBS", "WORKERS")
    @classmethod
    def at_least_one(cls, v: int, info: ValidationInfo) -> int:
        if v < 1:
            raise ValueError(f"{info.field_name} must be at least 1, got {v}")
        return v


# Create settings instance
settings = Settings()
