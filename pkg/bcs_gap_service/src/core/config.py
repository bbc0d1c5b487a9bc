from pydantic import field_validator
from pydantic_settings import BaseSettings


class Settings(BaseSettings):
    """Configuration using Pydantic BaseSettings for validation and environment variable loading."""

    # Application settings
    app_name: str = "bcs_gap_service"
    log_level: str = "INFO"
    log_dir: str = "logs"

    # Run settings
    default_config_path: str = "configs/default.json"

    # Performance settings
    max_concurrent_solves: int = 4

    @field_validator("log_level")
    @classmethod
    def validate_log_level(cls, v):
        level = v.upper()
        if level not in {"DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"}:
            raise ValueError(f"Unsupported log level: {v}")
        return level

    @field_validator("max_concurrent_solves")
    @classmethod
    def validate_max_concurrent_solves(cls, v):
        if v < 1:
            raise ValueError("max_concurrent_solves must be at least 1")
        return v

    class Config:
        env_file = ".env"
        env_prefix = "BCS_GAP_"
        case_sensitive = False
