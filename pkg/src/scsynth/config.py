from pydantic_settings import BaseSettings


class Settings(BaseSettings):
    APP_ENV: str = "development"
    LOG_LEVEL: str = "info"

    DEFAULT_BETA: float = 2.0
    DEFAULT_BUDGET: int = 1_000_000
    DEFAULT_GRID: int = 16
    DEFAULT_SN_LENGTH: int = 256
    DEFAULT_CHAINS: int = 1
    DEFAULT_EARLY_STOP_COST: float = 0.0

    BENCH_TOLERANCE: float = 0.05
    ENUM_LIMIT: int = 2_000_000
    COST_CACHE_SIZE: int = 65_536
    TRAJECTORY_EVERY: int = 1

    model_config = {
        "env_prefix": "SCSYNTH_",
        "env_file": ".env",
        "env_file_encoding": "utf-8",
    }


settings = Settings()
