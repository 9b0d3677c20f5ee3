"""Runtime settings read from the environment (and an optional ``.env`` file)."""
import os
from functools import lru_cache
from typing import Literal

from dotenv import load_dotenv
from pydantic import BaseModel, Field

Precision = Literal["double", "extended"]

PRECISION_ENV = "OSCENT_PRECISION"
LOG_LEVEL_ENV = "OSCENT_LOG_LEVEL"


class Settings(BaseModel):
    # Accumulation mode of the hypergeometric kernels
    precision: Precision = "extended"
    log_level: str = Field(default="WARNING")


@lru_cache(maxsize=1)
def get_settings() -> Settings:
    """Load ``.env`` once and build the settings.

    Call ``get_settings.cache_clear()`` after changing the environment.
    """
    load_dotenv()
    values = {}
    if os.environ.get(PRECISION_ENV):
        values["precision"] = os.environ[PRECISION_ENV].strip().lower()
    if os.environ.get(LOG_LEVEL_ENV):
        values["log_level"] = os.environ[LOG_LEVEL_ENV].strip().upper()
    return Settings(**values)


def resolve_precision(precision: Precision | None = None) -> Precision:
    """Explicit argument wins over the configured mode."""
    if precision is None:
        return get_settings().precision
    if precision not in ("double", "extended"):
        raise ValueError(f"unknown precision mode {precision!r}")
    return precision
